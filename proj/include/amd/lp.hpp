#ifndef AMD_LP_HPP
#define AMD_LP_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "amd/incentives.hpp"

namespace amd {

enum class Relation { geq, eq };

struct LinearConstraint {
  std::vector<Rational> coeffs;  // dense over all variables
  Relation rel = Relation::geq;
  Rational rhs;
};

// Maximization LP over variables p[v * num_outcomes + k], the probability
// of outcome k at reported type vector v. Rows list the truthfulness
// inequalities first (self-report pairs included, matching the 2-agent
// counts |T1|^2|T2| + |T1||T2|^2 for dominant strategies and
// |T1|^2 + |T2|^2 for Bayes-Nash), then one distribution equality per
// type vector. All variables are additionally bounded below by zero.
struct LinearProgram {
  int num_vars = 0;
  int num_outcomes = 0;
  std::vector<LinearConstraint> rows;
  std::vector<Rational> objective;
  std::size_t ic_row_count = 0;       // leading truthfulness rows
  std::size_t simplex_row_count = 0;  // trailing sum-to-one rows

  int var(VectorIndex v, int outcome) const {
    return static_cast<int>(v) * num_outcomes + outcome;
  }
};

// Builds the randomized-mechanism-design LP for the given concept.
// Dominant strategies: one inequality per (agent, opposing vector, true
// type, reported type). Bayes-Nash: one per (agent, true type, reported
// type), weighting the opposing vectors by conditional_other_types.
// The objective row is the prior-weighted expected objective.
LinearProgram build_lp(const Setting& s, const Objective& obj,
                       Concept sc);

// Human-readable LP-format text with exact "num/den" coefficients, for
// cross-checking against external solvers.
void write_lp_text(std::ostream& out, const LinearProgram& lp,
                   const Setting& s);
std::string lp_text(const LinearProgram& lp, const Setting& s);

}  // namespace amd

#endif  // AMD_LP_HPP
