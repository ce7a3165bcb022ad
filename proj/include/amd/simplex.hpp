#ifndef AMD_SIMPLEX_HPP
#define AMD_SIMPLEX_HPP

#include "amd/lp.hpp"

namespace amd {

struct SimplexResult {
  Rational value;
  std::vector<Rational> solution;  // one value per LP variable
};

// Exact rational primal simplex (two-phase tableau, Dantzig pivoting
// with a switch to Bland's rule on stalling, so termination is
// guaranteed). Mechanism LPs are always feasible and bounded; an
// infeasible or unbounded tableau indicates a malformed program and
// throws std::logic_error.
SimplexResult solve_lp(const LinearProgram& lp);

}  // namespace amd

#endif  // AMD_SIMPLEX_HPP
