#ifndef AMD_SOLVER_DET_HPP
#define AMD_SOLVER_DET_HPP

#include <cstdint>

#include "amd/incentives.hpp"

namespace amd {

struct DetSolveOptions {
  std::uint64_t node_budget = 0;  // 0 = unlimited
  bool parallel = true;
};

struct DetSolveResult {
  DeterministicMechanism mechanism;
  Rational value;
  std::uint64_t explored_nodes = 0;
};

// Exhaustive branch-and-bound over all outcome functions. Returns a
// mechanism satisfying the requested solution concept that maximizes the
// expected objective; among optima, the lexicographically smallest
// outcome map (cells in row-major type-vector order, outcomes by index).
// An optimum always exists: constant mechanisms are incentive compatible.
// Throws BudgetExhausted instead of returning an unproven answer when the
// node budget runs out.
DetSolveResult solve_det(const Setting& s, const Objective& obj,
                         Concept sc, const DetSolveOptions& opts = {});

struct DetDecision {
  bool attained = false;
  DeterministicMechanism mechanism;  // goal-reaching witness when attained
  Rational value;                    // its expected objective
  std::uint64_t explored_nodes = 0;
};

// Decision variant: is there an incentive-compatible mechanism with
// expected objective >= goal? Comparison is exact; the search stops as
// soon as any goal-reaching mechanism is found. Throws InputError if the
// objective carries no goal.
DetDecision decide_det(const Setting& s, const Objective& obj,
                       Concept sc, const DetSolveOptions& opts = {});

// Serial reference search, kept for testing the parallel driver against.
namespace serial {
DetSolveResult solve_det(const Setting& s, const Objective& obj,
                         Concept sc, const DetSolveOptions& opts = {});
}  // namespace serial

}  // namespace amd

#endif  // AMD_SOLVER_DET_HPP
