#ifndef AMD_SOLVER_RAND_HPP
#define AMD_SOLVER_RAND_HPP

#include "amd/simplex.hpp"

namespace amd {

struct RandSolveResult {
  RandomizedMechanism mechanism;
  Rational value;
};

// Optimal randomized mechanism via the LP relaxation-free formulation:
// builds the truthfulness LP, solves it exactly, and reshapes the
// optimal point into a mechanism. The result always re-verifies against
// the corresponding incentive check and reproduces the LP value.
RandSolveResult solve_rand(const Setting& s, const Objective& obj,
                           Concept sc);

struct RandDecision {
  bool attained = false;
  RandomizedMechanism mechanism;
  Rational value;
};

// Goal decision by exact comparison of the LP optimum against the goal.
RandDecision decide_rand(const Setting& s, const Objective& obj,
                         Concept sc);

}  // namespace amd

#endif  // AMD_SOLVER_RAND_HPP
