#ifndef AMD_MECHANISM_HPP
#define AMD_MECHANISM_HPP

#include <vector>

#include "amd/setting.hpp"

namespace amd {

// Total map from type vectors to a single outcome index, flat row-major.
struct DeterministicMechanism {
  std::vector<int> outcome_of;

  int operator()(VectorIndex v) const { return outcome_of[v]; }
};

// Total map from type vectors to a distribution over outcomes;
// dist[v * num_outcomes + k] is the probability of outcome k.
struct RandomizedMechanism {
  int num_outcomes = 0;
  std::vector<Rational> dist;

  const Rational& prob(VectorIndex v, int outcome) const {
    return dist[static_cast<std::size_t>(v) * num_outcomes + outcome];
  }
};

// Shape and invariant checks against a setting; throws InputError.
void validate_mechanism(const Setting& s, const DeterministicMechanism& m);
void validate_mechanism(const Setting& s, const RandomizedMechanism& m);

// Point-mass embedding of a deterministic mechanism.
RandomizedMechanism lift_deterministic(const Setting& s,
                                       const DeterministicMechanism& m);

// E over the prior of g(theta, m(theta)).
Rational expected_objective_det(const Setting& s,
                                const DeterministicMechanism& m,
                                const Objective& obj);

// Double expectation: over the prior and over each outcome distribution.
Rational expected_objective_rand(const Setting& s,
                                 const RandomizedMechanism& m,
                                 const Objective& obj);

}  // namespace amd

#endif  // AMD_MECHANISM_HPP
