#include "amd/mechanism.hpp"

#include "amd/errors.hpp"

namespace amd {

void validate_mechanism(const Setting& s, const DeterministicMechanism& m) {
  if (m.outcome_of.size() != static_cast<std::size_t>(s.space.total()))
    throw InputError("mechanism covers " + std::to_string(m.outcome_of.size()) +
                     " type vectors, setting has " +
                     std::to_string(s.space.total()));
  for (int o : m.outcome_of)
    if (o < 0 || o >= s.num_outcomes())
      throw InputError("mechanism maps to outcome index " + std::to_string(o) +
                       " out of range");
}

void validate_mechanism(const Setting& s, const RandomizedMechanism& m) {
  if (m.num_outcomes != s.num_outcomes() ||
      m.dist.size() != static_cast<std::size_t>(s.space.total()) *
                           s.num_outcomes())
    throw InputError("randomized mechanism shape does not match the setting");
  for (VectorIndex v = 0; v < s.space.total(); ++v) {
    Rational sum(0);
    for (int k = 0; k < s.num_outcomes(); ++k) {
      const Rational& p = m.prob(v, k);
      if (p < 0)
        throw InputError("negative probability at type vector " +
                         std::to_string(v));
      sum += p;
    }
    if (sum != 1)
      throw InputError("distribution at type vector " + std::to_string(v) +
                       " sums to " + to_string(sum) + ", not 1");
  }
}

RandomizedMechanism lift_deterministic(const Setting& s,
                                       const DeterministicMechanism& m) {
  RandomizedMechanism r;
  r.num_outcomes = s.num_outcomes();
  r.dist.assign(static_cast<std::size_t>(s.space.total()) * r.num_outcomes,
                Rational(0));
  for (VectorIndex v = 0; v < s.space.total(); ++v)
    r.dist[static_cast<std::size_t>(v) * r.num_outcomes + m(v)] = 1;
  return r;
}

Rational expected_objective_det(const Setting& s,
                                const DeterministicMechanism& m,
                                const Objective& obj) {
  Rational total(0);
  for (VectorIndex v = 0; v < s.space.total(); ++v)
    total += s.mass(v) * objective_value(s, obj, v, m(v));
  return total;
}

Rational expected_objective_rand(const Setting& s,
                                 const RandomizedMechanism& m,
                                 const Objective& obj) {
  Rational total(0);
  for (VectorIndex v = 0; v < s.space.total(); ++v) {
    Rational inner(0);
    for (int k = 0; k < s.num_outcomes(); ++k) {
      const Rational& p = m.prob(v, k);
      if (p != 0) inner += p * objective_value(s, obj, v, k);
    }
    total += s.mass(v) * inner;
  }
  return total;
}

}  // namespace amd
