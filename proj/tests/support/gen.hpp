#ifndef AMD_TESTS_GEN_HPP
#define AMD_TESTS_GEN_HPP

#include <random>

#include "amd/mechanism.hpp"
#include "amd/reductions.hpp"

namespace amd::testgen {

using Rng = std::mt19937_64;

struct SettingShape {
  int num_agents = 2;
  int min_types = 1, max_types = 3;
  int min_outcomes = 2, max_outcomes = 4;
  bool allow_zero_mass = true;   // occasional zero-probability types
  bool joint_prior = false;      // encode the prior as a joint table
};

// Setting with small integer utilities and random rational priors;
// deterministic per seed.
Setting random_setting(Rng& rng, const SettingShape& shape = {});

// Re-encodes an independent prior as the equivalent joint table.
Setting to_joint_prior(const Setting& s);

DeterministicMechanism random_det_mechanism(Rng& rng, const Setting& s);
RandomizedMechanism random_rand_mechanism(Rng& rng, const Setting& s);

// The showcase setting: agent 1 with two equally likely types, agent 2
// with one type, three outcomes; the standard small case where the
// randomized optimum strictly beats the deterministic one (5 vs 11/2).
Setting showcase_setting();

GraphInstance random_graph(Rng& rng, int n, double edge_prob);
KnapsackInstance random_knapsack(Rng& rng, int m, long long max_weight,
                                 long long max_value);

}  // namespace amd::testgen

#endif  // AMD_TESTS_GEN_HPP
