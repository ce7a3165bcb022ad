#include "support/oracle.hpp"

namespace amd::testoracle {

namespace {

// Flat index of a full type assignment, recomputed from scratch (last
// agent fastest).
VectorIndex flat_index(const Setting& s, const std::vector<int>& types) {
  VectorIndex v = 0;
  for (int a = 0; a < s.num_agents(); ++a)
    v = v * s.num_types(a) + types[a];
  return v;
}

// Steps `types` through the opposing assignments of `agent` (all other
// coordinates, last one fastest); returns false after the last one.
bool next_opposing(const Setting& s, int agent, std::vector<int>& types) {
  for (int a = s.num_agents() - 1; a >= 0; --a) {
    if (a == agent) continue;
    if (++types[a] < s.num_types(a)) return true;
    types[a] = 0;
  }
  return false;
}

Rational opposing_weight(const Setting& s, int agent,
                         const std::vector<int>& types) {
  Rational w(1);
  for (int a = 0; a < s.num_agents(); ++a)
    if (a != agent) w *= s.prior.marginals[a][types[a]];
  return w;
}

template <typename Mech>
Rational utility_at(const Setting& s, const Mech& m, int agent, int true_type,
                    VectorIndex v);

template <>
Rational utility_at(const Setting& s, const DeterministicMechanism& m,
                    int agent, int true_type, VectorIndex v) {
  return s.utility(agent, true_type, m.outcome_of[v]);
}

template <>
Rational utility_at(const Setting& s, const RandomizedMechanism& m, int agent,
                    int true_type, VectorIndex v) {
  Rational e(0);
  for (int k = 0; k < s.num_outcomes(); ++k)
    e += m.prob(v, k) * s.utility(agent, true_type, k);
  return e;
}

template <typename Mech>
std::optional<ManipulationWitness> literal_ds(const Setting& s,
                                              const Mech& m) {
  for (int agent = 0; agent < s.num_agents(); ++agent)
    for (int t = 0; t < s.num_types(agent); ++t) {
      std::vector<int> types(s.num_agents(), 0);
      types[agent] = t;
      do {
        for (int r = 0; r < s.num_types(agent); ++r) {
          if (r == t) continue;
          std::vector<int> deviated = types;
          deviated[agent] = r;
          const Rational truth =
              utility_at(s, m, agent, t, flat_index(s, types));
          const Rational dev =
              utility_at(s, m, agent, t, flat_index(s, deviated));
          if (dev > truth) {
            ManipulationWitness w;
            w.agent = agent;
            w.true_type = t;
            w.misreport = r;
            std::vector<int> opposing;
            for (int a = 0; a < s.num_agents(); ++a)
              if (a != agent) opposing.push_back(types[a]);
            w.opposing = std::move(opposing);
            w.gain = dev - truth;
            return w;
          }
        }
      } while (next_opposing(s, agent, types));
    }
  return std::nullopt;
}

// Conditional weight of one opposing assignment given the agent's own
// type, matching the documented zero-mass rule: independent priors use
// the product of the other marginals; joint priors normalize the slice,
// falling back to uniform when the slice has no mass.
std::vector<Rational> conditional_weights(const Setting& s, int agent, int t) {
  std::vector<Rational> weights;
  std::vector<int> types(s.num_agents(), 0);
  types[agent] = t;
  if (s.prior.kind == Prior::Kind::independent) {
    do weights.push_back(opposing_weight(s, agent, types));
    while (next_opposing(s, agent, types));
    return weights;
  }
  Rational total(0);
  do {
    weights.push_back(s.prior.joint[flat_index(s, types)]);
    total += weights.back();
  } while (next_opposing(s, agent, types));
  if (total == 0) {
    const Rational u(1, static_cast<unsigned long>(weights.size()));
    for (auto& w : weights) w = u;
  } else {
    for (auto& w : weights) w /= total;
  }
  return weights;
}

template <typename Mech>
std::optional<ManipulationWitness> literal_bn(const Setting& s,
                                              const Mech& m) {
  for (int agent = 0; agent < s.num_agents(); ++agent)
    for (int t = 0; t < s.num_types(agent); ++t) {
      const std::vector<Rational> weights = conditional_weights(s, agent, t);
      for (int r = 0; r < s.num_types(agent); ++r) {
        if (r == t) continue;
        Rational gain(0);
        std::vector<int> types(s.num_agents(), 0);
        types[agent] = t;
        std::size_t i = 0;
        do {
          std::vector<int> deviated = types;
          deviated[agent] = r;
          gain += weights[i++] *
                  (utility_at(s, m, agent, t, flat_index(s, deviated)) -
                   utility_at(s, m, agent, t, flat_index(s, types)));
        } while (next_opposing(s, agent, types));
        if (gain > 0) {
          ManipulationWitness w;
          w.agent = agent;
          w.true_type = t;
          w.misreport = r;
          w.gain = std::move(gain);
          return w;
        }
      }
    }
  return std::nullopt;
}

}  // namespace

std::optional<ManipulationWitness> literal_check(
    const Setting& s, const DeterministicMechanism& m, Concept sc) {
  return sc == Concept::ds ? literal_ds(s, m) : literal_bn(s, m);
}

std::optional<ManipulationWitness> literal_check(const Setting& s,
                                                 const RandomizedMechanism& m,
                                                 Concept sc) {
  return sc == Concept::ds ? literal_ds(s, m) : literal_bn(s, m);
}

Rational literal_expected_value(const Setting& s, const Objective& obj,
                                const DeterministicMechanism& m) {
  Rational total(0);
  std::vector<int> types(s.num_agents(), 0);
  while (true) {
    const VectorIndex v = flat_index(s, types);
    Rational mass(1);
    if (s.prior.kind == Prior::Kind::independent) {
      for (int a = 0; a < s.num_agents(); ++a)
        mass *= s.prior.marginals[a][types[a]];
    } else {
      mass = s.prior.joint[v];
    }
    Rational g(0);
    if (obj.kind == Objective::Kind::social_welfare) {
      for (int a = 0; a < s.num_agents(); ++a)
        g += s.utility(a, types[a], m.outcome_of[v]);
    } else {
      g = obj.table[static_cast<std::size_t>(v) * s.num_outcomes() +
                    m.outcome_of[v]];
    }
    total += mass * g;

    int a = s.num_agents() - 1;
    for (; a >= 0; --a) {
      if (++types[a] < s.num_types(a)) break;
      types[a] = 0;
    }
    if (a < 0) break;
  }
  return total;
}

void enumerate_mechanisms(
    const Setting& s,
    const std::function<void(const DeterministicMechanism&)>& visit) {
  DeterministicMechanism m;
  m.outcome_of.assign(s.space.total(), 0);
  while (true) {
    visit(m);
    int cell = static_cast<int>(m.outcome_of.size()) - 1;
    for (; cell >= 0; --cell) {
      if (++m.outcome_of[cell] < s.num_outcomes()) break;
      m.outcome_of[cell] = 0;
    }
    if (cell < 0) return;
  }
}

BruteForceResult brute_force_solve(const Setting& s, const Objective& obj,
                                   Concept sc) {
  BruteForceResult best;
  bool found = false;
  enumerate_mechanisms(s, [&](const DeterministicMechanism& m) {
    if (literal_check(s, m, sc)) return;  // manipulable
    Rational value = literal_expected_value(s, obj, m);
    if (!found || value > best.value) {
      found = true;
      best.value = std::move(value);
      best.mechanism = m;
    }
  });
  return best;  // constant maps are truthful, so `found` always holds
}

}  // namespace amd::testoracle
