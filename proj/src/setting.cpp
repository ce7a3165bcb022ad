#include "amd/setting.hpp"

#include <set>

#include "amd/errors.hpp"

namespace amd {

Rational Setting::mass(VectorIndex v) const {
  if (prior.kind == Prior::Kind::joint) return prior.joint[v];
  Rational p(1);
  for (int a = 0; a < num_agents(); ++a) p *= prior.marginals[a][space.type_of(v, a)];
  return p;
}

namespace {

void check_labels(const std::vector<std::string>& labels,
                  const std::string& where) {
  if (labels.empty()) throw InputError(where + ": empty label list");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw InputError(where + ": empty label");
    if (l.find(',') != std::string::npos)
      throw InputError(where + ": label \"" + l + "\" contains a comma");
    if (!seen.insert(l).second)
      throw InputError(where + ": duplicate label \"" + l + "\"");
  }
}

}  // namespace

Setting validate_setting(Setting raw) {
  const int n_agents = raw.num_agents();
  if (n_agents < 1) throw InputError("setting has no agents");
  check_labels(raw.agent_names, "agents");
  check_labels(raw.outcome_names, "outcomes");
  if (raw.type_names.size() != static_cast<std::size_t>(n_agents))
    throw InputError("type lists do not match the agent list");
  std::vector<int> sizes(n_agents);
  for (int a = 0; a < n_agents; ++a) {
    check_labels(raw.type_names[a], "types of " + raw.agent_names[a]);
    sizes[a] = static_cast<int>(raw.type_names[a].size());
  }
  raw.space = TypeSpace(sizes);

  // Priors: nonnegative mass, total exactly 1.
  if (raw.prior.kind == Prior::Kind::independent) {
    if (raw.prior.marginals.size() != static_cast<std::size_t>(n_agents))
      throw InputError("prior: one distribution per agent required");
    for (int a = 0; a < n_agents; ++a) {
      const auto& p = raw.prior.marginals[a];
      if (p.size() != static_cast<std::size_t>(sizes[a]))
        throw InputError("prior of " + raw.agent_names[a] +
                         ": expected one mass per type");
      Rational sum(0);
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t] < 0)
          throw InputError("prior of " + raw.agent_names[a] + ", type " +
                           raw.type_names[a][t] + ": negative mass");
        sum += p[t];
      }
      if (sum != 1)
        throw InputError("prior of " + raw.agent_names[a] + " sums to " +
                         to_string(sum) + ", not 1");
    }
  } else {
    if (raw.prior.joint.size() != static_cast<std::size_t>(raw.space.total()))
      throw InputError("joint prior: expected one mass per type vector");
    Rational sum(0);
    for (VectorIndex v = 0; v < raw.space.total(); ++v) {
      if (raw.prior.joint[v] < 0)
        throw InputError("joint prior: negative mass at vector " +
                         std::to_string(v));
      sum += raw.prior.joint[v];
    }
    if (sum != 1)
      throw InputError("joint prior sums to " + to_string(sum) + ", not 1");
  }

  // Utility tables: total over types x outcomes.
  if (raw.utilities.size() != static_cast<std::size_t>(n_agents))
    throw InputError("utilities: one table per agent required");
  for (int a = 0; a < n_agents; ++a) {
    const std::size_t want =
        static_cast<std::size_t>(sizes[a]) * raw.outcome_names.size();
    if (raw.utilities[a].size() != want)
      throw InputError("utility table of " + raw.agent_names[a] +
                       " is incomplete: " +
                       std::to_string(raw.utilities[a].size()) + " of " +
                       std::to_string(want) + " entries");
  }
  return raw;
}

std::vector<Rational> conditional_other_types(const Setting& s, int agent,
                                              int own_type) {
  const TypeSpace others = s.space.opposing(agent);
  std::vector<Rational> dist(others.total());
  if (s.prior.kind == Prior::Kind::independent) {
    for (VectorIndex w = 0; w < others.total(); ++w) {
      const VectorIndex full = s.space.combine(agent, own_type, w);
      Rational p(1);
      for (int a = 0; a < s.num_agents(); ++a)
        if (a != agent) p *= s.prior.marginals[a][s.space.type_of(full, a)];
      dist[w] = p;
    }
    return dist;
  }
  Rational marginal(0);
  for (VectorIndex w = 0; w < others.total(); ++w) {
    dist[w] = s.prior.joint[s.space.combine(agent, own_type, w)];
    marginal += dist[w];
  }
  if (marginal == 0) {
    // Zero-mass own type: condition uniformly so the Bayes-Nash
    // inequality for this type stays well-defined.
    const Rational u(1, static_cast<unsigned long>(others.total()));
    for (auto& d : dist) d = u;
    return dist;
  }
  for (auto& d : dist) d /= marginal;
  return dist;
}

Rational objective_value(const Setting& s, const Objective& obj, VectorIndex v,
                         int outcome) {
  if (obj.kind == Objective::Kind::explicit_table)
    return obj.table[static_cast<std::size_t>(v) * s.num_outcomes() + outcome];
  Rational sw(0);
  for (int a = 0; a < s.num_agents(); ++a)
    sw += s.utility(a, s.space.type_of(v, a), outcome);
  return sw;
}

std::vector<Rational> objective_table(const Setting& s, const Objective& obj) {
  if (obj.kind == Objective::Kind::explicit_table) return obj.table;
  std::vector<Rational> g(static_cast<std::size_t>(s.space.total()) *
                          s.num_outcomes());
  for (VectorIndex v = 0; v < s.space.total(); ++v)
    for (int k = 0; k < s.num_outcomes(); ++k)
      g[static_cast<std::size_t>(v) * s.num_outcomes() + k] =
          objective_value(s, obj, v, k);
  return g;
}

}  // namespace amd
