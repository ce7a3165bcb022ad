#ifndef AMD_SETTING_HPP
#define AMD_SETTING_HPP

#include <optional>
#include <string>
#include <vector>

#include "amd/rational.hpp"
#include "amd/type_space.hpp"

namespace amd {

// Prior over type vectors: either one independent distribution per agent
// or a joint table over the full product space (flat row-major order).
struct Prior {
  enum class Kind { independent, joint };
  Kind kind = Kind::independent;
  std::vector<std::vector<Rational>> marginals;  // independent: per agent
  std::vector<Rational> joint;                   // joint: per vector index
};

// A finite preference-aggregation setting: agents with private types,
// a common-knowledge prior, outcomes, and per-agent utility tables
// u_i(type, outcome). Immutable after validation; every operation on it
// is a pure function.
struct Setting {
  std::vector<std::string> agent_names;
  std::vector<std::string> outcome_names;
  std::vector<std::vector<std::string>> type_names;  // per agent
  Prior prior;
  // utilities[i] is dense |types_i| x |outcomes|, row-major by type.
  std::vector<std::vector<Rational>> utilities;

  TypeSpace space;  // filled by validate_setting

  int num_agents() const { return static_cast<int>(agent_names.size()); }
  int num_outcomes() const { return static_cast<int>(outcome_names.size()); }
  int num_types(int agent) const {
    return static_cast<int>(type_names[agent].size());
  }

  const Rational& utility(int agent, int type, int outcome) const {
    return utilities[agent][static_cast<std::size_t>(type) * outcome_names.size() + outcome];
  }

  // Prior mass of a full type vector.
  Rational mass(VectorIndex v) const;
};

// Checks every invariant (nonempty distinct labels, total utility
// tables, prior exactly summing to 1) and fills in the index space.
// Throws InputError naming the first violation and its location.
Setting validate_setting(Setting raw);

// Distribution over the opposing type space given agent's own type:
// the product of the other agents' marginals for independent priors, the
// normalized conditional slice for joint priors. Conditioning on a type
// of zero marginal mass yields the uniform distribution so that
// Bayes-Nash constraints stay well-defined for all types.
std::vector<Rational> conditional_other_types(const Setting& s, int agent,
                                              int own_type);

// Objective g(type vector, outcome): social welfare derived from the
// utility tables, or an explicit dense table. `goal` is the decision
// threshold when present.
struct Objective {
  enum class Kind { social_welfare, explicit_table };
  Kind kind = Kind::social_welfare;
  std::vector<Rational> table;  // explicit: [vector * num_outcomes + outcome]
  std::optional<Rational> goal;

  static Objective social_welfare() { return {}; }
};

// g(v, o) under the objective; social welfare is sum_i u_i(theta_i, o).
Rational objective_value(const Setting& s, const Objective& obj, VectorIndex v,
                         int outcome);

// Dense g table in flat order, materialized once for the solvers.
std::vector<Rational> objective_table(const Setting& s, const Objective& obj);

}  // namespace amd

#endif  // AMD_SETTING_HPP
