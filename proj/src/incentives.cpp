#include "amd/incentives.hpp"

#include <cstdint>

#include "amd/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amd {

namespace {

// Work below which the OpenMP kernels fall back to the serial loop.
constexpr std::int64_t kParallelThreshold = 1 << 12;

// Expected utility of agent `a` with true type `t` at reported vector v.
Rational eu_rand(const Setting& s, const RandomizedMechanism& m, int a, int t,
                 VectorIndex v) {
  Rational e(0);
  for (int k = 0; k < s.num_outcomes(); ++k) {
    const Rational& p = m.prob(v, k);
    if (p != 0) e += p * s.utility(a, t, k);
  }
  return e;
}

// Flattened dominant-strategy constraint space, ordered (agent, true
// type, opposing vector, misreport) so that the smallest violated index
// is the lexicographically first witness. Self-report pairs are part of
// the space but never violated.
struct DsSpace {
  std::vector<TypeSpace> opposing;
  std::vector<std::int64_t> offset;  // per agent, plus total at the end

  explicit DsSpace(const Setting& s) {
    const int n = s.num_agents();
    opposing.reserve(n);
    offset.assign(n + 1, 0);
    for (int a = 0; a < n; ++a) {
      opposing.push_back(s.space.opposing(a));
      const std::int64_t block = static_cast<std::int64_t>(s.num_types(a)) *
                                 opposing[a].total() * s.num_types(a);
      offset[a + 1] = offset[a] + block;
    }
  }

  std::int64_t total() const { return offset.back(); }

  void decode(const Setting& s, std::int64_t idx, int& agent, int& t,
              VectorIndex& w, int& r) const {
    agent = 0;
    while (idx >= offset[agent + 1]) ++agent;
    idx -= offset[agent];
    const int nt = s.num_types(agent);
    r = static_cast<int>(idx % nt);
    idx /= nt;
    w = idx % opposing[agent].total();
    t = static_cast<int>(idx / opposing[agent].total());
  }
};

// Gain of deviating from t to r against opposing vector w; positive means
// the constraint is violated.
template <typename Mech>
Rational ds_gain(const Setting& s, const Mech& m, int agent, int t,
                 VectorIndex w, int r);

template <>
Rational ds_gain(const Setting& s, const DeterministicMechanism& m, int agent,
                 int t, VectorIndex w, int r) {
  const VectorIndex vt = s.space.combine(agent, t, w);
  const VectorIndex vr = s.space.combine(agent, r, w);
  return s.utility(agent, t, m(vr)) - s.utility(agent, t, m(vt));
}

template <>
Rational ds_gain(const Setting& s, const RandomizedMechanism& m, int agent,
                 int t, VectorIndex w, int r) {
  const VectorIndex vt = s.space.combine(agent, t, w);
  const VectorIndex vr = s.space.combine(agent, r, w);
  return eu_rand(s, m, agent, t, vr) - eu_rand(s, m, agent, t, vt);
}

// Violation test that avoids building the gain where a comparison does.
bool ds_violated(const Setting& s, const DeterministicMechanism& m, int agent,
                 int t, VectorIndex w, int r) {
  const VectorIndex vt = s.space.combine(agent, t, w);
  const VectorIndex vr = s.space.combine(agent, r, w);
  return s.utility(agent, t, m(vr)) > s.utility(agent, t, m(vt));
}

bool ds_violated(const Setting& s, const RandomizedMechanism& m, int agent,
                 int t, VectorIndex w, int r) {
  return ds_gain(s, m, agent, t, w, r) > 0;
}

template <typename Mech>
ManipulationWitness make_ds_witness(const Setting& s, const Mech& m,
                                    const DsSpace& space, int agent, int t,
                                    VectorIndex w, int r) {
  ManipulationWitness out;
  out.agent = agent;
  out.true_type = t;
  out.misreport = r;
  out.opposing = space.opposing[agent].decode(w);
  out.gain = ds_gain(s, m, agent, t, w, r);
  return out;
}

template <typename Mech>
CheckResult ds_check_serial(const Setting& s, const Mech& m) {
  const DsSpace space(s);
  for (int a = 0; a < s.num_agents(); ++a) {
    const std::int64_t opp = space.opposing[a].total();
    for (int t = 0; t < s.num_types(a); ++t)
      for (VectorIndex w = 0; w < opp; ++w)
        for (int r = 0; r < s.num_types(a); ++r) {
          if (r == t) continue;  // trivially satisfied
          if (ds_violated(s, m, a, t, w, r))
            return make_ds_witness(s, m, space, a, t, w, r);
        }
  }
  return std::nullopt;
}

template <typename Mech>
CheckResult ds_check_parallel(const Setting& s, const Mech& m) {
  const DsSpace space(s);
  const std::int64_t total = space.total();
  if (total < kParallelThreshold) return ds_check_serial(s, m);

  // One work unit per (agent, true type, opposing vector); misreports
  // stay in an inner loop so the decode cost amortizes.
  std::vector<std::int64_t> group_offset(s.num_agents() + 1, 0);
  for (int a = 0; a < s.num_agents(); ++a)
    group_offset[a + 1] = group_offset[a] + static_cast<std::int64_t>(
                                                s.num_types(a)) *
                                                space.opposing[a].total();
  const std::int64_t groups = group_offset.back();

  std::int64_t first = groups;
#pragma omp parallel for schedule(static) reduction(min : first)
  for (std::int64_t g = 0; g < groups; ++g) {
    if (g >= first) continue;
    int a = 0;
    while (g >= group_offset[a + 1]) ++a;
    const std::int64_t local = g - group_offset[a];
    const int t = static_cast<int>(local / space.opposing[a].total());
    const VectorIndex w = local % space.opposing[a].total();
    for (int r = 0; r < s.num_types(a); ++r)
      if (r != t && ds_violated(s, m, a, t, w, r)) {
        first = g;
        break;
      }
  }
  if (first == groups) return std::nullopt;
  int a = 0;
  while (first >= group_offset[a + 1]) ++a;
  const std::int64_t local = first - group_offset[a];
  const int t = static_cast<int>(local / space.opposing[a].total());
  const VectorIndex w = local % space.opposing[a].total();
  for (int r = 0; r < s.num_types(a); ++r)
    if (r != t && ds_violated(s, m, a, t, w, r))
      return make_ds_witness(s, m, space, a, t, w, r);
  return std::nullopt;  // unreachable: the group held a violation
}

// Bayes-Nash expected gain of reporting r with true type t, others drawn
// from the conditional distribution and reporting truthfully.
template <typename Mech>
Rational bn_gain(const Setting& s, const Mech& m, const TypeSpace& others,
                 const std::vector<Rational>& cond, int agent, int t, int r);

template <>
Rational bn_gain(const Setting& s, const DeterministicMechanism& m,
                 const TypeSpace& others, const std::vector<Rational>& cond,
                 int agent, int t, int r) {
  Rational gain(0);
  for (VectorIndex w = 0; w < others.total(); ++w) {
    if (cond[w] == 0) continue;
    const VectorIndex vt = s.space.combine(agent, t, w);
    const VectorIndex vr = s.space.combine(agent, r, w);
    gain += cond[w] * (s.utility(agent, t, m(vr)) - s.utility(agent, t, m(vt)));
  }
  return gain;
}

template <>
Rational bn_gain(const Setting& s, const RandomizedMechanism& m,
                 const TypeSpace& others, const std::vector<Rational>& cond,
                 int agent, int t, int r) {
  Rational gain(0);
  for (VectorIndex w = 0; w < others.total(); ++w) {
    if (cond[w] == 0) continue;
    const VectorIndex vt = s.space.combine(agent, t, w);
    const VectorIndex vr = s.space.combine(agent, r, w);
    gain += cond[w] *
            (eu_rand(s, m, agent, t, vr) - eu_rand(s, m, agent, t, vt));
  }
  return gain;
}

template <typename Mech>
CheckResult bn_check_serial(const Setting& s, const Mech& m) {
  for (int a = 0; a < s.num_agents(); ++a) {
    const TypeSpace others = s.space.opposing(a);
    for (int t = 0; t < s.num_types(a); ++t) {
      const std::vector<Rational> cond = conditional_other_types(s, a, t);
      for (int r = 0; r < s.num_types(a); ++r) {
        if (r == t) continue;
        Rational gain = bn_gain(s, m, others, cond, a, t, r);
        if (gain > 0) {
          ManipulationWitness out;
          out.agent = a;
          out.true_type = t;
          out.misreport = r;
          out.gain = std::move(gain);
          return out;
        }
      }
    }
  }
  return std::nullopt;
}

template <typename Mech>
CheckResult bn_check_parallel(const Setting& s, const Mech& m) {
  // One work unit per (agent, true type); misreports stay inside so the
  // conditional distribution is built once per unit.
  std::vector<std::int64_t> offset(s.num_agents() + 1, 0);
  for (int a = 0; a < s.num_agents(); ++a)
    offset[a + 1] = offset[a] + s.num_types(a);
  const std::int64_t groups = offset.back();
  if (groups * s.space.total() < kParallelThreshold)
    return bn_check_serial(s, m);

  std::int64_t first_pair = groups * (groups + 1);  // past any real index
#pragma omp parallel for schedule(dynamic, 1) reduction(min : first_pair)
  for (std::int64_t g = 0; g < groups; ++g) {
    if (g * (groups + 1) >= first_pair) continue;
    int a = 0;
    while (g >= offset[a + 1]) ++a;
    const int t = static_cast<int>(g - offset[a]);
    const TypeSpace others = s.space.opposing(a);
    const std::vector<Rational> cond = conditional_other_types(s, a, t);
    for (int r = 0; r < s.num_types(a); ++r)
      if (r != t && bn_gain(s, m, others, cond, a, t, r) > 0) {
        first_pair = g * (groups + 1) + r;
        break;
      }
  }
  if (first_pair == groups * (groups + 1)) return std::nullopt;
  const std::int64_t g = first_pair / (groups + 1);
  int a = 0;
  while (g >= offset[a + 1]) ++a;
  ManipulationWitness out;
  out.agent = a;
  out.true_type = static_cast<int>(g - offset[a]);
  out.misreport = static_cast<int>(first_pair % (groups + 1));
  out.gain = bn_gain(s, m, s.space.opposing(a),
                     conditional_other_types(s, a, out.true_type), a,
                     out.true_type, out.misreport);
  return out;
}

}  // namespace

CheckResult check_ds_det(const Setting& s, const DeterministicMechanism& m) {
  return ds_check_parallel(s, m);
}
CheckResult check_bn_det(const Setting& s, const DeterministicMechanism& m) {
  return bn_check_parallel(s, m);
}
CheckResult check_ds_rand(const Setting& s, const RandomizedMechanism& m) {
  return ds_check_parallel(s, m);
}
CheckResult check_bn_rand(const Setting& s, const RandomizedMechanism& m) {
  return bn_check_parallel(s, m);
}

namespace serial {
CheckResult check_ds_det(const Setting& s, const DeterministicMechanism& m) {
  return ds_check_serial(s, m);
}
CheckResult check_bn_det(const Setting& s, const DeterministicMechanism& m) {
  return bn_check_serial(s, m);
}
CheckResult check_ds_rand(const Setting& s, const RandomizedMechanism& m) {
  return ds_check_serial(s, m);
}
CheckResult check_bn_rand(const Setting& s, const RandomizedMechanism& m) {
  return bn_check_serial(s, m);
}
}  // namespace serial

namespace {

template <typename Mech>
Rational recompute_gain_impl(const Setting& s, const Mech& m, Concept sc,
                             const ManipulationWitness& w) {
  if (sc == Concept::ds) {
    if (!w.opposing)
      throw InputError("dominant-strategy witness lacks an opposing vector");
    const TypeSpace others = s.space.opposing(w.agent);
    const VectorIndex ow = others.encode(*w.opposing);
    return ds_gain(s, m, w.agent, w.true_type, ow, w.misreport);
  }
  return bn_gain(s, m, s.space.opposing(w.agent),
                 conditional_other_types(s, w.agent, w.true_type), w.agent,
                 w.true_type, w.misreport);
}

}  // namespace

Rational recompute_gain(const Setting& s, const DeterministicMechanism& m,
                        Concept sc, const ManipulationWitness& w) {
  return recompute_gain_impl(s, m, sc, w);
}

Rational recompute_gain(const Setting& s, const RandomizedMechanism& m,
                        Concept sc, const ManipulationWitness& w) {
  return recompute_gain_impl(s, m, sc, w);
}

}  // namespace amd
