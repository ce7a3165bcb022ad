#include "amd/reductions.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>

#include "amd/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amd {

bool GraphInstance::has_edge(int u, int v) const {
  for (const auto& e : edges)
    if ((e.first == u && e.second == v) || (e.first == v && e.second == u))
      return true;
  return false;
}

long long KnapsackInstance::total_weight() const {
  long long w = 0;
  for (const auto& it : items) w += it.first;
  return w;
}

long long KnapsackInstance::total_value() const {
  long long v = 0;
  for (const auto& it : items) v += it.second;
  return v;
}

TypeSpace ReductionMeta::space() const {
  if (tag == Tag::independent_set) return TypeSpace({graph.n, graph.n});
  return TypeSpace({knapsack.m(), 2});
}

namespace {

void validate_graph(const GraphInstance& g) {
  if (g.n < 1) throw InputError("graph: vertex count must be positive");
  if (g.K < 0 || g.K > g.n)
    throw InputError("graph: target K must lie in [0, n]");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (e.first < 0 || e.first >= g.n || e.second < 0 || e.second >= g.n)
      throw InputError("graph: edge endpoint out of range");
    if (e.first == e.second) throw InputError("graph: self-loop");
    auto norm = std::minmax(e.first, e.second);
    if (!seen.insert({norm.first, norm.second}).second)
      throw InputError("graph: duplicate edge");
  }
}

std::string vertex_label(int i) { return std::to_string(i + 1); }

// Shared outcome catalog so the generator and the witness builder index
// outcomes identically: the diagonal pair per vertex first, then the
// off-diagonal outcome(s) per ordered pair in row-major order.
struct IsCatalog {
  std::vector<std::string> names;
  std::vector<OutcomeRole> roles;
  std::vector<int> diag_high;                 // per vertex
  std::vector<int> diag_low;                  // per vertex
  std::vector<std::vector<int>> off_first;    // [i][j]: o_ij or o1_ij
  std::vector<std::vector<int>> off_second;   // [i][j]: o2_ij (edges only)

  explicit IsCatalog(const GraphInstance& g) {
    const int n = g.n;
    diag_high.resize(n);
    diag_low.resize(n);
    off_first.assign(n, std::vector<int>(n, -1));
    off_second.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i) {
      diag_high[i] = add("oH_" + vertex_label(i),
                         {OutcomeRole::Kind::diag_high, i, i});
      diag_low[i] =
          add("oL_" + vertex_label(i), {OutcomeRole::Kind::diag_low, i, i});
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::string suffix =
            "_" + vertex_label(i) + "_" + vertex_label(j);
        if (g.has_edge(i, j)) {
          off_first[i][j] =
              add("oE1" + suffix, {OutcomeRole::Kind::edge_first, i, j});
          off_second[i][j] =
              add("oE2" + suffix, {OutcomeRole::Kind::edge_second, i, j});
        } else {
          off_first[i][j] = add("oN" + suffix, {OutcomeRole::Kind::pair, i, j});
        }
      }
  }

  int add(std::string name, OutcomeRole role) {
    names.push_back(std::move(name));
    roles.push_back(role);
    return static_cast<int>(names.size()) - 1;
  }
};

}  // namespace

std::pair<Setting, ReductionMeta> reduce_is(const GraphInstance& g) {
  validate_graph(g);
  const int n = g.n;
  const IsCatalog cat(g);
  const Rational big(make_rational(5LL * n * n));  // the construction's dominating payoff

  Setting s;
  s.agent_names = {"agent1", "agent2"};
  s.outcome_names = cat.names;
  s.type_names.resize(2);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < n; ++i)
      s.type_names[a].push_back("v" + vertex_label(i));
  s.prior.kind = Prior::Kind::independent;
  s.prior.marginals.assign(
      2, std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));

  // Per-agent utilities depend on the own coordinate of each outcome:
  // agent 1 reads the row index, agent 2 the column index.
  s.utilities.assign(2, {});
  for (int a = 0; a < 2; ++a) {
    s.utilities[a].assign(static_cast<std::size_t>(n) * cat.names.size(),
                          Rational(0));
    for (int t = 0; t < n; ++t)
      for (std::size_t k = 0; k < cat.roles.size(); ++k) {
        const OutcomeRole& role = cat.roles[k];
        const int own = a == 0 ? role.i : role.j;
        Rational u;
        switch (role.kind) {
          case OutcomeRole::Kind::diag_high:
            u = 2;  // every membership outcome pays everyone 2
            break;
          case OutcomeRole::Kind::diag_low:
            u = t == own ? Rational(1) : -big;
            break;
          case OutcomeRole::Kind::pair:
            u = t == own ? Rational(2) : -big;
            break;
          case OutcomeRole::Kind::edge_first:
            u = t == own ? (a == 0 ? big : Rational(1)) : -big;
            break;
          case OutcomeRole::Kind::edge_second:
            u = t == own ? (a == 0 ? Rational(1) : big) : -big;
            break;
          default:
            throw std::logic_error("unexpected outcome role");
        }
        s.utilities[a][static_cast<std::size_t>(t) * cat.names.size() + k] = u;
      }
  }
  s = validate_setting(std::move(s));

  ReductionMeta meta;
  meta.tag = ReductionMeta::Tag::independent_set;
  meta.graph = g;
  meta.outcome_roles = cat.roles;
  meta.diag_high_outcome = cat.diag_high;
  const long long m = g.m();
  // G = (2m(5n^2+1) + 2(n-K) + 4K + 4(n^2-2m-n)) / n^2
  const Rational numerator =
      make_rational(2 * m) * (make_rational(5LL * n * n) + 1) +
      make_rational(2LL * (n - g.K)) + make_rational(4LL * g.K) +
      Rational(4) * (make_rational(1LL * n * n) - make_rational(2 * m) -
                     make_rational(n));
  meta.goal = numerator / make_rational(1LL * n * n);
  return {std::move(s), std::move(meta)};
}

DeterministicMechanism is_witness_mechanism(const GraphInstance& g,
                                            const std::vector<int>& S) {
  validate_graph(g);
  std::vector<char> in_s(g.n, 0);
  for (int v : S) {
    if (v < 0 || v >= g.n) throw InputError("witness set: vertex out of range");
    if (in_s[v]) throw InputError("witness set: duplicate vertex");
    in_s[v] = 1;
  }
  if (static_cast<int>(S.size()) != g.K)
    throw InputError("witness set has size " + std::to_string(S.size()) +
                     ", target K is " + std::to_string(g.K));
  for (const auto& e : g.edges)
    if (in_s[e.first] && in_s[e.second])
      throw InputError("witness set is not independent: edge " +
                       vertex_label(e.first) + "-" + vertex_label(e.second) +
                       " inside");

  const IsCatalog cat(g);
  DeterministicMechanism mech;
  mech.outcome_of.assign(static_cast<std::size_t>(g.n) * g.n, -1);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      int outcome;
      if (i == j) {
        outcome = in_s[i] ? cat.diag_high[i] : cat.diag_low[i];
      } else if (!g.has_edge(i, j)) {
        outcome = cat.off_first[i][j];
      } else if (in_s[j]) {
        outcome = cat.off_first[i][j];  // the row agent's favored split
      } else {
        outcome = cat.off_second[i][j];
      }
      mech.outcome_of[static_cast<std::size_t>(i) * g.n + j] = outcome;
    }
  return mech;
}

std::vector<int> extract_is(const ReductionMeta& meta,
                            const DeterministicMechanism& m) {
  if (meta.tag != ReductionMeta::Tag::independent_set)
    throw InputError("metadata does not describe an independent-set instance");
  // Membership reads off the diagonal. All membership outcomes carry the
  // same utilities, so a goal-reaching truthful mechanism may use any of
  // them interchangeably there; treat every one as a membership mark.
  const int n = meta.graph.n;
  std::vector<int> S;
  for (int i = 0; i < n; ++i) {
    const int outcome = m.outcome_of[static_cast<std::size_t>(i) * n + i];
    if (meta.outcome_roles[outcome].kind == OutcomeRole::Kind::diag_high)
      S.push_back(i);
  }
  return S;
}

namespace {

void validate_items(const KnapsackInstance& k) {
  for (const auto& it : k.items)
    if (it.first < 0 || it.second < 0)
      throw InputError("knapsack: negative weight or value");
}

void validate_knapsack(const KnapsackInstance& k) {
  if (k.items.empty()) throw InputError("knapsack: no items");
  if (k.C <= 0) throw InputError("knapsack: capacity must be positive");
  if (k.D <= 0) throw InputError("knapsack: value goal must be positive");
  validate_items(k);
}

}  // namespace

std::pair<Setting, ReductionMeta> reduce_knapsack(const KnapsackInstance& k) {
  validate_knapsack(k);
  const int m = k.m();
  for (const auto& it : k.items)
    if (it.first == 0)
      throw InputError(
          "knapsack: zero-weight item not supported (type probabilities are "
          "w_j/W)");
  const long long W = k.total_weight();
  const long long V = k.total_value();

  Setting s;
  s.agent_names = {"agent1", "agent2"};
  for (int j = 0; j < m + 2; ++j)
    s.outcome_names.push_back("o" + std::to_string(j + 1));
  const int reject = m;    // o_{m+1}
  const int opt_out = m + 1;  // o_{m+2}
  s.type_names.resize(2);
  for (int j = 0; j < m; ++j)
    s.type_names[0].push_back("t" + std::to_string(j + 1));
  s.type_names[1] = {"s1", "s2"};
  s.prior.kind = Prior::Kind::independent;
  s.prior.marginals.resize(2);
  for (int j = 0; j < m; ++j)
    s.prior.marginals[0].push_back(make_rational(k.items[j].first, W));
  s.prior.marginals[1] = {Rational(1, 2), Rational(1, 2)};

  s.utilities.assign(2, {});
  s.utilities[0].assign(static_cast<std::size_t>(m) * (m + 2), Rational(0));
  for (int j = 0; j < m; ++j) {
    // u1(t_j, o_j) = (v_j / w_j + 1) W ; u1(t_j, o_{m+2}) = -W
    s.utilities[0][static_cast<std::size_t>(j) * (m + 2) + j] =
        (make_rational(k.items[j].second, k.items[j].first) + 1) *
        make_rational(W);
    s.utilities[0][static_cast<std::size_t>(j) * (m + 2) + opt_out] =
        make_rational(-W);
  }
  s.utilities[1].assign(static_cast<std::size_t>(2) * (m + 2), Rational(0));
  s.utilities[1][reject] = make_rational(W);            // u2(s1, o_{m+1})
  s.utilities[1][opt_out] = make_rational(W - k.C);      // u2(s1, o_{m+2})
  s.utilities[1][(m + 2) + opt_out] =
      make_rational(W) * make_rational(2 * V + 1);
  s = validate_setting(std::move(s));

  ReductionMeta meta;
  meta.tag = ReductionMeta::Tag::knapsack;
  meta.knapsack = k;
  for (int j = 0; j < m; ++j) {
    meta.outcome_roles.push_back({OutcomeRole::Kind::item, j, -1});
    meta.item_outcome.push_back(j);
  }
  meta.outcome_roles.push_back({OutcomeRole::Kind::reject, -1, -1});
  meta.outcome_roles.push_back({OutcomeRole::Kind::opt_out, -1, -1});
  // G = W V + (W + D) / 2
  meta.goal = make_rational(W) * make_rational(V) + make_rational(W + k.D, 2);
  return {std::move(s), std::move(meta)};
}

DeterministicMechanism knapsack_witness_mechanism(const KnapsackInstance& k,
                                                  const std::vector<int>& S) {
  validate_knapsack(k);
  const int m = k.m();
  std::vector<char> in_s(m, 0);
  long long weight = 0, value = 0;
  for (int j : S) {
    if (j < 0 || j >= m) throw InputError("witness subset: item out of range");
    if (in_s[j]) throw InputError("witness subset: duplicate item");
    in_s[j] = 1;
    weight += k.items[j].first;
    value += k.items[j].second;
  }
  if (weight > k.C)
    throw InputError("witness subset weighs " + std::to_string(weight) +
                     ", over capacity " + std::to_string(k.C));
  if (value < k.D)
    throw InputError("witness subset is worth " + std::to_string(value) +
                     ", below the goal " + std::to_string(k.D));

  DeterministicMechanism mech;
  mech.outcome_of.assign(static_cast<std::size_t>(m) * 2, -1);
  for (int j = 0; j < m; ++j) {
    mech.outcome_of[static_cast<std::size_t>(j) * 2] = in_s[j] ? j : m;
    mech.outcome_of[static_cast<std::size_t>(j) * 2 + 1] = m + 1;
  }
  return mech;
}

std::vector<int> extract_knapsack(const ReductionMeta& meta,
                                  const DeterministicMechanism& m) {
  if (meta.tag != ReductionMeta::Tag::knapsack)
    throw InputError("metadata does not describe a knapsack instance");
  std::vector<int> S;
  for (int j = 0; j < meta.knapsack.m(); ++j)
    if (m.outcome_of[static_cast<std::size_t>(j) * 2] == meta.item_outcome[j])
      S.push_back(j);
  return S;
}

namespace {

std::vector<int> mask_to_list(unsigned long mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

bool independent(const GraphInstance& g, unsigned long mask) {
  for (const auto& e : g.edges)
    if ((mask >> e.first & 1) && (mask >> e.second & 1)) return false;
  return true;
}

}  // namespace

IndependentSetResult max_independent_set(const GraphInstance& g, int bound) {
  validate_graph(g);
  if (g.n > bound)
    throw InputError("independent-set oracle bound exceeded: n = " +
                     std::to_string(g.n));
  const unsigned long limit = 1UL << g.n;
  int best_size = 0;
  long long best_mask = 0;

#pragma omp parallel
  {
    int local_size = 0;
    long long local_mask = 0;
#pragma omp for schedule(static) nowait
    for (long long mask = 0; mask < static_cast<long long>(limit); ++mask) {
      if (!independent(g, static_cast<unsigned long>(mask))) continue;
      const int size = __builtin_popcountll(mask);
      if (size > local_size || (size == local_size && mask < local_mask)) {
        local_size = size;
        local_mask = mask;
      }
    }
#pragma omp critical
    {
      if (local_size > best_size ||
          (local_size == best_size && local_mask < best_mask)) {
        best_size = local_size;
        best_mask = local_mask;
      }
    }
  }
  return {best_size, mask_to_list(static_cast<unsigned long>(best_mask))};
}

KnapsackOracleResult knapsack_oracle(const KnapsackInstance& k, int bound) {
  validate_items(k);
  if (k.m() > bound)
    throw InputError("knapsack oracle bound exceeded: m = " +
                     std::to_string(k.m()));
  const unsigned long limit = 1UL << k.m();
  long long best_value = -1;
  long long best_mask = 0;

#pragma omp parallel
  {
    long long local_value = -1;
    long long local_mask = 0;
#pragma omp for schedule(static) nowait
    for (long long mask = 0; mask < static_cast<long long>(limit); ++mask) {
      long long weight = 0, value = 0;
      for (int j = 0; j < k.m(); ++j)
        if (mask >> j & 1) {
          weight += k.items[j].first;
          value += k.items[j].second;
        }
      if (weight > k.C) continue;
      if (value > local_value ||
          (value == local_value && mask < local_mask)) {
        local_value = value;
        local_mask = mask;
      }
    }
#pragma omp critical
    {
      if (local_value > best_value ||
          (local_value == best_value && local_mask < best_mask)) {
        best_value = local_value;
        best_mask = local_mask;
      }
    }
  }
  return {best_value < 0 ? 0 : best_value,
          mask_to_list(static_cast<unsigned long>(best_mask))};
}

namespace serial {

IndependentSetResult max_independent_set(const GraphInstance& g, int bound) {
  validate_graph(g);
  if (g.n > bound)
    throw InputError("independent-set oracle bound exceeded: n = " +
                     std::to_string(g.n));
  int best_size = 0;
  unsigned long best_mask = 0;
  for (unsigned long mask = 0; mask < (1UL << g.n); ++mask) {
    if (!independent(g, mask)) continue;
    const int size = __builtin_popcountll(mask);
    if (size > best_size) {
      best_size = size;
      best_mask = mask;
    }
  }
  return {best_size, mask_to_list(best_mask)};
}

KnapsackOracleResult knapsack_oracle(const KnapsackInstance& k, int bound) {
  validate_items(k);
  if (k.m() > bound)
    throw InputError("knapsack oracle bound exceeded: m = " +
                     std::to_string(k.m()));
  long long best_value = -1;
  unsigned long best_mask = 0;
  for (unsigned long mask = 0; mask < (1UL << k.m()); ++mask) {
    long long weight = 0, value = 0;
    for (int j = 0; j < k.m(); ++j)
      if (mask >> j & 1) {
        weight += k.items[j].first;
        value += k.items[j].second;
      }
    if (weight > k.C) continue;
    if (value > best_value) {
      best_value = value;
      best_mask = mask;
    }
  }
  return {best_value < 0 ? 0 : best_value, mask_to_list(best_mask)};
}

}  // namespace serial

namespace {

std::istream& next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && line[pos] != '#') return in;
  }
  return in;
}

}  // namespace

GraphInstance parse_graph(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line))
    throw InputError("graph file: missing \"n K\" header");
  GraphInstance g;
  {
    std::istringstream h(line);
    if (!(h >> g.n >> g.K))
      throw InputError("graph file: malformed header \"" + line + "\"");
  }
  while (next_content_line(in, line)) {
    std::istringstream e(line);
    int u, v;
    if (!(e >> u >> v))
      throw InputError("graph file: malformed edge line \"" + line + "\"");
    if (u < 1 || u > g.n || v < 1 || v > g.n)
      throw InputError("graph file: vertex out of range in \"" + line + "\"");
    g.edges.emplace_back(u - 1, v - 1);
  }
  validate_graph(g);
  return g;
}

KnapsackInstance parse_knapsack(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line))
    throw InputError("knapsack file: missing \"C D\" header");
  KnapsackInstance k;
  {
    std::istringstream h(line);
    if (!(h >> k.C >> k.D))
      throw InputError("knapsack file: malformed header \"" + line + "\"");
  }
  while (next_content_line(in, line)) {
    std::istringstream e(line);
    long long w, v;
    if (!(e >> w >> v))
      throw InputError("knapsack file: malformed item line \"" + line + "\"");
    k.items.emplace_back(w, v);
  }
  validate_knapsack(k);
  return k;
}

}  // namespace amd
