#include "amd/solver_det.hpp"

#include <atomic>
#include <cstdint>
#include <mutex>

#include "amd/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amd {

namespace {

// The search assigns outcome-map cells in row-major type-vector order,
// outcomes tried in index order, so complete maps are visited in
// lexicographic order and the first optimum found is the lexicographic
// tie-break winner.
//
// Pruning:
//   rule 1 (feasibility): a dominant-strategy constraint couples exactly
//     two cells that differ in one agent's coordinate and is checked when
//     the later cell is assigned; a Bayes-Nash constraint couples two
//     full "rows" of an agent and is checked at the unique cell that
//     completes them.
//   rule 2 (bound): assigned value plus a per-cell optimistic suffix sum;
//     prune strictly below the incumbent, or at equality once an
//     equal-value lexicographically-smaller map is already in hand.

struct SearchTables {
  int num_cells = 0;
  int num_outcomes = 0;
  Concept solution_concept = Concept::ds;

  std::vector<Rational> contrib;  // mass(v) * g(v, k), dense
  std::vector<Rational> suffix;   // suffix[v] = sum of per-cell maxima from v on
  Rational constant_best;         // value of the best constant mechanism

  // Dominant strategies: ds_ok[a] is a (t, t', k, k') truth table saying
  // outcomes k at (t, w) and k' at (t', w) violate neither direction of
  // the pairwise constraint. Neighbor lists enumerate, per cell, the
  // earlier cells that differ in exactly one coordinate.
  struct Neighbor {
    int cell;
    int agent;
    int type;       // this cell's coordinate for `agent`
    int other_type; // the earlier cell's coordinate
  };
  std::vector<std::vector<char>> ds_ok;
  std::vector<std::vector<Neighbor>> neighbors;

  // Bayes-Nash: constraints become fully assigned exactly when the cell
  // with every opposing coordinate at its maximum is filled.
  struct BnConstraint {
    int agent;
    int true_type;
    int misreport;
  };
  std::vector<std::vector<BnConstraint>> bn_due;             // per cell
  std::vector<std::vector<std::vector<VectorIndex>>> comb;   // [a][t][w]
  std::vector<std::vector<std::vector<Rational>>> cond;      // [a][t][w]

  const Rational& contribution(int v, int k) const {
    return contrib[static_cast<std::size_t>(v) * num_outcomes + k];
  }
  bool pair_ok(int agent, int t, int tp, int k, int kp,
               const Setting& s) const {
    const std::size_t nt = s.num_types(agent);
    const std::size_t no = num_outcomes;
    return ds_ok[agent][((t * nt + tp) * no + k) * no + kp] != 0;
  }
};

SearchTables build_tables(const Setting& s, const Objective& obj,
                          Concept sc) {
  SearchTables tb;
  tb.num_cells = static_cast<int>(s.space.total());
  tb.num_outcomes = s.num_outcomes();
  tb.solution_concept = sc;
  const int T = tb.num_cells;
  const int O = tb.num_outcomes;

  const std::vector<Rational> g = objective_table(s, obj);
  tb.contrib.resize(static_cast<std::size_t>(T) * O);
  for (VectorIndex v = 0; v < T; ++v) {
    const Rational mass = s.mass(v);
    for (int k = 0; k < O; ++k)
      tb.contrib[static_cast<std::size_t>(v) * O + k] =
          mass * g[static_cast<std::size_t>(v) * O + k];
  }

  tb.suffix.assign(T + 1, Rational(0));
  for (int v = T - 1; v >= 0; --v) {
    const Rational* best = &tb.contribution(v, 0);
    for (int k = 1; k < O; ++k)
      if (tb.contribution(v, k) > *best) best = &tb.contribution(v, k);
    tb.suffix[v] = tb.suffix[v + 1] + *best;
  }

  for (int k = 0; k < O; ++k) {
    Rational total(0);
    for (int v = 0; v < T; ++v) total += tb.contribution(v, k);
    if (k == 0 || total > tb.constant_best) tb.constant_best = total;
  }

  if (sc == Concept::ds) {
    tb.ds_ok.resize(s.num_agents());
    for (int a = 0; a < s.num_agents(); ++a) {
      const int nt = s.num_types(a);
      tb.ds_ok[a].assign(static_cast<std::size_t>(nt) * nt * O * O, 0);
      for (int t = 0; t < nt; ++t)
        for (int tp = 0; tp < nt; ++tp)
          for (int k = 0; k < O; ++k)
            for (int kp = 0; kp < O; ++kp) {
              const bool ok = s.utility(a, t, k) >= s.utility(a, t, kp) &&
                              s.utility(a, tp, kp) >= s.utility(a, tp, k);
              tb.ds_ok[a][((static_cast<std::size_t>(t) * nt + tp) * O + k) *
                              O +
                          kp] = ok ? 1 : 0;
            }
    }
    tb.neighbors.resize(T);
    for (VectorIndex v = 0; v < T; ++v)
      for (int a = 0; a < s.num_agents(); ++a) {
        const int t = s.space.type_of(v, a);
        for (int tp = 0; tp < t; ++tp)
          tb.neighbors[v].push_back(
              {static_cast<int>(s.space.replace(v, a, tp)), a, t, tp});
      }
  } else {
    tb.comb.resize(s.num_agents());
    tb.cond.resize(s.num_agents());
    for (int a = 0; a < s.num_agents(); ++a) {
      const TypeSpace others = s.space.opposing(a);
      tb.comb[a].resize(s.num_types(a));
      tb.cond[a].resize(s.num_types(a));
      for (int t = 0; t < s.num_types(a); ++t) {
        tb.cond[a][t] = conditional_other_types(s, a, t);
        tb.comb[a][t].resize(others.total());
        for (VectorIndex w = 0; w < others.total(); ++w)
          tb.comb[a][t][w] = s.space.combine(a, t, w);
      }
    }
    tb.bn_due.resize(T);
    for (VectorIndex v = 0; v < T; ++v)
      for (int a = 0; a < s.num_agents(); ++a) {
        bool completes = true;
        for (int j = 0; j < s.num_agents() && completes; ++j)
          if (j != a && s.space.type_of(v, j) != s.space.size(j) - 1)
            completes = false;
        if (!completes) continue;
        const int c = s.space.type_of(v, a);
        for (int x = 0; x < c; ++x) {
          tb.bn_due[v].push_back({a, c, x});
          tb.bn_due[v].push_back({a, x, c});
        }
      }
  }
  return tb;
}

constexpr std::uint64_t kFlushInterval = 4096;

// Cross-worker coordination: a monotone best-value bulletin, pooled node
// accounting against the budget, and the abort latch for goal hits and
// budget exhaustion.
struct Shared {
  std::mutex mu;
  Rational best;
  bool goal_found = false;
  std::vector<int> goal_map;
  Rational goal_value;

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> abort{false};
  std::atomic<bool> budget_blown{false};
  std::uint64_t budget = 0;  // 0 = unlimited

  explicit Shared(Rational init) : best(std::move(init)) {}
};

struct Incumbent {
  Rational value;
  std::vector<int> map;
  bool map_set = false;
};

class Engine {
 public:
  Engine(const Setting& s, const SearchTables& tb, Shared& shared,
         const Rational* goal)
      : s_(s), tb_(tb), shared_(shared), goal_(goal) {
    out_.assign(tb.num_cells, -1);
    inc_.value = tb.constant_best;
    value_ = 0;
  }

  // Seeds cells [0, depth) before searching the rest.
  void load_prefix(const std::vector<int>& prefix, const Rational& value) {
    for (std::size_t v = 0; v < prefix.size(); ++v) out_[v] = prefix[v];
    value_ = value;
  }

  // Searches cells [depth, num_cells); when cutoff >= 0, stops at that
  // depth and hands each surviving partial assignment to `sink` instead.
  template <typename Sink>
  void run(int depth, int cutoff, Sink&& sink) {
    search(depth, cutoff, sink);
    flush_nodes();
  }
  void run(int depth) {
    auto ignore = [](const std::vector<int>&, const Rational&) {};
    search(depth, -1, ignore);
    flush_nodes();
  }

  const Incumbent& incumbent() const { return inc_; }

 private:
  template <typename Sink>
  bool search(int depth, int cutoff, Sink& sink) {  // true = stop now
    if (depth == cutoff || depth == tb_.num_cells) {
      sink(out_, value_);
      return false;
    }
    const int O = tb_.num_outcomes;
    for (int k = 0; k < O; ++k) {
      if (++local_nodes_ >= kFlushInterval) {
        if (flush_nodes()) return true;
      }

      bool feasible = true;
      if (tb_.solution_concept == Concept::ds) {
        for (const auto& nb : tb_.neighbors[depth]) {
          if (!tb_.pair_ok(nb.agent, nb.type, nb.other_type, k, out_[nb.cell],
                           s_)) {
            feasible = false;
            break;
          }
        }
      }
      if (!feasible) continue;
      out_[depth] = k;
      if (tb_.solution_concept == Concept::bn && !bn_due_ok(depth)) {
        out_[depth] = -1;
        continue;
      }

      value_ += tb_.contribution(depth, k);
      bound_ = value_ + tb_.suffix[depth + 1];
      const int cmp = cmp_bound_incumbent();
      const bool goal_dead = goal_ != nullptr && bound_ < *goal_;
      if ((cmp < 0 || (cmp == 0 && inc_.map_set)) || goal_dead) {
        value_ -= tb_.contribution(depth, k);
        out_[depth] = -1;
        continue;
      }

      if (depth + 1 == tb_.num_cells && cutoff < 0) {
        if (on_leaf()) return true;
      } else {
        if (search(depth + 1, cutoff, sink)) return true;
      }
      value_ -= tb_.contribution(depth, k);
      out_[depth] = -1;
    }
    return false;
  }

  bool bn_due_ok(int v) {
    for (const auto& c : tb_.bn_due[v]) {
      const auto& cond = tb_.cond[c.agent][c.true_type];
      const auto& truth_cells = tb_.comb[c.agent][c.true_type];
      const auto& dev_cells = tb_.comb[c.agent][c.misreport];
      Rational gain(0);
      for (std::size_t w = 0; w < cond.size(); ++w) {
        if (cond[w] == 0) continue;
        gain += cond[w] * (s_.utility(c.agent, c.true_type,
                                      out_[dev_cells[w]]) -
                           s_.utility(c.agent, c.true_type,
                                      out_[truth_cells[w]]));
      }
      if (gain > 0) return false;
    }
    return true;
  }

  bool on_leaf() {
    if (value_ > inc_.value) {
      inc_.value = value_;
      inc_.map = out_;
      inc_.map_set = true;
    } else if (value_ == inc_.value && !inc_.map_set) {
      inc_.map = out_;
      inc_.map_set = true;
    }
    if (goal_ != nullptr && value_ >= *goal_) {
      std::lock_guard<std::mutex> lock(shared_.mu);
      if (!shared_.goal_found) {
        shared_.goal_found = true;
        shared_.goal_map = out_;
        shared_.goal_value = value_;
      }
      shared_.abort.store(true, std::memory_order_relaxed);
      return true;
    }
    return false;
  }

  int cmp_bound_incumbent() const {
    return mpq_cmp(bound_.get_mpq_t(), inc_.value.get_mpq_t());
  }

  // Periodic bookkeeping: pool node counts, watch the abort latch, and
  // exchange incumbent values with the bulletin.
  bool flush_nodes() {
    shared_.nodes.fetch_add(local_nodes_, std::memory_order_relaxed);
    local_nodes_ = 0;
    if (shared_.budget != 0 &&
        shared_.nodes.load(std::memory_order_relaxed) > shared_.budget) {
      shared_.budget_blown.store(true, std::memory_order_relaxed);
      shared_.abort.store(true, std::memory_order_relaxed);
    }
    if (shared_.abort.load(std::memory_order_relaxed)) return true;
    std::lock_guard<std::mutex> lock(shared_.mu);
    if (shared_.best < inc_.value) {
      shared_.best = inc_.value;
    } else if (shared_.best > inc_.value) {
      inc_.value = shared_.best;
      inc_.map_set = false;  // the bulletin value belongs to another map
    }
    return false;
  }

  const Setting& s_;
  const SearchTables& tb_;
  Shared& shared_;
  const Rational* goal_;
  std::vector<int> out_;
  Rational value_;
  Rational bound_;
  Incumbent inc_;
  std::uint64_t local_nodes_ = 0;
};

struct SearchOutcome {
  Incumbent incumbent;
  bool goal_found = false;
  std::vector<int> goal_map;
  Rational goal_value;
  std::uint64_t nodes = 0;
};

SearchOutcome run_search(const Setting& s, const Objective& obj,
                         Concept sc, const DetSolveOptions& opts,
                         const Rational* goal) {
  const SearchTables tb = build_tables(s, obj, sc);
  Shared shared(tb.constant_best);
  shared.budget = opts.node_budget;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  const int T = tb.num_cells;
  const int O = tb.num_outcomes;

  // Depth splitting the tree into enough independent subtrees to feed
  // the thread pool; shallow problems just run in one piece.
  int prefix_depth = 0;
  if (opts.parallel && threads > 1 && T > 2) {
    prefix_depth = 1;
    if (O < 2 * threads && T > 3) prefix_depth = 2;
  }

  SearchOutcome result;
  if (prefix_depth == 0) {
    Engine engine(s, tb, shared, goal);
    engine.run(0);
    result.incumbent = engine.incumbent();
  } else {
    std::vector<std::pair<std::vector<int>, Rational>> prefixes;
    {
      Engine enumerator(s, tb, shared, goal);
      enumerator.run(0, prefix_depth,
                     [&](const std::vector<int>& out, const Rational& val) {
                       prefixes.emplace_back(
                           std::vector<int>(out.begin(),
                                            out.begin() + prefix_depth),
                           val);
                     });
    }
    std::vector<Incumbent> results(prefixes.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
      if (shared.abort.load(std::memory_order_relaxed)) continue;
      Engine engine(s, tb, shared, goal);
      engine.load_prefix(prefixes[i].first, prefixes[i].second);
      engine.run(prefix_depth);
      results[i] = engine.incumbent();
    }
    // Deterministic merge: best value, then earliest subtree; prefixes
    // are in cell order, so earliest subtree = lexicographically
    // smallest map.
    Incumbent merged;
    merged.value = tb.constant_best;
    for (const auto& r : results) {
      if (!r.map_set) continue;
      if (!merged.map_set || r.value > merged.value) {
        merged = r;
      }
    }
    result.incumbent = std::move(merged);
  }

  result.nodes = shared.nodes.load();
  if (shared.budget_blown.load()) throw BudgetExhausted(result.nodes);
  {
    std::lock_guard<std::mutex> lock(shared.mu);
    result.goal_found = shared.goal_found;
    result.goal_map = shared.goal_map;
    result.goal_value = shared.goal_value;
  }
  return result;
}

}  // namespace

DetSolveResult solve_det(const Setting& s, const Objective& obj,
                         Concept sc, const DetSolveOptions& opts) {
  SearchOutcome out = run_search(s, obj, sc, opts, nullptr);
  DetSolveResult res;
  res.mechanism.outcome_of = std::move(out.incumbent.map);
  res.value = std::move(out.incumbent.value);
  res.explored_nodes = out.nodes;
  return res;
}

DetDecision decide_det(const Setting& s, const Objective& obj, Concept sc,
                       const DetSolveOptions& opts) {
  if (!obj.goal) throw InputError("decision requires a goal in the objective");
  const Rational goal = *obj.goal;
  SearchOutcome out = run_search(s, obj, sc, opts, &goal);
  DetDecision dec;
  dec.explored_nodes = out.nodes;
  if (out.goal_found) {
    dec.attained = true;
    dec.mechanism.outcome_of = std::move(out.goal_map);
    dec.value = std::move(out.goal_value);
  }
  return dec;
}

namespace serial {

namespace {

// Plain recursive reference search: direct utility comparisons, no
// lookup tables, no thread machinery. Kept simple on purpose; the
// parallel engine is validated against it.
class ReferenceSearch {
 public:
  ReferenceSearch(const Setting& s, const Objective& obj, Concept sc,
                  std::uint64_t budget)
      : s_(s), concept_(sc), budget_(budget) {
    const int T = static_cast<int>(s.space.total());
    const int O = s.num_outcomes();
    const std::vector<Rational> g = objective_table(s, obj);
    contrib_.resize(static_cast<std::size_t>(T) * O);
    for (VectorIndex v = 0; v < T; ++v)
      for (int k = 0; k < O; ++k)
        contrib_[static_cast<std::size_t>(v) * O + k] =
            s.mass(v) * g[static_cast<std::size_t>(v) * O + k];
    suffix_.assign(T + 1, Rational(0));
    for (int v = T - 1; v >= 0; --v) {
      Rational best = contrib_[static_cast<std::size_t>(v) * O];
      for (int k = 1; k < O; ++k) {
        const Rational& c = contrib_[static_cast<std::size_t>(v) * O + k];
        if (c > best) best = c;
      }
      suffix_[v] = suffix_[v + 1] + best;
    }
    for (int k = 0; k < O; ++k) {
      Rational total(0);
      for (int v = 0; v < T; ++v)
        total += contrib_[static_cast<std::size_t>(v) * O + k];
      if (k == 0 || total > best_value_) best_value_ = total;
    }
    out_.assign(T, -1);
    if (sc == Concept::bn) {
      cond_.resize(s.num_agents());
      for (int a = 0; a < s.num_agents(); ++a)
        for (int t = 0; t < s.num_types(a); ++t)
          cond_[a].push_back(conditional_other_types(s, a, t));
    }
  }

  DetSolveResult solve() {
    Rational value(0);
    recurse(0, value);
    DetSolveResult res;
    res.mechanism.outcome_of = std::move(best_map_);
    res.value = std::move(best_value_);
    res.explored_nodes = nodes_;
    return res;
  }

 private:
  bool feasible_so_far(int v, int k) {
    // Pairwise constraints against earlier cells (dominant strategies).
    for (int a = 0; a < s_.num_agents(); ++a) {
      const int t = s_.space.type_of(v, a);
      for (int tp = 0; tp < t; ++tp) {
        const int kp = out_[s_.space.replace(v, a, tp)];
        if (s_.utility(a, t, kp) > s_.utility(a, t, k)) return false;
        if (s_.utility(a, tp, k) > s_.utility(a, tp, kp)) return false;
      }
    }
    return true;
  }

  bool bn_constraints_ok(int v) {
    for (int a = 0; a < s_.num_agents(); ++a) {
      bool completes = true;
      for (int j = 0; j < s_.num_agents() && completes; ++j)
        if (j != a && s_.space.type_of(v, j) != s_.space.size(j) - 1)
          completes = false;
      if (!completes) continue;
      const int c = s_.space.type_of(v, a);
      for (int x = 0; x < c; ++x)
        if (bn_violated(a, c, x) || bn_violated(a, x, c)) return false;
    }
    return true;
  }

  bool bn_violated(int a, int t, int r) {
    const TypeSpace others = s_.space.opposing(a);
    Rational gain(0);
    for (VectorIndex w = 0; w < others.total(); ++w) {
      const Rational& p = cond_[a][t][w];
      if (p == 0) continue;
      gain += p * (s_.utility(a, t, out_[s_.space.combine(a, r, w)]) -
                   s_.utility(a, t, out_[s_.space.combine(a, t, w)]));
    }
    return gain > 0;
  }

  void recurse(int v, Rational& value) {
    const int T = static_cast<int>(s_.space.total());
    const int O = s_.num_outcomes();
    for (int k = 0; k < O; ++k) {
      if (budget_ != 0 && ++nodes_ > budget_) throw BudgetExhausted(nodes_);
      if (budget_ == 0) ++nodes_;
      if (concept_ == Concept::ds && !feasible_so_far(v, k)) continue;
      out_[v] = k;
      if (concept_ == Concept::bn && !bn_constraints_ok(v)) {
        out_[v] = -1;
        continue;
      }
      value += contrib_[static_cast<std::size_t>(v) * O + k];
      const Rational bound = value + suffix_[v + 1];
      const bool prune =
          bound < best_value_ || (bound == best_value_ && !best_map_.empty());
      if (!prune) {
        if (v + 1 == T) {
          if (value > best_value_ ||
              (value == best_value_ && best_map_.empty())) {
            best_value_ = value;
            best_map_ = out_;
          }
        } else {
          recurse(v + 1, value);
        }
      }
      value -= contrib_[static_cast<std::size_t>(v) * O + k];
      out_[v] = -1;
    }
  }

  const Setting& s_;
  Concept concept_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Rational> contrib_;
  std::vector<Rational> suffix_;
  std::vector<std::vector<std::vector<Rational>>> cond_;
  std::vector<int> out_;
  Rational best_value_;
  std::vector<int> best_map_;
};

}  // namespace

DetSolveResult solve_det(const Setting& s, const Objective& obj,
                         Concept sc, const DetSolveOptions& opts) {
  return ReferenceSearch(s, obj, sc, opts.node_budget).solve();
}

}  // namespace serial

}  // namespace amd
