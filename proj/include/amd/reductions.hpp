#ifndef AMD_REDUCTIONS_HPP
#define AMD_REDUCTIONS_HPP

#include <iosfwd>
#include <utility>

#include "amd/mechanism.hpp"

namespace amd {

// Undirected graph with an independent-set size target K. Vertices are
// 0-based internally; text I/O and labels are 1-based.
struct GraphInstance {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // unordered pairs, no self-loops
  int K = 0;

  int m() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
};

// Items (weight, value), a capacity and a value goal.
struct KnapsackInstance {
  std::vector<std::pair<long long, long long>> items;  // (w_j, v_j) >= 0
  long long C = 0;
  long long D = 0;

  int m() const { return static_cast<int>(items.size()); }
  long long total_weight() const;  // W
  long long total_value() const;   // V
};

// What each generated outcome stands for in the source instance.
struct OutcomeRole {
  enum class Kind {
    diag_high,    // i-diagonal outcome rewarding membership
    diag_low,     // i-diagonal outcome for non-membership
    pair,         // off-diagonal outcome for a non-edge (i, j)
    edge_first,   // edge (i, j) outcome favoring the row agent
    edge_second,  // edge (i, j) outcome favoring the column agent
    item,         // knapsack outcome o_j selecting item j
    reject,       // knapsack outcome o_{m+1}
    opt_out,      // knapsack outcome o_{m+2}
  };
  Kind kind;
  int i = -1;  // vertex/item index (0-based), row vertex for pairs/edges
  int j = -1;  // column vertex for pairs/edges
};

// Everything needed to read a source-problem solution back off a
// mechanism for the generated setting, plus the goal the reduction
// embeds. outcome_roles is a bijection onto the setting's outcome list.
struct ReductionMeta {
  enum class Tag { independent_set, knapsack };
  Tag tag = Tag::independent_set;
  Rational goal;
  GraphInstance graph;
  KnapsackInstance knapsack;
  std::vector<OutcomeRole> outcome_roles;
  std::vector<int> diag_high_outcome;  // per vertex: index of its diag_high
  std::vector<int> item_outcome;       // per item: index of its o_j

  TypeSpace space() const;
};

// Independent-set instance -> 2-agent setting with uniform vertex types,
// the construction's utility tables, and the embedded goal.
std::pair<Setting, ReductionMeta> reduce_is(const GraphInstance& g);

// The construction's outcome function for an independent set S of size K
// (checked); passes the dominant-strategy check and meets the goal
// exactly.
DeterministicMechanism is_witness_mechanism(const GraphInstance& g,
                                            const std::vector<int>& S);

// Reads S = { i : m(theta1_i, theta2_i) = diag_high_i } off the diagonal.
std::vector<int> extract_is(const ReductionMeta& meta,
                            const DeterministicMechanism& m);

// Knapsack instance -> 2-agent setting with weight-proportional types for
// agent 1 and a two-type agent 2. Rejects zero-weight items (the type
// probabilities divide by w_j).
std::pair<Setting, ReductionMeta> reduce_knapsack(const KnapsackInstance& k);

// The construction's outcome function for a feasible, valuable subset S
// (checked); passes the Bayes-Nash check with expected welfare >= goal.
DeterministicMechanism knapsack_witness_mechanism(const KnapsackInstance& k,
                                                  const std::vector<int>& S);

// Reads S = { j : m(theta1_j, theta2_1) = o_j } off agent 2's first
// column.
std::vector<int> extract_knapsack(const ReductionMeta& meta,
                                  const DeterministicMechanism& m);

struct IndependentSetResult {
  int size = 0;
  std::vector<int> vertices;  // first witness in subset-index order
};

struct KnapsackOracleResult {
  long long best_value = 0;
  std::vector<int> items;  // first witness in subset-index order
};

// Brute-force subset enumeration, exact; refuses instances above the
// bound. These are deliberately unscalable desk-scale oracles.
IndependentSetResult max_independent_set(const GraphInstance& g,
                                         int bound = 20);
KnapsackOracleResult knapsack_oracle(const KnapsackInstance& k,
                                     int bound = 20);

namespace serial {
IndependentSetResult max_independent_set(const GraphInstance& g,
                                         int bound = 20);
KnapsackOracleResult knapsack_oracle(const KnapsackInstance& k,
                                     int bound = 20);
}  // namespace serial

// Text formats: graph files have a header "n K" then one "u v" edge per
// line (1-based); knapsack files have a header "C D" then one "w v" item
// per line.
GraphInstance parse_graph(std::istream& in);
KnapsackInstance parse_knapsack(std::istream& in);

}  // namespace amd

#endif  // AMD_REDUCTIONS_HPP
