#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "amd/reductions.hpp"
#include "amd/solver_det.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

amd::Setting random_setting(std::mt19937_64& rng, int types_per_agent,
                            int outcomes) {
  std::uniform_int_distribution<int> util(-9, 9);
  std::uniform_int_distribution<int> weight(1, 9);
  amd::Setting s;
  s.agent_names = {"a1", "a2"};
  for (int k = 0; k < outcomes; ++k)
    s.outcome_names.push_back("o" + std::to_string(k + 1));
  s.type_names.resize(2);
  s.prior.kind = amd::Prior::Kind::independent;
  s.prior.marginals.resize(2);
  s.utilities.resize(2);
  for (int a = 0; a < 2; ++a) {
    std::vector<long> weights(types_per_agent);
    long total = 0;
    for (auto& w : weights) total += (w = weight(rng));
    for (int t = 0; t < types_per_agent; ++t) {
      s.type_names[a].push_back("t" + std::to_string(t + 1));
      s.prior.marginals[a].push_back(amd::make_rational(weights[t], total));
      for (int k = 0; k < outcomes; ++k)
        s.utilities[a].push_back(amd::Rational(util(rng)));
    }
  }
  return amd::validate_setting(std::move(s));
}

amd::GraphInstance random_graph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution edge(p);
  amd::GraphInstance g;
  g.n = n;
  g.K = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) g.edges.emplace_back(i, j);
  return g;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool equal) {
  std::printf("%-28s %10.1f ms %10.1f ms   %5.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              equal ? "results match" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 20240601;
  std::mt19937_64 rng(seed);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  {
    const amd::Setting s = random_setting(rng, 128, 10);
    // A constant mechanism passes every check, forcing a full sweep.
    amd::DeterministicMechanism m;
    m.outcome_of.assign(s.space.total(), 0);
    auto t0 = Clock::now();
    const auto ref = amd::serial::check_ds_det(s, m);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto par = amd::check_ds_det(s, m);
    report("check_ds_det (128x128 types)", serial_ms, ms_since(t0),
           ref.has_value() == par.has_value());
  }
  {
    const amd::Setting s = random_setting(rng, 48, 8);
    const amd::RandomizedMechanism u = [&] {
      amd::RandomizedMechanism m;
      m.num_outcomes = s.num_outcomes();
      m.dist.assign(s.space.total() * s.num_outcomes(),
                    amd::Rational(1, static_cast<unsigned long>(
                                         s.num_outcomes())));
      return m;
    }();
    auto t0 = Clock::now();
    const auto ref = amd::serial::check_ds_rand(s, u);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto par = amd::check_ds_rand(s, u);
    report("check_ds_rand (48x48 types)", serial_ms, ms_since(t0),
           ref.has_value() == par.has_value());
  }
  {
    const amd::GraphInstance g = [&] {
      amd::GraphInstance r = random_graph(rng, 4, 0.5);
      r.K = amd::serial::max_independent_set(r).size;
      return r;
    }();
    const auto built = amd::reduce_is(g);
    amd::Objective obj = amd::Objective::social_welfare();
    auto t0 = Clock::now();
    const auto ref =
        amd::serial::solve_det(built.first, obj, amd::Concept::ds);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto par = amd::solve_det(built.first, obj, amd::Concept::ds);
    report("solve_det (reduced n=4)", serial_ms, ms_since(t0),
           ref.value == par.value &&
               ref.mechanism.outcome_of == par.mechanism.outcome_of);
  }
  {
    const amd::GraphInstance g = random_graph(rng, 24, 0.3);
    auto t0 = Clock::now();
    const auto ref = amd::serial::max_independent_set(g, 24);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto par = amd::max_independent_set(g, 24);
    report("max_independent_set (n=24)", serial_ms, ms_since(t0),
           ref.size == par.size && ref.vertices == par.vertices);
  }
  {
    amd::KnapsackInstance k;
    std::uniform_int_distribution<long long> w(1, 50), v(0, 99);
    for (int j = 0; j < 26; ++j) k.items.emplace_back(w(rng), v(rng));
    k.C = k.total_weight() / 3;
    k.D = 1;
    auto t0 = Clock::now();
    const auto ref = amd::serial::knapsack_oracle(k, 26);
    const double serial_ms = ms_since(t0);
    t0 = Clock::now();
    const auto par = amd::knapsack_oracle(k, 26);
    report("knapsack_oracle (m=26)", serial_ms, ms_since(t0),
           ref.best_value == par.best_value && ref.items == par.items);
  }
  return 0;
}
