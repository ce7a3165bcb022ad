#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace amd;

namespace {

bool same_witness(const CheckResult& a, const CheckResult& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->agent == b->agent && a->true_type == b->true_type &&
         a->misreport == b->misreport && a->opposing == b->opposing &&
         a->gain == b->gain;
}

RandomizedMechanism uniform_mechanism(const Setting& s) {
  RandomizedMechanism m;
  m.num_outcomes = s.num_outcomes();
  m.dist.assign(s.space.total() * s.num_outcomes(),
                Rational(1, static_cast<unsigned long>(s.num_outcomes())));
  return m;
}

RandomizedMechanism showcase_mixed() {
  RandomizedMechanism m;
  m.num_outcomes = 3;
  m.dist = {Rational(0), Rational(1, 2), Rational(1, 2),
            Rational(1), Rational(0),  Rational(0)};
  return m;
}

}  // namespace

TEST_CASE("manipulable showcase mechanism yields the documented witness") {
  const Setting s = testgen::showcase_setting();
  // t1 -> o3, t2 -> o1: reporting t2 under true type t1 moves the outcome
  // from o3 (utility 0) to o1 (utility 1).
  const CheckResult r = check_ds_det(s, DeterministicMechanism{{2, 0}});
  REQUIRE(r.has_value());
  CHECK(r->agent == 0);
  CHECK(r->true_type == 0);
  CHECK(r->misreport == 1);
  CHECK(r->gain == 1);
  REQUIRE(r->opposing.has_value());
  CHECK(*r->opposing == std::vector<int>{0});
  CHECK(recompute_gain(s, DeterministicMechanism{{2, 0}}, Concept::ds, *r) ==
        r->gain);
}

TEST_CASE("one type per agent passes vacuously") {
  Setting s;
  s.agent_names = {"a1", "a2"};
  s.outcome_names = {"x", "y"};
  s.type_names = {{"only"}, {"only"}};
  s.prior.kind = Prior::Kind::independent;
  s.prior.marginals = {{Rational(1)}, {Rational(1)}};
  s.utilities = {{Rational(3), Rational(-2)}, {Rational(0), Rational(5)}};
  s = validate_setting(std::move(s));
  CHECK_FALSE(check_ds_det(s, DeterministicMechanism{{1}}));
  CHECK_FALSE(check_bn_det(s, DeterministicMechanism{{1}}));
}

TEST_CASE("showcase mixed mechanism is truthful, with equality at t1") {
  const Setting s = testgen::showcase_setting();
  const RandomizedMechanism mixed = showcase_mixed();
  CHECK_FALSE(check_ds_rand(s, mixed));
  CHECK_FALSE(check_bn_rand(s, mixed));

  // Truthful expected utility at t1 exactly matches the misreport.
  ManipulationWitness probe;
  probe.agent = 0;
  probe.true_type = 0;
  probe.misreport = 1;
  probe.opposing = std::vector<int>{0};
  CHECK(recompute_gain(s, mixed, Concept::ds, probe) == 0);
}

TEST_CASE("two-item column mechanisms satisfy the Bayes-Nash check") {
  // Both columns constant: agent 2's first type earns the full pot
  // truthfully (3) against 1 by deviating; flipping its column to the
  // last outcome makes that comparison 1 vs 1, still truthful.
  KnapsackInstance k;
  k.items = {{1, 2}, {2, 3}};
  k.C = 2;
  k.D = 3;
  const Setting s = reduce_knapsack(k).first;
  REQUIRE(s.space.total() == 4);
  // cells: (t1,s1) (t1,s2) (t2,s1) (t2,s2); outcomes o1..o4.
  const DeterministicMechanism keep{{2, 3, 2, 3}};
  const DeterministicMechanism flipped{{3, 3, 3, 3}};
  CHECK_FALSE(check_bn_det(s, keep));
  CHECK_FALSE(check_bn_det(s, flipped));
}

TEST_CASE("uniform-everywhere mechanism passes everything") {
  testgen::Rng rng(8101);
  for (int i = 0; i < 20; ++i) {
    const Setting s = testgen::random_setting(rng);
    const RandomizedMechanism u = uniform_mechanism(s);
    CHECK_FALSE(check_ds_rand(s, u));
    CHECK_FALSE(check_bn_rand(s, u));
  }
}

TEST_CASE("constant mechanisms pass all four checks") {
  testgen::Rng rng(8102);
  for (int i = 0; i < 20; ++i) {
    const Setting s = testgen::random_setting(rng);
    DeterministicMechanism c;
    c.outcome_of.assign(s.space.total(), i % s.num_outcomes());
    CHECK_FALSE(check_ds_det(s, c));
    CHECK_FALSE(check_bn_det(s, c));
    const RandomizedMechanism lifted = lift_deterministic(s, c);
    CHECK_FALSE(check_ds_rand(s, lifted));
    CHECK_FALSE(check_bn_rand(s, lifted));
  }
}

TEST_CASE("dominant strategies imply Bayes-Nash") {
  testgen::Rng rng(8103);
  int ds_passes = 0;
  for (int i = 0; ds_passes < 25 && i < 4000; ++i) {
    testgen::SettingShape shape;
    shape.joint_prior = i % 4 == 0;
    const Setting s = testgen::random_setting(rng, shape);
    const DeterministicMechanism m = testgen::random_det_mechanism(rng, s);
    if (!check_ds_det(s, m)) {
      ++ds_passes;
      CHECK_FALSE(check_bn_det(s, m));
    }
    const RandomizedMechanism r = testgen::random_rand_mechanism(rng, s);
    if (!check_ds_rand(s, r)) CHECK_FALSE(check_bn_rand(s, r));
  }
  CHECK(ds_passes >= 25);
}

TEST_CASE("lift coherence: randomized checks agree with deterministic ones") {
  testgen::Rng rng(8104);
  for (int i = 0; i < 60; ++i) {
    testgen::SettingShape shape;
    shape.joint_prior = i % 3 == 0;
    const Setting s = testgen::random_setting(rng, shape);
    const DeterministicMechanism m = testgen::random_det_mechanism(rng, s);
    const RandomizedMechanism lifted = lift_deterministic(s, m);
    CHECK(check_ds_det(s, m).has_value() ==
          check_ds_rand(s, lifted).has_value());
    CHECK(check_bn_det(s, m).has_value() ==
          check_bn_rand(s, lifted).has_value());
  }
}

TEST_CASE("positively scaling one agent's utilities changes no verdict") {
  testgen::Rng rng(8105);
  for (int i = 0; i < 50; ++i) {
    const Setting s = testgen::random_setting(rng);
    Setting scaled = s;
    const Rational c(7, 3);
    const int agent = i % 2;
    for (auto& u : scaled.utilities[agent]) u *= c;
    scaled = validate_setting(std::move(scaled));

    const DeterministicMechanism m = testgen::random_det_mechanism(rng, s);
    const RandomizedMechanism r = testgen::random_rand_mechanism(rng, s);
    CHECK(check_ds_det(s, m).has_value() ==
          check_ds_det(scaled, m).has_value());
    CHECK(check_bn_det(s, m).has_value() ==
          check_bn_det(scaled, m).has_value());
    CHECK(check_ds_rand(s, r).has_value() ==
          check_ds_rand(scaled, r).has_value());
    CHECK(check_bn_rand(s, r).has_value() ==
          check_bn_rand(scaled, r).has_value());
  }
}

TEST_CASE("checker agrees with the literal oracle, witness for witness") {
  testgen::Rng rng(8106);
  for (int i = 0; i < 120; ++i) {
    testgen::SettingShape shape;
    shape.joint_prior = i % 4 == 0;
    const Setting s = testgen::random_setting(rng, shape);
    const DeterministicMechanism m = testgen::random_det_mechanism(rng, s);
    const RandomizedMechanism r = testgen::random_rand_mechanism(rng, s);
    CHECK(same_witness(check_ds_det(s, m),
                       testoracle::literal_check(s, m, Concept::ds)));
    CHECK(same_witness(check_bn_det(s, m),
                       testoracle::literal_check(s, m, Concept::bn)));
    CHECK(same_witness(check_ds_rand(s, r),
                       testoracle::literal_check(s, r, Concept::ds)));
    CHECK(same_witness(check_bn_rand(s, r),
                       testoracle::literal_check(s, r, Concept::bn)));
  }
}

TEST_CASE("returned witnesses re-evaluate to their recorded gain") {
  testgen::Rng rng(8107);
  int seen = 0;
  for (int i = 0; i < 200 && seen < 60; ++i) {
    const Setting s = testgen::random_setting(rng);
    const DeterministicMechanism m = testgen::random_det_mechanism(rng, s);
    for (Concept sc : {Concept::ds, Concept::bn}) {
      const CheckResult r =
          sc == Concept::ds ? check_ds_det(s, m) : check_bn_det(s, m);
      if (!r) continue;
      ++seen;
      CHECK(r->gain > 0);
      CHECK(r->true_type != r->misreport);
      CHECK(recompute_gain(s, m, sc, *r) == r->gain);
    }
  }
  CHECK(seen >= 60);
}

TEST_CASE("parallel kernels match the serial reference") {
  testgen::Rng rng(8108);
  // Type spaces large enough to cross the parallel-dispatch threshold.
  for (int i = 0; i < 6; ++i) {
    testgen::SettingShape shape;
    shape.min_types = 14;
    shape.max_types = 16;
    shape.min_outcomes = 3;
    shape.max_outcomes = 4;
    const Setting s = testgen::random_setting(rng, shape);
    const DeterministicMechanism m =
        i == 0 ? DeterministicMechanism{std::vector<int>(s.space.total(), 0)}
               : testgen::random_det_mechanism(rng, s);
    CHECK(same_witness(check_ds_det(s, m), serial::check_ds_det(s, m)));
    CHECK(same_witness(check_bn_det(s, m), serial::check_bn_det(s, m)));
    const RandomizedMechanism r = testgen::random_rand_mechanism(rng, s);
    CHECK(same_witness(check_ds_rand(s, r), serial::check_ds_rand(s, r)));
    CHECK(same_witness(check_bn_rand(s, r), serial::check_bn_rand(s, r)));
  }
}
