#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "amd/errors.hpp"
#include "amd/io.hpp"
#include "amd/solver_rand.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

std::string format_witness(const amd::Setting& s,
                           const amd::ManipulationWitness& w) {
  std::ostringstream out;
  out << "agent=" << s.agent_names[w.agent]
      << " true_type=" << s.type_names[w.agent][w.true_type]
      << " misreport=" << s.type_names[w.agent][w.misreport];
  if (w.opposing) {
    out << " opposing=(";
    int idx = 0;
    for (int a = 0; a < s.num_agents(); ++a) {
      if (a == w.agent) continue;
      if (idx) out << ",";
      out << s.type_names[a][(*w.opposing)[idx]];
      ++idx;
    }
    out << ")";
  }
  out << " gain=" << amd::to_string(w.gain);
  return out.str();
}

amd::DetSolveOptions det_options(std::uint64_t budget) {
  amd::DetSolveOptions opts;
  opts.node_budget = budget;
  return opts;
}

// Built-in showcase setting: one agent with two equally likely types, a
// second agent with a single type, and three outcomes. The best
// truthful deterministic mechanism is beaten by a coin-flipping one.
amd::SettingDocument demo_document() {
  amd::Setting s;
  s.agent_names = {"agent1", "agent2"};
  s.outcome_names = {"o1", "o2", "o3"};
  s.type_names = {{"t1", "t2"}, {"s1"}};
  s.prior.kind = amd::Prior::Kind::independent;
  s.prior.marginals = {{amd::Rational(1, 2), amd::Rational(1, 2)},
                       {amd::Rational(1)}};
  s.utilities = {{amd::Rational(1), amd::Rational(2), amd::Rational(0),
                  amd::Rational(8), amd::Rational(2), amd::Rational(0)},
                 {amd::Rational(0), amd::Rational(0), amd::Rational(4)}};
  amd::SettingDocument doc;
  doc.setting = amd::validate_setting(std::move(s));
  doc.objective = amd::Objective::social_welfare();
  return doc;
}

int cmd_solve(const std::string& setting_path, const std::string& concept_name,
              const std::string& kind, const std::string& out_path,
              std::uint64_t budget, const std::string& lp_path) {
  const amd::SettingDocument doc =
      amd::parse_setting_document(amd::read_file(setting_path));
  const amd::Concept sc = amd::concept_from_name(concept_name);

  amd::MechanismDocument mech;
  amd::Provenance prov;
  prov.solution_concept = sc;
  if (kind == "det") {
    const amd::DetSolveResult res = amd::solve_det(
        doc.setting, doc.objective, sc, det_options(budget));
    mech.kind = amd::MechanismDocument::Kind::deterministic;
    mech.det = res.mechanism;
    prov.solver = "branch-and-bound";
    prov.objective_value = res.value;
  } else {
    if (!lp_path.empty()) {
      const amd::LinearProgram lp =
          amd::build_lp(doc.setting, doc.objective, sc);
      amd::write_file(lp_path, amd::lp_text(lp, doc.setting));
    }
    const amd::RandSolveResult res =
        amd::solve_rand(doc.setting, doc.objective, sc);
    mech.kind = amd::MechanismDocument::Kind::randomized;
    mech.rand = res.mechanism;
    prov.solver = "linear-program";
    prov.objective_value = res.value;
  }
  mech.provenance = prov;
  amd::write_file(out_path, amd::serialize_mechanism_document(mech, doc.setting));
  std::cout << amd::to_string(prov.objective_value) << "\n";
  return kExitYes;
}

int cmd_decide(const std::string& setting_path,
               const std::string& concept_name, const std::string& kind,
               const std::string& out_path, std::uint64_t budget) {
  const amd::SettingDocument doc =
      amd::parse_setting_document(amd::read_file(setting_path));
  if (!doc.objective.goal)
    throw amd::InputError("setting document carries no goal");
  const amd::Concept sc = amd::concept_from_name(concept_name);

  bool attained = false;
  amd::MechanismDocument mech;
  amd::Provenance prov;
  prov.solution_concept = sc;
  if (kind == "det") {
    const amd::DetDecision dec = amd::decide_det(
        doc.setting, doc.objective, sc, det_options(budget));
    attained = dec.attained;
    mech.kind = amd::MechanismDocument::Kind::deterministic;
    mech.det = dec.mechanism;
    prov.solver = "branch-and-bound";
    prov.objective_value = dec.value;
  } else {
    const amd::RandDecision dec =
        amd::decide_rand(doc.setting, doc.objective, sc);
    attained = dec.attained;
    mech.kind = amd::MechanismDocument::Kind::randomized;
    mech.rand = dec.mechanism;
    prov.solver = "linear-program";
    prov.objective_value = dec.value;
  }
  if (!attained) {
    std::cout << "no\n";
    return kExitNo;
  }
  mech.provenance = prov;
  amd::write_file(out_path, amd::serialize_mechanism_document(mech, doc.setting));
  std::cout << "yes\n";
  return kExitYes;
}

int cmd_check(const std::string& setting_path, const std::string& mech_path,
              const std::string& concept_name) {
  const amd::SettingDocument doc =
      amd::parse_setting_document(amd::read_file(setting_path));
  const amd::MechanismDocument mech =
      amd::parse_mechanism_document(amd::read_file(mech_path), doc.setting);
  const amd::Concept sc = amd::concept_from_name(concept_name);

  amd::CheckResult result;
  if (mech.kind == amd::MechanismDocument::Kind::deterministic)
    result = sc == amd::Concept::ds
                 ? amd::check_ds_det(doc.setting, mech.det)
                 : amd::check_bn_det(doc.setting, mech.det);
  else
    result = sc == amd::Concept::ds
                 ? amd::check_ds_rand(doc.setting, mech.rand)
                 : amd::check_bn_rand(doc.setting, mech.rand);

  if (!result) {
    std::cout << "PASS\n";
    return kExitYes;
  }
  std::cout << "FAIL " << format_witness(doc.setting, *result) << "\n";
  return kExitNo;
}

int cmd_reduce(const std::string& kind, const std::string& instance_path,
               const std::string& setting_out, const std::string& meta_out) {
  std::ifstream in(instance_path);
  if (!in) throw amd::InputError("cannot open " + instance_path);

  std::pair<amd::Setting, amd::ReductionMeta> generated =
      kind == "is" ? amd::reduce_is(amd::parse_graph(in))
                   : amd::reduce_knapsack(amd::parse_knapsack(in));

  amd::SettingDocument doc;
  doc.setting = std::move(generated.first);
  doc.objective = amd::Objective::social_welfare();
  doc.objective.goal = generated.second.goal;
  amd::write_file(setting_out, amd::serialize_setting_document(doc));
  amd::write_file(meta_out,
                  amd::serialize_meta_document(generated.second, doc.setting));
  std::cout << "goal " << amd::to_string(generated.second.goal) << "\n";
  return kExitYes;
}

int cmd_extract(const std::string& meta_path, const std::string& mech_path) {
  const amd::ReductionMeta meta =
      amd::parse_meta_document(amd::read_file(meta_path));
  // Mechanism documents name types and outcomes; regenerate the setting
  // the metadata describes to decode them.
  const amd::Setting setting =
      meta.tag == amd::ReductionMeta::Tag::independent_set
          ? amd::reduce_is(meta.graph).first
          : amd::reduce_knapsack(meta.knapsack).first;
  const amd::MechanismDocument mech =
      amd::parse_mechanism_document(amd::read_file(mech_path), setting);
  if (mech.kind != amd::MechanismDocument::Kind::deterministic)
    throw amd::InputError("extraction reads deterministic mechanisms only");

  const std::vector<int> solution =
      meta.tag == amd::ReductionMeta::Tag::independent_set
          ? amd::extract_is(meta, mech.det)
          : amd::extract_knapsack(meta, mech.det);
  const char* label =
      meta.tag == amd::ReductionMeta::Tag::independent_set ? "vertices"
                                                           : "items";
  std::cout << label << ":";
  for (int x : solution) std::cout << " " << x + 1;
  std::cout << "\n";
  return kExitYes;
}

int cmd_demo() {
  const amd::SettingDocument doc = demo_document();
  const amd::Setting& s = doc.setting;

  const amd::DetSolveResult det =
      amd::solve_det(s, doc.objective, amd::Concept::ds);
  const amd::RandSolveResult rand =
      amd::solve_rand(s, doc.objective, amd::Concept::ds);

  std::cout << "A two-type agent meets a one-type agent over three "
               "outcomes;\nrandomizing the chosen outcome beats every "
               "deterministic truthful rule.\n\n";
  std::cout << "deterministic optimum: " << amd::to_string(det.value) << "\n";
  for (amd::VectorIndex v = 0; v < s.space.total(); ++v)
    std::cout << "  " << s.type_names[0][s.space.type_of(v, 0)] << " -> "
              << s.outcome_names[det.mechanism(v)] << "\n";
  std::cout << "randomized optimum:    " << amd::to_string(rand.value) << "\n";
  for (amd::VectorIndex v = 0; v < s.space.total(); ++v) {
    std::cout << "  " << s.type_names[0][s.space.type_of(v, 0)] << " ->";
    for (int k = 0; k < s.num_outcomes(); ++k)
      if (rand.mechanism.prob(v, k) != 0)
        std::cout << " " << s.outcome_names[k] << "="
                  << amd::to_string(rand.mechanism.prob(v, k));
    std::cout << "\n";
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amd: exact solvers and checkers for truthful mechanism "
               "design over finite type spaces"};
  app.require_subcommand(1);

  std::string setting_path, mech_path, meta_path, instance_path;
  std::string concept_name = "ds", kind = "det";
  std::string out_path = "mechanism.json";
  std::string setting_out = "setting.json", meta_out = "meta.json";
  std::string lp_path;
  std::uint64_t budget = 0;
  std::string reduce_kind;

  auto* solve = app.add_subcommand("solve", "maximize the expected objective");
  solve->add_option("setting", setting_path)->required();
  solve->add_option("--concept", concept_name)->check(CLI::IsMember({"ds", "bn"}))->required();
  solve->add_option("--kind", kind)->check(CLI::IsMember({"det", "rand"}))->required();
  solve->add_option("-o,--out", out_path, "mechanism document path");
  solve->add_option("--budget", budget, "search node budget (det only)");
  solve->add_option("--dump-lp", lp_path, "also write the LP (rand only)");

  auto* decide = app.add_subcommand("decide", "is the goal attainable?");
  decide->add_option("setting", setting_path)->required();
  decide->add_option("--concept", concept_name)->check(CLI::IsMember({"ds", "bn"}))->required();
  decide->add_option("--kind", kind)->check(CLI::IsMember({"det", "rand"}))->required();
  decide->add_option("-o,--out", out_path, "witness document path");
  decide->add_option("--budget", budget, "search node budget (det only)");

  auto* check = app.add_subcommand("check", "verify truthfulness");
  check->add_option("setting", setting_path)->required();
  check->add_option("mechanism", mech_path)->required();
  check->add_option("--concept", concept_name)->check(CLI::IsMember({"ds", "bn"}))->required();

  auto* reduce = app.add_subcommand(
      "reduce", "generate a setting from an is/knapsack instance");
  reduce->add_option("kind", reduce_kind)->check(CLI::IsMember({"is", "knapsack"}))->required();
  reduce->add_option("instance", instance_path)->required();
  reduce->add_option("-o,--out", setting_out, "setting document path");
  reduce->add_option("--meta", meta_out, "metadata document path");

  auto* extract = app.add_subcommand(
      "extract", "read a source-problem solution off a mechanism");
  extract->add_option("meta", meta_path)->required();
  extract->add_option("mechanism", mech_path)->required();

  app.add_subcommand("demo", "run the built-in showcase comparison");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(setting_path, concept_name, kind, out_path, budget,
                       lp_path);
    if (decide->parsed())
      return cmd_decide(setting_path, concept_name, kind, out_path, budget);
    if (check->parsed()) return cmd_check(setting_path, mech_path, concept_name);
    if (reduce->parsed())
      return cmd_reduce(reduce_kind, instance_path, setting_out, meta_out);
    if (extract->parsed()) return cmd_extract(meta_path, mech_path);
    return cmd_demo();
  } catch (const amd::BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const amd::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
