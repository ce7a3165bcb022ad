#include "amd/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amd/errors.hpp"

namespace amd {

using nlohmann::json;

namespace {

constexpr const char* kSettingSchema = "amd.setting/1";
constexpr const char* kMechanismSchema = "amd.mechanism/1";
constexpr const char* kMetaSchema = "amd.reduction-meta/1";

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer())
    return make_rational(j.get<long long>());
  return parse_rational(as_string(j, where), where);
}

// Type-vector keys are the type names joined with commas in agent order.
std::string vector_key(const Setting& s, VectorIndex v) {
  std::string key;
  for (int a = 0; a < s.num_agents(); ++a) {
    if (a) key.push_back(',');
    key += s.type_names[a][s.space.type_of(v, a)];
  }
  return key;
}

int outcome_index(const Setting& s, const std::string& name,
                  const std::string& where) {
  for (int k = 0; k < s.num_outcomes(); ++k)
    if (s.outcome_names[k] == name) return k;
  throw InputError(where + ": unknown outcome \"" + name + "\"");
}

void check_schema(const json& j, const char* want, const std::string& where) {
  const std::string got = as_string(require(j, "schema", where), where);
  if (got != want)
    throw InputError(where + ": schema \"" + got + "\", expected \"" + want +
                     "\"");
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

SettingDocument parse_setting_document(const std::string& text) {
  const json j = parse_json(text, "setting document");
  check_schema(j, kSettingSchema, "setting document");

  Setting s;
  for (const auto& agent : require(j, "agents", "setting document")) {
    s.agent_names.push_back(as_string(require(agent, "name", "agents"),
                                      "agent name"));
    std::vector<std::string> types;
    for (const auto& t : require(agent, "types", "agents"))
      types.push_back(as_string(t, "type name"));
    s.type_names.push_back(std::move(types));
  }
  for (const auto& o : require(j, "outcomes", "setting document"))
    s.outcome_names.push_back(as_string(o, "outcome name"));

  const json& prior = require(j, "prior", "setting document");
  const std::string prior_kind = as_string(require(prior, "kind", "prior"),
                                           "prior kind");
  // The index space is needed to address joint-prior and objective keys;
  // validate_setting rebuilds and re-checks it later.
  std::vector<int> sizes;
  for (const auto& t : s.type_names) sizes.push_back(static_cast<int>(t.size()));
  s.space = TypeSpace(sizes);

  if (prior_kind == "independent") {
    s.prior.kind = Prior::Kind::independent;
    const json& dists = require(prior, "distributions", "prior");
    if (!dists.is_array() || dists.size() != s.agent_names.size())
      throw InputError("prior: expected one distribution per agent");
    for (std::size_t a = 0; a < dists.size(); ++a) {
      std::vector<Rational> p;
      for (const auto& mass : dists[a])
        p.push_back(as_rational(mass, "prior of " + s.agent_names[a]));
      s.prior.marginals.push_back(std::move(p));
    }
  } else if (prior_kind == "joint") {
    s.prior.kind = Prior::Kind::joint;
    const json& table = require(prior, "table", "prior");
    s.prior.joint.resize(s.space.total());
    std::size_t found = 0;
    for (VectorIndex v = 0; v < s.space.total(); ++v) {
      const std::string key = vector_key(s, v);
      auto it = table.find(key);
      if (it == table.end())
        throw InputError("joint prior: missing mass for \"" + key + "\"");
      s.prior.joint[v] = as_rational(*it, "joint prior at " + key);
      ++found;
    }
    if (table.size() != found)
      throw InputError("joint prior: table has entries for unknown vectors");
  } else {
    throw InputError("prior kind \"" + prior_kind +
                     "\" is neither independent nor joint");
  }

  const json& utils = require(j, "utilities", "setting document");
  for (std::size_t a = 0; a < s.agent_names.size(); ++a) {
    const std::string where = "utilities of " + s.agent_names[a];
    auto agent_it = utils.find(s.agent_names[a]);
    if (agent_it == utils.end()) throw InputError(where + ": missing table");
    std::vector<Rational> table;
    for (const auto& tname : s.type_names[a]) {
      auto type_it = agent_it->find(tname);
      if (type_it == agent_it->end())
        throw InputError(where + ": missing row for type " + tname);
      for (const auto& oname : s.outcome_names) {
        auto cell = type_it->find(oname);
        if (cell == type_it->end())
          throw InputError(where + ": missing entry (" + tname + ", " + oname +
                           ")");
        table.push_back(
            as_rational(*cell, where + " (" + tname + ", " + oname + ")"));
      }
    }
    s.utilities.push_back(std::move(table));
  }

  SettingDocument doc;
  doc.setting = validate_setting(std::move(s));
  const Setting& vs = doc.setting;

  const json& objective = require(j, "objective", "setting document");
  if (objective.is_string()) {
    if (objective.get<std::string>() != "social_welfare")
      throw InputError("objective \"" + objective.get<std::string>() +
                       "\" is not social_welfare");
    doc.objective.kind = Objective::Kind::social_welfare;
  } else {
    const std::string kind =
        as_string(require(objective, "kind", "objective"), "objective kind");
    if (kind == "social_welfare") {
      doc.objective.kind = Objective::Kind::social_welfare;
    } else if (kind == "table") {
      doc.objective.kind = Objective::Kind::explicit_table;
      const json& table = require(objective, "table", "objective");
      for (VectorIndex v = 0; v < vs.space.total(); ++v) {
        const std::string key = vector_key(vs, v);
        auto row = table.find(key);
        if (row == table.end())
          throw InputError("objective table: missing row for \"" + key + "\"");
        for (int k = 0; k < vs.num_outcomes(); ++k) {
          auto cell = row->find(vs.outcome_names[k]);
          if (cell == row->end())
            throw InputError("objective table: missing entry (" + key + ", " +
                             vs.outcome_names[k] + ")");
          doc.objective.table.push_back(as_rational(
              *cell, "objective (" + key + ", " + vs.outcome_names[k] + ")"));
        }
      }
      if (table.size() != static_cast<std::size_t>(vs.space.total()))
        throw InputError("objective table: rows for unknown vectors");
    } else {
      throw InputError("objective kind \"" + kind + "\" unknown");
    }
  }
  if (auto goal = j.find("goal"); goal != j.end())
    doc.objective.goal = as_rational(*goal, "goal");
  return doc;
}

std::string serialize_setting_document(const SettingDocument& doc) {
  const Setting& s = doc.setting;
  json j;
  j["schema"] = kSettingSchema;
  j["agents"] = json::array();
  for (int a = 0; a < s.num_agents(); ++a)
    j["agents"].push_back({{"name", s.agent_names[a]},
                           {"types", s.type_names[a]}});
  j["outcomes"] = s.outcome_names;
  if (s.prior.kind == Prior::Kind::independent) {
    json dists = json::array();
    for (const auto& p : s.prior.marginals) {
      json row = json::array();
      for (const auto& mass : p) row.push_back(to_string(mass));
      dists.push_back(std::move(row));
    }
    j["prior"] = {{"kind", "independent"}, {"distributions", std::move(dists)}};
  } else {
    json table = json::object();
    for (VectorIndex v = 0; v < s.space.total(); ++v)
      table[vector_key(s, v)] = to_string(s.prior.joint[v]);
    j["prior"] = {{"kind", "joint"}, {"table", std::move(table)}};
  }
  json utils = json::object();
  for (int a = 0; a < s.num_agents(); ++a) {
    json agent = json::object();
    for (int t = 0; t < s.num_types(a); ++t) {
      json row = json::object();
      for (int k = 0; k < s.num_outcomes(); ++k)
        row[s.outcome_names[k]] = to_string(s.utility(a, t, k));
      agent[s.type_names[a][t]] = std::move(row);
    }
    utils[s.agent_names[a]] = std::move(agent);
  }
  j["utilities"] = std::move(utils);
  if (doc.objective.kind == Objective::Kind::social_welfare) {
    j["objective"] = "social_welfare";
  } else {
    json table = json::object();
    for (VectorIndex v = 0; v < s.space.total(); ++v) {
      json row = json::object();
      for (int k = 0; k < s.num_outcomes(); ++k)
        row[s.outcome_names[k]] = to_string(
            doc.objective
                .table[static_cast<std::size_t>(v) * s.num_outcomes() + k]);
      table[vector_key(s, v)] = std::move(row);
    }
    j["objective"] = {{"kind", "table"}, {"table", std::move(table)}};
  }
  if (doc.objective.goal) j["goal"] = to_string(*doc.objective.goal);
  return j.dump(2) + "\n";
}

MechanismDocument parse_mechanism_document(const std::string& text,
                                           const Setting& s) {
  const json j = parse_json(text, "mechanism document");
  check_schema(j, kMechanismSchema, "mechanism document");
  MechanismDocument doc;
  const std::string kind =
      as_string(require(j, "kind", "mechanism document"), "mechanism kind");
  const json& map = require(j, "map", "mechanism document");
  if (map.size() != static_cast<std::size_t>(s.space.total()))
    throw InputError("mechanism map has " + std::to_string(map.size()) +
                     " entries, setting has " +
                     std::to_string(s.space.total()) + " type vectors");
  if (kind == "deterministic") {
    doc.kind = MechanismDocument::Kind::deterministic;
    doc.det.outcome_of.resize(s.space.total());
    for (VectorIndex v = 0; v < s.space.total(); ++v) {
      const std::string key = vector_key(s, v);
      auto it = map.find(key);
      if (it == map.end())
        throw InputError("mechanism map: missing vector \"" + key + "\"");
      doc.det.outcome_of[v] =
          outcome_index(s, as_string(*it, "mechanism at " + key),
                        "mechanism at " + key);
    }
    validate_mechanism(s, doc.det);
  } else if (kind == "randomized") {
    doc.kind = MechanismDocument::Kind::randomized;
    doc.rand.num_outcomes = s.num_outcomes();
    doc.rand.dist.assign(
        static_cast<std::size_t>(s.space.total()) * s.num_outcomes(),
        Rational(0));
    for (VectorIndex v = 0; v < s.space.total(); ++v) {
      const std::string key = vector_key(s, v);
      auto it = map.find(key);
      if (it == map.end())
        throw InputError("mechanism map: missing vector \"" + key + "\"");
      for (auto entry = it->begin(); entry != it->end(); ++entry) {
        const int k = outcome_index(s, entry.key(), "mechanism at " + key);
        doc.rand.dist[static_cast<std::size_t>(v) * s.num_outcomes() + k] =
            as_rational(entry.value(), "mechanism at " + key);
      }
    }
    validate_mechanism(s, doc.rand);
  } else {
    throw InputError("mechanism kind \"" + kind +
                     "\" is neither deterministic nor randomized");
  }
  if (auto prov = j.find("provenance"); prov != j.end()) {
    Provenance p;
    p.solver = as_string(require(*prov, "solver", "provenance"), "solver");
    p.solution_concept = concept_from_name(
        as_string(require(*prov, "concept", "provenance"), "concept"));
    p.objective_value = as_rational(
        require(*prov, "objective_value", "provenance"), "objective_value");
    doc.provenance = std::move(p);
  }
  return doc;
}

std::string serialize_mechanism_document(const MechanismDocument& doc,
                                         const Setting& s) {
  json j;
  j["schema"] = kMechanismSchema;
  json map = json::object();
  if (doc.kind == MechanismDocument::Kind::deterministic) {
    j["kind"] = "deterministic";
    for (VectorIndex v = 0; v < s.space.total(); ++v)
      map[vector_key(s, v)] = s.outcome_names[doc.det.outcome_of[v]];
  } else {
    j["kind"] = "randomized";
    for (VectorIndex v = 0; v < s.space.total(); ++v) {
      json row = json::object();  // zero-probability outcomes omitted
      for (int k = 0; k < s.num_outcomes(); ++k)
        if (doc.rand.prob(v, k) != 0)
          row[s.outcome_names[k]] = to_string(doc.rand.prob(v, k));
      map[vector_key(s, v)] = std::move(row);
    }
  }
  j["map"] = std::move(map);
  if (doc.provenance) {
    j["provenance"] = {
        {"solver", doc.provenance->solver},
        {"concept", concept_name(doc.provenance->solution_concept)},
        {"objective_value", to_string(doc.provenance->objective_value)}};
  }
  return j.dump(2) + "\n";
}

namespace {

const char* role_kind_name(OutcomeRole::Kind k) {
  switch (k) {
    case OutcomeRole::Kind::diag_high: return "diag_high";
    case OutcomeRole::Kind::diag_low: return "diag_low";
    case OutcomeRole::Kind::pair: return "pair";
    case OutcomeRole::Kind::edge_first: return "edge_first";
    case OutcomeRole::Kind::edge_second: return "edge_second";
    case OutcomeRole::Kind::item: return "item";
    case OutcomeRole::Kind::reject: return "reject";
    case OutcomeRole::Kind::opt_out: return "opt_out";
  }
  return "?";
}

}  // namespace

ReductionMeta parse_meta_document(const std::string& text) {
  const json j = parse_json(text, "meta document");
  check_schema(j, kMetaSchema, "meta document");
  const std::string kind =
      as_string(require(j, "kind", "meta document"), "meta kind");

  // The generators are deterministic, so the embedded instance rebuilds
  // the full meta; the stored goal cross-checks the rebuild.
  ReductionMeta meta;
  if (kind == "independent-set") {
    const json& inst = require(j, "instance", "meta document");
    GraphInstance g;
    g.n = require(inst, "n", "instance").get<int>();
    g.K = require(inst, "K", "instance").get<int>();
    for (const auto& e : require(inst, "edges", "instance")) {
      if (!e.is_array() || e.size() != 2)
        throw InputError("instance edges: expected [u, v] pairs");
      g.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    meta = reduce_is(g).second;
  } else if (kind == "knapsack") {
    const json& inst = require(j, "instance", "meta document");
    KnapsackInstance k;
    k.C = require(inst, "C", "instance").get<long long>();
    k.D = require(inst, "D", "instance").get<long long>();
    for (const auto& it : require(inst, "items", "instance")) {
      if (!it.is_array() || it.size() != 2)
        throw InputError("instance items: expected [w, v] pairs");
      k.items.emplace_back(it[0].get<long long>(), it[1].get<long long>());
    }
    meta = reduce_knapsack(k).second;
  } else {
    throw InputError("meta kind \"" + kind + "\" unknown");
  }
  const Rational goal =
      as_rational(require(j, "goal", "meta document"), "goal");
  if (goal != meta.goal)
    throw InputError("meta document goal " + to_string(goal) +
                     " does not match the instance (expected " +
                     to_string(meta.goal) + ")");
  return meta;
}

std::string serialize_meta_document(const ReductionMeta& meta,
                                    const Setting& s) {
  json j;
  j["schema"] = kMetaSchema;
  j["goal"] = to_string(meta.goal);
  if (meta.tag == ReductionMeta::Tag::independent_set) {
    j["kind"] = "independent-set";
    json edges = json::array();
    for (const auto& e : meta.graph.edges)
      edges.push_back({e.first + 1, e.second + 1});
    j["instance"] = {{"n", meta.graph.n},
                     {"K", meta.graph.K},
                     {"edges", std::move(edges)}};
  } else {
    j["kind"] = "knapsack";
    json items = json::array();
    for (const auto& it : meta.knapsack.items)
      items.push_back({it.first, it.second});
    j["instance"] = {{"C", meta.knapsack.C},
                     {"D", meta.knapsack.D},
                     {"items", std::move(items)}};
  }
  json roles = json::object();
  for (std::size_t k = 0; k < meta.outcome_roles.size(); ++k) {
    const OutcomeRole& role = meta.outcome_roles[k];
    json r;
    r["kind"] = role_kind_name(role.kind);
    if (role.kind == OutcomeRole::Kind::item) {
      r["item"] = role.i + 1;
    } else if (role.i >= 0) {
      r["i"] = role.i + 1;
      if (role.j >= 0) r["j"] = role.j + 1;
    }
    roles[s.outcome_names[k]] = std::move(r);
  }
  j["outcome_roles"] = std::move(roles);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

std::string concept_name(Concept c) {
  return c == Concept::ds ? "ds" : "bn";
}

Concept concept_from_name(const std::string& name) {
  if (name == "ds") return Concept::ds;
  if (name == "bn") return Concept::bn;
  throw InputError("solution concept \"" + name + "\" is neither ds nor bn");
}

}  // namespace amd
