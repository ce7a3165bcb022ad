#ifndef AMD_IO_HPP
#define AMD_IO_HPP

#include <optional>
#include <string>

#include "amd/reductions.hpp"
#include "amd/solver_det.hpp"

namespace amd {

// Documents are JSON with every rational rendered as a lowest-terms
// "num/den" string ("0" and plain integers accepted on input) and
// type-vector keys built from type names joined with commas in agent
// order. Serialization is canonical, so parse-then-serialize is the
// identity on documents.

struct SettingDocument {
  Setting setting;               // validated
  Objective objective;           // includes the optional goal
};

// Provenance recorded by the solve command so a mechanism document can be
// re-verified against the concept and value it was produced with.
struct Provenance {
  std::string solver;   // "branch-and-bound" or "linear-program"
  Concept solution_concept = Concept::ds;
  Rational objective_value;
};

struct MechanismDocument {
  enum class Kind { deterministic, randomized };
  Kind kind = Kind::deterministic;
  DeterministicMechanism det;
  RandomizedMechanism rand;
  std::optional<Provenance> provenance;
};

SettingDocument parse_setting_document(const std::string& text);
std::string serialize_setting_document(const SettingDocument& doc);

// Mechanism documents name types and outcomes, so decoding needs the
// setting they belong to; a shape mismatch is an InputError.
MechanismDocument parse_mechanism_document(const std::string& text,
                                           const Setting& s);
std::string serialize_mechanism_document(const MechanismDocument& doc,
                                         const Setting& s);

ReductionMeta parse_meta_document(const std::string& text);
std::string serialize_meta_document(const ReductionMeta& meta,
                                    const Setting& s);

// File helpers; read errors surface as InputError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string concept_name(Concept c);
Concept concept_from_name(const std::string& name);

}  // namespace amd

#endif  // AMD_IO_HPP
