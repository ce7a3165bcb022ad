#ifndef AMD_INCENTIVES_HPP
#define AMD_INCENTIVES_HPP

#include <optional>
#include <vector>

#include "amd/mechanism.hpp"

namespace amd {

// The two solution concepts checked and solved for.
enum class Concept { ds, bn };

// A concrete violated truthfulness inequality: reporting `misreport`
// instead of `true_type` improves agent's (expected) utility by `gain`.
// For dominant-strategy checks `opposing` is the full vector of the
// other agents' reports at which the deviation profits; Bayes-Nash
// violations are in expectation, so no opposing context exists.
struct ManipulationWitness {
  int agent = 0;
  int true_type = 0;
  int misreport = 0;
  std::optional<std::vector<int>> opposing;
  Rational gain;
};

// nullopt means the mechanism passes. A returned witness is the
// lexicographically first violation by (agent, true type, opposing
// vector, misreport) in declared index order.
using CheckResult = std::optional<ManipulationWitness>;

CheckResult check_ds_det(const Setting& s, const DeterministicMechanism& m);
CheckResult check_bn_det(const Setting& s, const DeterministicMechanism& m);
CheckResult check_ds_rand(const Setting& s, const RandomizedMechanism& m);
CheckResult check_bn_rand(const Setting& s, const RandomizedMechanism& m);

// Serial reference implementations, kept for testing the OpenMP kernels
// above against; identical contracts.
namespace serial {
CheckResult check_ds_det(const Setting& s, const DeterministicMechanism& m);
CheckResult check_bn_det(const Setting& s, const DeterministicMechanism& m);
CheckResult check_ds_rand(const Setting& s, const RandomizedMechanism& m);
CheckResult check_bn_rand(const Setting& s, const RandomizedMechanism& m);
}  // namespace serial

// Re-evaluates the two sides of the inequality a witness cites and
// returns misreport utility minus truthful utility. A valid witness
// reproduces its recorded gain exactly.
Rational recompute_gain(const Setting& s, const DeterministicMechanism& m,
                        Concept sc, const ManipulationWitness& w);
Rational recompute_gain(const Setting& s, const RandomizedMechanism& m,
                        Concept sc, const ManipulationWitness& w);

}  // namespace amd

#endif  // AMD_INCENTIVES_HPP
