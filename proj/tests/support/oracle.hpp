#ifndef AMD_TESTS_ORACLE_HPP
#define AMD_TESTS_ORACLE_HPP

#include <functional>
#include <optional>

#include "amd/incentives.hpp"

namespace amd::testoracle {

// Independent reference implementations used to cross-check the library:
// straight quantifier loops over the truthfulness definitions and plain
// exhaustive enumeration, sharing no code with the checkers or solvers.

std::optional<ManipulationWitness> literal_check(const Setting& s,
                                                 const DeterministicMechanism& m,
                                                 Concept sc);
std::optional<ManipulationWitness> literal_check(const Setting& s,
                                                 const RandomizedMechanism& m,
                                                 Concept sc);

// Prior-weighted objective of a deterministic mechanism, from scratch.
Rational literal_expected_value(const Setting& s, const Objective& obj,
                                const DeterministicMechanism& m);

// Visits every outcome map (|O|^cells of them) in lexicographic order;
// the buffer behind the reference is reused between calls.
void enumerate_mechanisms(
    const Setting& s,
    const std::function<void(const DeterministicMechanism&)>& visit);

struct BruteForceResult {
  Rational value;
  DeterministicMechanism mechanism;  // lexicographically first optimum
};

// Filter-by-literal-check, maximize-by-enumeration solver.
BruteForceResult brute_force_solve(const Setting& s, const Objective& obj,
                                   Concept sc);

}  // namespace amd::testoracle

#endif  // AMD_TESTS_ORACLE_HPP
