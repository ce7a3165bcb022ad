#ifndef AMD_ERRORS_HPP
#define AMD_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace amd {

// Invalid user input: malformed documents, violated setting invariants,
// mismatched shapes. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// The deterministic solver ran out of its node budget before proving
// optimality. Never returned as a silent suboptimal answer; the CLI
// maps this to exit code 3.
struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(std::uint64_t nodes)
      : std::runtime_error("search budget exhausted after " +
                           std::to_string(nodes) + " nodes"),
        explored_nodes(nodes) {}
  std::uint64_t explored_nodes;
};

}  // namespace amd

#endif  // AMD_ERRORS_HPP
