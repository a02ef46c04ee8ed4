#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

// Malformed arguments, bad cone definitions, dimension mismatches.
// The CLI maps this to exit code 2.
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A derivative-free search ran out of restarts/iterations without meeting
// its tolerance. Carries the best residual seen so callers can report it.
// The CLI maps this to exit code 3.
struct SearchBudgetExhausted : std::runtime_error {
  double best_residual;
  SearchBudgetExhausted(const std::string& what, double best)
      : std::runtime_error(what), best_residual(best) {}
};

// Internal consistency check failed (a constructed point does not verify
// against the predicate that defined it). Indicates a bug upstream.
struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conelab
