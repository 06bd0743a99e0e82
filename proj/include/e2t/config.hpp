#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace e2t::config {

/// Looks up an environment variable; null when unset.
using Env = std::function<const char*(const char*)>;

Env process_env();

struct Budgets {
  std::size_t step_budget = 10'000;  // E2T_STEP_BUDGET
  std::size_t term_size = 7;         // E2T_TERM_SIZE
  std::size_t search_cap = 2'000;    // E2T_SEARCH_CAP
};

struct Overrides {
  std::optional<std::size_t> step_budget;
  std::optional<std::size_t> term_size;
  std::optional<std::size_t> search_cap;
};

/// Flag, then environment, then default. Throws PreconditionError on an
/// environment value that is not a positive integer.
Budgets resolve(const Overrides& flags, const Env& env = process_env());

}  // namespace e2t::config
