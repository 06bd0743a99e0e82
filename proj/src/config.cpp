#include "e2t/config.hpp"

#include <cstdlib>
#include <string>

#include "e2t/error.hpp"

namespace e2t::config {

namespace {

std::size_t pick(const std::optional<std::size_t>& flag, const Env& env, const char* var, std::size_t fallback) {
  if (flag) return *flag;
  const char* v = env ? env(var) : nullptr;
  if (!v || !*v) return fallback;
  std::string s(v);
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || n == 0 || s[0] == '-') throw PreconditionError(std::string(var) + " must be a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(n);
}

}  // namespace

Env process_env() {
  return [](const char* name) -> const char* { return std::getenv(name); };
}

Budgets resolve(const Overrides& flags, const Env& env) {
  Budgets d;
  return {pick(flags.step_budget, env, "E2T_STEP_BUDGET", d.step_budget),
          pick(flags.term_size, env, "E2T_TERM_SIZE", d.term_size),
          pick(flags.search_cap, env, "E2T_SEARCH_CAP", d.search_cap)};
}

}  // namespace e2t::config
