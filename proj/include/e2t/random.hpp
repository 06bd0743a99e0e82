#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace e2t {

/// Seeded generator with portable helpers (the standard distributions are not
/// reproducible across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, n); n > 0.
  int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
  /// Uniform in [lo, hi].
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }
  bool chance(int num, int den) { return below(den) < num; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(below(static_cast<int>(i)))]);
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
  }

  /// Derives an independent stream, e.g. per instance.
  Rng fork(std::uint64_t salt) { return Rng(eng_() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace e2t
