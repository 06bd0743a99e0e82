#pragma once

// Brute-force reference computations on presheaves: every candidate family of
// stage functions is generated and filtered by naturality.

#include <functional>
#include <vector>

#include "e2t/presheaf.hpp"

namespace oracle {

using Comp = std::vector<std::vector<int>>;

inline bool natural(const e2t::Presheaf& x, const e2t::Presheaf& y, const Comp& c) {
  const auto& cat = x.cat();
  for (int h = 0; h < cat.num_arrows(); ++h)
    for (int e = 0; e < x.size(cat.cod(h)); ++e)
      if (c[static_cast<std::size_t>(cat.dom(h))][static_cast<std::size_t>(x.act(h, e))] !=
          y.act(h, c[static_cast<std::size_t>(cat.cod(h))][static_cast<std::size_t>(e)]))
        return false;
  return true;
}

/// All natural maps, generated as raw function families.
inline std::vector<Comp> nat_transfs(const e2t::Presheaf& x, const e2t::Presheaf& y) {
  const int n = x.cat().num_objects();
  Comp c(static_cast<std::size_t>(n));
  for (int o = 0; o < n; ++o) {
    if (x.size(o) > 0 && y.size(o) == 0) return {};
    c[static_cast<std::size_t>(o)].assign(static_cast<std::size_t>(x.size(o)), 0);
  }
  std::vector<Comp> out;
  while (true) {
    if (natural(x, y, c)) out.push_back(c);
    // Odometer over all entries.
    int o = n - 1;
    bool carried = true;
    while (carried && o >= 0) {
      auto& v = c[static_cast<std::size_t>(o)];
      int i = static_cast<int>(v.size()) - 1;
      while (i >= 0 && ++v[static_cast<std::size_t>(i)] == y.size(o)) v[static_cast<std::size_t>(i--)] = 0;
      if (i >= 0) carried = false;
      else --o;
    }
    if (carried) break;
  }
  return out;
}

inline bool surjective(const e2t::Presheaf& y, const Comp& c) {
  for (int o = 0; o < y.cat().num_objects(); ++o) {
    std::vector<char> hit(static_cast<std::size_t>(y.size(o)), 0);
    for (int v : c[static_cast<std::size_t>(o)]) hit[static_cast<std::size_t>(v)] = 1;
    for (char h : hit)
      if (!h) return false;
  }
  return true;
}

inline bool injective(const e2t::Presheaf& y, const Comp& c) {
  for (int o = 0; o < y.cat().num_objects(); ++o) {
    std::vector<char> hit(static_cast<std::size_t>(y.size(o)), 0);
    for (int v : c[static_cast<std::size_t>(o)]) {
      if (hit[static_cast<std::size_t>(v)]) return false;
      hit[static_cast<std::size_t>(v)] = 1;
    }
  }
  return true;
}

/// Some representable maps onto X.
inline bool compact(const e2t::Presheaf& x) {
  for (int p = 0; p < x.cat().num_objects(); ++p) {
    auto yp = e2t::yoneda(x.base(), p);
    for (const auto& c : nat_transfs(yp, x))
      if (surjective(x, c)) return true;
  }
  return false;
}

inline bool isomorphic(const e2t::Presheaf& a, const e2t::Presheaf& b) {
  if (a.sizes() != b.sizes()) return false;
  for (const auto& c : nat_transfs(a, b))
    if (injective(b, c)) return true;
  return false;
}

}  // namespace oracle
