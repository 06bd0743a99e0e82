#pragma once

// Coherence of a groupoid presheaf checked straight from the definition:
// pseudo-compactness and pseudo-compact diagonals, quantified over every
// compact presheaf up to a stage bound and every map out of it.

#include <algorithm>

#include "e2t/coherence.hpp"
#include "e2t/generate.hpp"
#include "gpd_oracle.hpp"
#include "presheaf_oracle.hpp"

namespace oracle {

inline std::vector<e2t::Presheaf> compact_presheaves(const e2t::CategoryRef& base, int max_stage) {
  std::vector<e2t::Presheaf> out;
  e2t::gen::for_each_presheaf(base, max_stage, [&](const e2t::Presheaf& x) {
    if (compact(x)) out.push_back(x);
  });
  return out;
}

/// Connected components as a presheaf, from the orbit relaxation.
inline e2t::Presheaf components(const e2t::GpdPresheaf& g) {
  const auto& c = g.cat();
  auto orb = orbits(g);
  std::vector<std::vector<int>> reps(orb.size());
  for (std::size_t p = 0; p < orb.size(); ++p) {
    reps[p] = orb[p];
    std::sort(reps[p].begin(), reps[p].end());
    reps[p].erase(std::unique(reps[p].begin(), reps[p].end()), reps[p].end());
  }
  auto class_of = [&](int p, int x) {
    const auto& r = reps[static_cast<std::size_t>(p)];
    int rep = orb[static_cast<std::size_t>(p)][static_cast<std::size_t>(x)];
    return static_cast<int>(std::lower_bound(r.begin(), r.end(), rep) - r.begin());
  };
  std::vector<int> sizes;
  for (const auto& r : reps) sizes.push_back(static_cast<int>(r.size()));
  e2t::Presheaf::Table act(static_cast<std::size_t>(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h)
    for (int r : reps[static_cast<std::size_t>(c.cod(h))]) act[static_cast<std::size_t>(h)].push_back(class_of(c.dom(h), g.act_obj(h, r)));
  return e2t::Presheaf(g.base(), sizes, act);
}

/// Trivial vertex groups at every stage and a compact presheaf of components.
inline bool compact_discrete(const e2t::GpdPresheaf& g) {
  for (const auto& s : g.stages())
    for (int a = 0; a < s.num_arrows(); ++a)
      if (s.dom(a) == s.cod(a) && !s.is_identity(a)) return false;
  return compact(components(g));
}

/// Every pseudo-pullback of f along a map from a compact discrete groupoid
/// is compact discrete.
inline bool pseudo_compact_map(const e2t::GpdFunctor& f, const std::vector<e2t::Presheaf>& compacts) {
  e2t::Presheaf t0 = f.target().objects();
  for (const auto& k : compacts)
    for (const auto& m : nat_transfs(k, t0)) {
      auto pp = e2t::pseudo_pullback(e2t::from_discrete(f.target(), e2t::NatTransf(k, t0, m)), f);
      if (!compact_discrete(pp.apex)) return false;
    }
  return true;
}

inline bool pseudo_compact(const e2t::GpdPresheaf& g, const std::vector<e2t::Presheaf>& compacts) {
  e2t::Presheaf g0 = g.objects();
  auto orb = orbits(g);
  for (const auto& k : compacts)
    for (const auto& m : nat_transfs(k, g0)) {
      bool eso = true;
      for (std::size_t p = 0; p < orb.size() && eso; ++p) {
        std::vector<char> hit(orb[p].size(), 0);
        for (int x : m[p]) hit[static_cast<std::size_t>(orb[p][static_cast<std::size_t>(x)])] = 1;
        for (std::size_t y = 0; y < orb[p].size(); ++y)
          if (!hit[static_cast<std::size_t>(orb[p][y])]) eso = false;
      }
      if (eso) return true;
    }
  return false;
}

struct Definition {
  bool pseudo_compact = false;
  bool diagonal = false;
  bool second_diagonal = false;
  bool holds() const { return pseudo_compact && diagonal && second_diagonal; }
};

inline Definition coherent_by_definition(const e2t::GpdPresheaf& g, const std::vector<e2t::Presheaf>& compacts) {
  Definition d;
  d.pseudo_compact = pseudo_compact(g, compacts);
  auto sd = e2t::second_diagonal(g);
  d.diagonal = pseudo_compact_map(sd.delta, compacts);
  d.second_diagonal = pseudo_compact_map(sd.delta2, compacts);
  return d;
}

}  // namespace oracle
