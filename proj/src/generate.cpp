#include "e2t/generate.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace e2t::gen {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(idx(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[idx(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

}  // namespace

Presheaf sum_of_representables(const CategoryRef& base, const std::vector<int>& objs) {
  Presheaf acc = initial(base);
  for (int p : objs) acc = coproduct(acc, yoneda(base, p)).apex;
  return acc;
}

void for_each_presheaf(const CategoryRef& base, int max_stage,
                       const std::function<void(const Presheaf&)>& visit) {
  const FinCategory& c = *base;
  const int n = c.num_objects();
  const int m = c.num_arrows();
  // Composition laws to check once all three arrows are assigned: the law for
  // (g, f) is checked when max(g, f, g.f) is assigned.
  std::vector<std::vector<std::pair<int, int>>> laws(idx(m));
  for (int f = n; f < m; ++f)
    for (int g : c.out(c.cod(f))) {
      if (c.is_identity(g)) continue;
      int h = c.compose(g, f);
      laws[idx(std::max({f, g, h}))].emplace_back(g, f);
    }
  std::vector<int> sizes(idx(n), 0);
  Presheaf::Table act(idx(m));
  std::function<void(int)> assign = [&](int a) {
    if (a == m) {
      visit(Presheaf::unchecked(base, sizes, act));
      return;
    }
    int p = c.cod(a), q = c.dom(a);
    auto& t = act[idx(a)];
    t.assign(idx(sizes[idx(p)]), 0);
    if (sizes[idx(p)] > 0 && sizes[idx(q)] == 0) return;
    while (true) {
      bool ok = true;
      for (auto [g, f] : laws[idx(a)]) {
        int h = c.compose(g, f);
        for (int x = 0; x < sizes[idx(c.cod(g))] && ok; ++x)
          ok = act[idx(h)][idx(x)] == act[idx(f)][idx(act[idx(g)][idx(x)])];
        if (!ok) break;
      }
      if (ok) assign(a + 1);
      int i = sizes[idx(p)] - 1;
      while (i >= 0 && ++t[idx(i)] == sizes[idx(q)]) t[idx(i--)] = 0;
      if (i < 0) break;
    }
  };
  while (true) {
    for (int o = 0; o < n; ++o) {
      act[idx(o)].resize(idx(sizes[idx(o)]));
      std::iota(act[idx(o)].begin(), act[idx(o)].end(), 0);
    }
    assign(n);
    int i = n - 1;
    while (i >= 0 && ++sizes[idx(i)] > max_stage) sizes[idx(i--)] = 0;
    if (i < 0) break;
  }
}

QuotientResult quotient_by_pairs(const Presheaf& x, const std::vector<std::tuple<int, int, int>>& pairs) {
  const FinCategory& c = x.cat();
  const int n = c.num_objects();
  std::vector<Dsu> d;
  for (int o = 0; o < n; ++o) d.emplace_back(x.size(o));
  std::vector<std::tuple<int, int, int>> work = pairs;
  while (!work.empty()) {
    auto [o, a, b] = work.back();
    work.pop_back();
    if (!d[idx(o)].unite(a, b)) continue;
    for (int h = 0; h < c.num_arrows(); ++h)
      if (c.cod(h) == o && !c.is_identity(h)) work.emplace_back(c.dom(h), x.act(h, a), x.act(h, b));
  }
  std::vector<int> sizes(idx(n), 0);
  NatTransf::Components proj(idx(n));
  std::vector<std::vector<int>> rep(idx(n));
  for (int o = 0; o < n; ++o) {
    std::vector<int> cls(idx(x.size(o)), -1);
    for (int e = 0; e < x.size(o); ++e) {
      int r = d[idx(o)].find(e);
      if (cls[idx(r)] == -1) {
        cls[idx(r)] = sizes[idx(o)]++;
        rep[idx(o)].push_back(e);
      }
      proj[idx(o)].push_back(cls[idx(r)]);
    }
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h)
    for (int e : rep[idx(c.cod(h))]) act[idx(h)].push_back(proj[idx(c.dom(h))][idx(x.act(h, e))]);
  Presheaf q = Presheaf::unchecked(x.base(), sizes, std::move(act));
  return {q, NatTransf::unchecked(x, q, std::move(proj))};
}

Presheaf presheaf(Rng& rng, const CategoryRef& base, PresheafBounds bounds) {
  const FinCategory& c = *base;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    int k = rng.between(0, bounds.max_generators);
    if (k == 0 && rng.chance(3, 4)) k = 1;
    std::vector<int> objs;
    for (int i = 0; i < k; ++i) objs.push_back(rng.below(c.num_objects()));
    Presheaf s = sum_of_representables(base, objs);
    std::vector<std::tuple<int, int, int>> pairs;
    while (rng.below(100) < bounds.merge_percent) {
      int o = rng.below(c.num_objects());
      if (s.size(o) < 2) {
        if (rng.chance(1, 2)) break;
        continue;
      }
      pairs.emplace_back(o, rng.below(s.size(o)), rng.below(s.size(o)));
    }
    Presheaf q = quotient_by_pairs(s, pairs).quotient;
    bool ok = true;
    for (int o = 0; o < c.num_objects(); ++o) ok = ok && q.size(o) <= bounds.max_stage;
    if (ok) return q;
  }
  throw GenerationExhausted(0, kRetryCap);
}

}  // namespace e2t::gen
