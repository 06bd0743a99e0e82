#include <algorithm>

#include "e2t/presheaf.hpp"

namespace e2t {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool covers(const Presheaf& x, int obj, int elem) {
  const FinCategory& c = x.cat();
  for (int q = 0; q < c.num_objects(); ++q) {
    std::vector<char> hit(idx(x.size(q)), 0);
    int count = 0;
    for (int k : c.hom(q, obj)) {
      int v = x.act(k, elem);
      if (!hit[idx(v)]) {
        hit[idx(v)] = 1;
        ++count;
      }
    }
    if (count != x.size(q)) return false;
  }
  return true;
}

bool jointly_injective(const std::vector<const NatTransf*>& legs, const Presheaf& x) {
  const FinCategory& c = x.cat();
  for (int o = 0; o < c.num_objects(); ++o)
    for (int a = 0; a < x.size(o); ++a)
      for (int b = a + 1; b < x.size(o); ++b) {
        bool same = true;
        for (const NatTransf* l : legs)
          if ((*l)(o, a) != (*l)(o, b)) {
            same = false;
            break;
          }
        if (same) return false;
      }
  return true;
}

}  // namespace

std::optional<CompactnessWitness> is_compact(const Presheaf& x) {
  const FinCategory& c = x.cat();
  for (int p = 0; p < c.num_objects(); ++p)
    for (int e = 0; e < x.size(p); ++e)
      if (covers(x, p, e)) return CompactnessWitness{p, e};
  return std::nullopt;
}

Presheaf pullback_over_element(const NatTransf& f, int obj, int elem) {
  const Presheaf& y = f.source();
  const Presheaf& x = f.target();
  const FinCategory& c = x.cat();
  const int n = c.num_objects();
  std::vector<int> sizes(idx(n), 0);
  std::vector<std::vector<std::pair<int, int>>> elems(idx(n));
  std::vector<std::vector<int>> index(idx(n));
  for (int q = 0; q < n; ++q) {
    auto h = c.hom(q, obj);
    index[idx(q)].assign(h.size() * idx(y.size(q)), -1);
    for (std::size_t i = 0; i < h.size(); ++i) {
      int xv = x.act(h[i], elem);
      for (int v = 0; v < y.size(q); ++v)
        if (f(q, v) == xv) {
          index[idx(q)][i * idx(y.size(q)) + idx(v)] = sizes[idx(q)]++;
          elems[idx(q)].emplace_back(static_cast<int>(i), v);
        }
    }
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    int p = c.cod(h), q = c.dom(h);
    auto homp = c.hom(p, obj);
    for (auto [i, v] : elems[idx(p)]) {
      int k = c.compose(homp[idx(i)], h);
      int j = hom_position(c, k);
      act[idx(h)].push_back(index[idx(q)][idx(j) * idx(y.size(q)) + idx(y.act(h, v))]);
    }
  }
  return Presheaf::unchecked(x.base(), sizes, std::move(act));
}

CompactMapReport is_compact_map(const NatTransf& f) {
  CompactMapReport r;
  const Presheaf& x = f.target();
  for (int p = 0; p < x.cat().num_objects(); ++p)
    for (int e = 0; e < x.size(p); ++e)
      if (!is_compact(pullback_over_element(f, p, e))) {
        r.holds = false;
        r.failures.emplace_back(p, e);
      }
  return r;
}

PresheafCoherence is_coherent_presheaf(const Presheaf& c) {
  PresheafCoherence r;
  r.witness = is_compact(c);
  if (!r.witness) return r;
  auto prod = product(c, c);
  auto report = is_compact_map(diagonal(c, prod));
  if (!report.holds) {
    r.failing = report.failures.front();
    return r;
  }
  r.holds = true;
  return r;
}

std::optional<int> is_indecomposable_projective(const Presheaf& x) {
  const FinCategory& c = x.cat();
  for (int p = 0; p < c.num_objects(); ++p) {
    bool sizes_match = true;
    for (int q = 0; q < c.num_objects() && sizes_match; ++q)
      sizes_match = x.size(q) == static_cast<int>(c.hom(q, p).size());
    if (!sizes_match) continue;
    for (int e = 0; e < x.size(p); ++e)
      if (element_to_map(x, p, e).is_iso()) return p;
  }
  return std::nullopt;
}

std::optional<AssemblyLikeWitness> is_assembly_like(const Presheaf& x, int max_factors) {
  auto cover = is_compact(x);
  if (!cover) return std::nullopt;
  const FinCategory& c = x.cat();
  const int n = c.num_objects();
  std::vector<std::vector<NatTransf>> maps(idx(n));
  for (int p = 0; p < n; ++p) maps[idx(p)] = all_nat_transfs(x, yoneda(x.base(), p));
  for (int k = 1; k <= max_factors; ++k) {
    // Nondecreasing object tuples, then lexicographic choice of maps.
    std::vector<int> objs(idx(k), 0);
    while (true) {
      std::vector<std::size_t> choice(idx(k), 0);
      bool any = std::all_of(objs.begin(), objs.end(), [&](int o) { return !maps[idx(o)].empty(); });
      while (any) {
        std::vector<const NatTransf*> legs;
        for (int i = 0; i < k; ++i) legs.push_back(&maps[idx(objs[idx(i)])][choice[idx(i)]]);
        if (jointly_injective(legs, x)) {
          AssemblyLikeWitness w{*cover, objs, {}};
          for (const NatTransf* l : legs) w.legs.push_back(*l);
          return w;
        }
        int i = k - 1;
        while (i >= 0 && ++choice[idx(i)] == maps[idx(objs[idx(i)])].size()) choice[idx(i--)] = 0;
        if (i < 0) break;
      }
      int i = k - 1;
      while (i >= 0 && objs[idx(i)] == n - 1) --i;
      if (i < 0) break;
      ++objs[idx(i)];
      for (int j = i + 1; j < k; ++j) objs[idx(j)] = objs[idx(i)];
    }
  }
  return std::nullopt;
}

std::optional<ExactPresentation> exact_presentation(const Presheaf& c, PresentationClass cls,
                                                    int max_factors) {
  const FinCategory& base = c.cat();
  for (int p = 0; p < base.num_objects(); ++p)
    for (int e = 0; e < c.size(p); ++e) {
      if (!covers(c, p, e)) continue;
      NatTransf cover = element_to_map(c, p, e);
      PullbackResult kernel = kernel_pair(cover);
      std::optional<int> rep;
      std::optional<AssemblyLikeWitness> asm_like;
      if (cls == PresentationClass::Representable) {
        rep = is_indecomposable_projective(kernel.apex);
        if (!rep) continue;
      } else {
        asm_like = is_assembly_like(kernel.apex, max_factors);
        if (!asm_like) continue;
      }
      QuotientResult q = coequalize_eqrel(kernel.left, kernel.right);
      NatTransf::Components comp(idx(base.num_objects()));
      for (int o = 0; o < base.num_objects(); ++o) {
        comp[idx(o)].assign(idx(q.quotient.size(o)), -1);
        for (int x = 0; x < cover.source().size(o); ++x)
          comp[idx(o)][idx(q.projection(o, x))] = cover(o, x);
      }
      NatTransf comparison = NatTransf::unchecked(q.quotient, c, std::move(comp));
      if (!comparison.is_iso()) continue;
      return ExactPresentation{CompactnessWitness{p, e}, cover, kernel, q, comparison, rep, asm_like};
    }
  return std::nullopt;
}

std::optional<PseudoEqRel> pseudo_eq_rel_presentation(const Presheaf& c) {
  if (!is_coherent_presheaf(c).holds) throw NotCoherent("pseudo_eq_rel_presentation: input not coherent");
  const FinCategory& base = c.cat();
  const CategoryRef& ref = c.base();
  for (int p = 0; p < base.num_objects(); ++p)
    for (int e = 0; e < c.size(p); ++e) {
      if (!covers(c, p, e)) continue;
      NatTransf cover = element_to_map(c, p, e);
      PullbackResult kernel = kernel_pair(cover);
      auto kw = is_compact(kernel.apex);
      if (!kw) continue;
      int q = kw->obj;
      auto hp = base.hom(q, p);
      int d0 = hp[idx(kernel.left(q, kw->elem))];
      int d1 = hp[idx(kernel.right(q, kw->elem))];
      NatTransf kcover = element_to_map(kernel.apex, q, kw->elem);
      PseudoEqRel r{p, q, d0, d1, cover, kernel, kcover, -1, -1,
                    pullback(yoneda_map(ref, d1), yoneda_map(ref, d0)), std::nullopt};
      for (int a : base.hom(p, q))
        if (base.compose(d0, a) == p && base.compose(d1, a) == p) {
          r.reflexivity = a;
          break;
        }
      for (int a : base.hom(q, q))
        if (base.compose(d0, a) == d1 && base.compose(d1, a) == d0) {
          r.symmetry = a;
          break;
        }
      // t(u, v) = (d0 u, d1 v) in K, lifted through the cover y(Q) -> K.
      const PullbackResult& t = r.composable;
      auto found = find_constrained_map(t.apex, yoneda(ref, q), [&](int o, int el, int val) {
        int u = base.hom(o, q)[idx(t.left(o, el))];
        int v = base.hom(o, q)[idx(t.right(o, el))];
        int a = hom_position(base, base.compose(d0, u));
        int b = hom_position(base, base.compose(d1, v));
        return kcover(o, val) == kernel.lookup(o, a, b);
      });
      r.transitivity = found.second;
      return r;
    }
  return std::nullopt;
}

bool is_lex_base(const CategoryRef& base) {
  const FinCategory& c = *base;
  if (!is_indecomposable_projective(terminal(base))) return false;
  for (int u = 0; u < c.num_arrows(); ++u)
    for (int v = 0; v < c.num_arrows(); ++v) {
      if (c.cod(u) != c.cod(v)) continue;
      auto pb = pullback(yoneda_map(base, u), yoneda_map(base, v));
      if (!is_indecomposable_projective(pb.apex)) return false;
    }
  return true;
}

}  // namespace e2t
