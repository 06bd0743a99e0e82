#include "e2t/coherence.hpp"

#include <map>

#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;
using detail::Key;

bool is_eso_element(const GpdPresheaf& g, int obj, int elem) {
  const FinCategory& c = g.cat();
  for (int q = 0; q < c.num_objects(); ++q) {
    const auto& s = g.stage(q);
    std::vector<char> reached(idx(s.num_objects()), 0);
    for (int u : c.hom(q, obj)) {
      int x = g.act_obj(u, elem);
      for (int a : s.out(x)) reached[idx(s.cod(a))] = 1;
    }
    for (char r : reached)
      if (!r) return false;
  }
  return true;
}

std::optional<PseudoCompactCover> find_pseudo_compact_cover(const GpdPresheaf& g) {
  for (int p = 0; p < g.cat().num_objects(); ++p)
    for (int x = 0; x < g.stage(p).num_objects(); ++x)
      if (is_eso_element(g, p, x)) return PseudoCompactCover{p, x};
  return std::nullopt;
}

Strictification strictify(const GpdPresheaf& g, PseudoCompactCover cover) {
  const CategoryRef& base = g.base();
  const FinCategory& c = *base;
  if (cover.obj < 0 || cover.obj >= c.num_objects() || cover.elem < 0 ||
      cover.elem >= g.stage(cover.obj).num_objects())
    throw PreconditionError("strictify: cover element out of range");
  Presheaf g0 = g.objects();
  Presheaf k0 = yoneda(base, cover.obj);
  PullbackResult k0sq = product(k0, k0);
  PullbackResult g0sq = product(g0, g0);
  NatTransf x = element_to_map(g0, cover.obj, cover.elem);
  NatTransf xx = pairing(g0sq, compose(x, k0sq.left), compose(x, k0sq.right));
  NatTransf ends = pairing(g0sq, g.dom_map(), g.cod_map());
  PullbackResult k1 = pullback(xx, ends);

  std::vector<detail::StageAssembler> st(idx(c.num_objects()));
  std::vector<FinGroupoid> stages;
  for (int q = 0; q < c.num_objects(); ++q) {
    const auto& gs = g.stage(q);
    auto& s = st[idx(q)];
    for (int u = 0; u < k0.size(q); ++u) s.add_object({u}, c.arrow(c.hom(q, cover.obj)[idx(u)]).name);
    auto element = [&](int u, int v, int arrow) { return k1.lookup(q, k0sq.lookup(q, u, v), arrow); };
    for (int u = 0; u < k0.size(q); ++u) s.add_arrow(u, u, {element(u, u, x(q, u))});
    for (int e = 0; e < k1.apex.size(q); ++e) {
      int pair = k1.left(q, e);
      int u = k0sq.left(q, pair), v = k0sq.right(q, pair);
      if (u == v && gs.is_identity(k1.right(q, e))) continue;
      s.add_arrow(u, v, {e});
    }
    stages.push_back(s.build(
        [&](const Key& k2, const Key& k1key) {
          int e1 = k1key[0], e2 = k2[0];
          int u = k0sq.left(q, k1.left(q, e1)), w = k0sq.right(q, k1.left(q, e2));
          return Key{element(u, w, gs.compose(k1.right(q, e2), k1.right(q, e1)))};
        },
        [&](const Key& k) {
          int pair = k1.left(q, k[0]);
          return Key{element(k0sq.right(q, pair), k0sq.left(q, pair), gs.inverse(k1.right(q, k[0])))};
        }));
  }
  auto act = detail::restrictions(
      c, st, [&](int h, const Key& k) { return Key{k0.act(h, k[0])}; },
      [&](int h, const Key& k) { return Key{k1.apex.act(h, k[0])}; });
  GpdPresheaf k = GpdPresheaf::unchecked(base, std::move(stages), std::move(act));
  std::vector<StageFunctor> to;
  for (int q = 0; q < c.num_objects(); ++q) {
    StageFunctor f;
    const auto& s = st[idx(q)];
    for (int u = 0; u < s.num_objects(); ++u) f.obj.push_back(x(q, u));
    for (int a = 0; a < s.num_arrows(); ++a) f.arr.push_back(k1.right(q, s.arrow_key(a)[0]));
    to.push_back(std::move(f));
  }
  GpdFunctor to_g(k, g, std::move(to), "strictification");
  WeakEquivalenceReport weak = is_weak_equivalence(to_g);
  return Strictification{cover, k0, k0sq, k1, k, to_g, weak};
}

namespace {

CoherenceCondition condition(const NatTransf& f) {
  CompactMapReport r = is_compact_map(f);
  CoherenceCondition out;
  out.holds = r.holds;
  if (!r.failures.empty()) out.failure = r.failures.front();
  return out;
}

}  // namespace

CoherenceReport is_coherent_groupoid(const GpdPresheaf& g) {
  CoherenceReport r;
  r.pseudo_compact = find_pseudo_compact_cover(g);
  if (!r.pseudo_compact) return r;
  r.strictified = strictify(g, *r.pseudo_compact);
  const PullbackResult& k1 = r.strictified->k1;
  r.cond2 = condition(k1.left);
  r.k1_pair = pullback(k1.left, k1.left);
  r.k1_diagonal = into_pullback(*r.k1_pair, identity(k1.apex), identity(k1.apex));
  r.cond3 = condition(*r.k1_diagonal);
  r.holds = r.strictified->weak.holds && r.cond2.holds && r.cond3.holds;
  return r;
}

SecondDiagonal second_diagonal(const GpdPresheaf& g) {
  GpdPullback square = product(g, g);
  GpdFunctor delta = diagonal(square);
  PseudoPullback paths = pseudo_pullback(delta, delta);
  const FinCategory& c = g.cat();
  std::vector<StageFunctor> st;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& ps = paths.apex.stage(p);
    const auto& sq = square.apex.stage(p);
    StageFunctor f;
    f.obj.assign(idx(g.stage(p).num_objects()), -1);
    for (int o = 0; o < ps.num_objects(); ++o) {
      int x = paths.left.obj(p, o);
      if (paths.right.obj(p, o) == x && sq.is_identity(paths.cell(p, o))) f.obj[idx(x)] = o;
    }
    for (int u = 0; u < g.stage(p).num_arrows(); ++u) {
      int from = f.obj[idx(g.stage(p).dom(u))];
      for (int a : ps.out(from))
        if (paths.left.arr(p, a) == u && paths.right.arr(p, a) == u) f.arr.push_back(a);
    }
    st.push_back(std::move(f));
  }
  GpdFunctor delta2(g, paths.apex, std::move(st), "second diagonal");
  return SecondDiagonal{square, delta, paths, delta2};
}

CoherenceReport transport_coherence(const GpdFunctor& e, const CoherenceReport& source) {
  if (!is_weak_equivalence(e).holds) throw PreconditionError("transport_coherence: map is not a weak equivalence");
  CoherenceReport r = is_coherent_groupoid(e.target());
  if (source.holds && !r.holds)
    throw TransportFailure("transport_coherence: coherent source has an incoherent equivalent target");
  return r;
}

}  // namespace e2t
