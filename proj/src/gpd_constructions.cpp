#include <numeric>

#include "e2t/groupoid.hpp"
#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;
using detail::Key;
using detail::StageAssembler;

GpdPresheaf discrete(const Presheaf& x) {
  const FinCategory& c = x.cat();
  std::vector<FinGroupoid> stages;
  for (int p = 0; p < c.num_objects(); ++p) {
    std::vector<std::string> names;
    for (int e = 0; e < x.size(p); ++e) names.push_back(x.label(p, e));
    stages.push_back(FinGroupoid::discrete(std::move(names)));
  }
  std::vector<StageFunctor> act;
  for (int h = 0; h < c.num_arrows(); ++h) act.push_back({x.act_table(h), x.act_table(h)});
  return GpdPresheaf::unchecked(x.base(), std::move(stages), std::move(act));
}

GpdPresheaf terminal_gpd(const CategoryRef& base) { return discrete(terminal(base)); }
GpdPresheaf empty_gpd(const CategoryRef& base) { return discrete(initial(base)); }

GpdFunctor discrete_map(const NatTransf& f) {
  std::vector<StageFunctor> st;
  for (const auto& c : f.components()) st.push_back({c, c});
  return GpdFunctor::unchecked(discrete(f.source()), discrete(f.target()), std::move(st));
}

GpdFunctor from_discrete(const GpdPresheaf& g, const NatTransf& m) {
  if (!(m.target() == g.objects())) throw PreconditionError("from_discrete: map does not land in G0");
  std::vector<StageFunctor> st;
  for (const auto& c : m.components()) st.push_back({c, c});
  return GpdFunctor::unchecked(discrete(m.source()), g, std::move(st));
}

GpdFunctor identity(const GpdPresheaf& g) {
  std::vector<StageFunctor> st;
  for (const auto& s : g.stages()) {
    StageFunctor f;
    f.obj.resize(idx(s.num_objects()));
    f.arr.resize(idx(s.num_arrows()));
    std::iota(f.obj.begin(), f.obj.end(), 0);
    std::iota(f.arr.begin(), f.arr.end(), 0);
    st.push_back(std::move(f));
  }
  return GpdFunctor::unchecked(g, g, std::move(st));
}

GpdFunctor compose(const GpdFunctor& g, const GpdFunctor& f) {
  if (!(f.target() == g.source())) throw PreconditionError("compose: functors are not composable");
  std::vector<StageFunctor> st;
  for (std::size_t p = 0; p < f.stages().size(); ++p) {
    StageFunctor h;
    for (int y : f.stages()[p].obj) h.obj.push_back(g.stages()[p].obj[idx(y)]);
    for (int v : f.stages()[p].arr) h.arr.push_back(g.stages()[p].arr[idx(v)]);
    st.push_back(std::move(h));
  }
  return GpdFunctor::unchecked(f.source(), g.target(), std::move(st));
}

GpdFunctor to_terminal(const GpdPresheaf& g) {
  std::vector<StageFunctor> st;
  for (const auto& s : g.stages())
    st.push_back({std::vector<int>(idx(s.num_objects()), 0), std::vector<int>(idx(s.num_arrows()), 0)});
  return GpdFunctor::unchecked(g, terminal_gpd(g.base()), std::move(st));
}

// ---------------------------------------------------------------- 2-cells

TwoCell identity_cell(const GpdFunctor& f) {
  std::vector<std::vector<int>> comp;
  for (const auto& s : f.stages()) comp.push_back(s.obj);  // identity index = object index
  return TwoCell::unchecked(f, f, std::move(comp));
}

TwoCell vertical(const TwoCell& beta, const TwoCell& alpha) {
  if (!(alpha.target() == beta.source())) throw PreconditionError("vertical: 2-cells are not composable");
  const GpdPresheaf& t = alpha.source().target();
  auto comp = alpha.components();
  for (std::size_t p = 0; p < comp.size(); ++p)
    for (std::size_t x = 0; x < comp[p].size(); ++x)
      comp[p][x] = t.stage(static_cast<int>(p)).compose(beta.components()[p][x], comp[p][x]);
  return TwoCell::unchecked(alpha.source(), beta.target(), std::move(comp));
}

TwoCell inverse(const TwoCell& alpha) {
  const GpdPresheaf& t = alpha.source().target();
  auto comp = alpha.components();
  for (std::size_t p = 0; p < comp.size(); ++p)
    for (auto& a : comp[p]) a = t.stage(static_cast<int>(p)).inverse(a);
  return TwoCell::unchecked(alpha.target(), alpha.source(), std::move(comp));
}

TwoCell whisker_left(const GpdFunctor& h, const TwoCell& alpha) {
  auto comp = alpha.components();
  for (std::size_t p = 0; p < comp.size(); ++p)
    for (auto& a : comp[p]) a = h.arr(static_cast<int>(p), a);
  return TwoCell::unchecked(compose(h, alpha.source()), compose(h, alpha.target()), std::move(comp));
}

TwoCell whisker_right(const TwoCell& alpha, const GpdFunctor& k) {
  std::vector<std::vector<int>> comp;
  for (std::size_t p = 0; p < k.stages().size(); ++p) {
    std::vector<int> row;
    for (int y : k.stages()[p].obj) row.push_back(alpha.components()[p][idx(y)]);
    comp.push_back(std::move(row));
  }
  return TwoCell::unchecked(compose(alpha.source(), k), compose(alpha.target(), k), std::move(comp));
}

// ---------------------------------------------------------------- pullbacks

GpdPullback strict_pullback(const GpdFunctor& f, const GpdFunctor& g) {
  if (!(f.target() == g.target())) throw PreconditionError("strict_pullback: functors have different targets");
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = g.source();
  const FinCategory& c = a.cat();
  std::vector<StageAssembler> st(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    auto& s = st[idx(p)];
    for (int x = 0; x < sa.num_objects(); ++x)
      for (int y = 0; y < sb.num_objects(); ++y)
        if (f.obj(p, x) == g.obj(p, y)) s.add_object({x, y});
    for (int o = 0; o < s.num_objects(); ++o) s.add_arrow(o, o, s.object_key(o));
    for (int u = 0; u < sa.num_arrows(); ++u)
      for (int v = 0; v < sb.num_arrows(); ++v) {
        if (sa.is_identity(u) && sb.is_identity(v)) continue;
        if (f.arr(p, u) != g.arr(p, v)) continue;
        s.add_arrow(s.find_object({sa.dom(u), sb.dom(v)}), s.find_object({sa.cod(u), sb.cod(v)}), {u, v});
      }
  }
  std::vector<FinGroupoid> stages;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    stages.push_back(st[idx(p)].build(
        [&](const Key& k2, const Key& k1) { return Key{sa.compose(k2[0], k1[0]), sb.compose(k2[1], k1[1])}; },
        [&](const Key& k) { return Key{sa.inverse(k[0]), sb.inverse(k[1])}; }));
  }
  auto act = detail::restrictions(
      c, st, [&](int h, const Key& k) { return Key{a.act_obj(h, k[0]), b.act_obj(h, k[1])}; },
      [&](int h, const Key& k) { return Key{a.act_arr(h, k[0]), b.act_arr(h, k[1])}; });
  GpdPresheaf apex = GpdPresheaf::unchecked(a.base(), std::move(stages), std::move(act));
  std::vector<StageFunctor> left, right;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = st[idx(p)];
    StageFunctor l, r;
    for (int x = 0; x < s.num_objects(); ++x) {
      l.obj.push_back(s.object_key(x)[0]);
      r.obj.push_back(s.object_key(x)[1]);
    }
    for (int u = 0; u < s.num_arrows(); ++u) {
      l.arr.push_back(s.arrow_key(u)[0]);
      r.arr.push_back(s.arrow_key(u)[1]);
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
  }
  return {apex, GpdFunctor::unchecked(apex, a, std::move(left)), GpdFunctor::unchecked(apex, b, std::move(right))};
}

GpdPullback product(const GpdPresheaf& a, const GpdPresheaf& b) {
  return strict_pullback(to_terminal(a), to_terminal(b));
}

GpdFunctor into_pullback(const GpdPullback& pb, const GpdFunctor& f, const GpdFunctor& g) {
  detail::PairIndex index(pb);
  std::vector<StageFunctor> st;
  for (int p = 0; p < static_cast<int>(f.stages().size()); ++p) {
    StageFunctor h;
    const auto& s = f.source().stage(p);
    for (int x = 0; x < s.num_objects(); ++x) {
      int o = index.object(p, f.obj(p, x), g.obj(p, x));
      if (o < 0) throw PreconditionError("into_pullback: cone does not commute");
      h.obj.push_back(o);
    }
    for (int u = 0; u < s.num_arrows(); ++u) {
      int a = index.arrow(p, f.arr(p, u), g.arr(p, u));
      if (a < 0) throw PreconditionError("into_pullback: cone does not commute");
      h.arr.push_back(a);
    }
    st.push_back(std::move(h));
  }
  return GpdFunctor::unchecked(f.source(), pb.apex, std::move(st));
}

GpdFunctor pairing(const GpdPullback& prod, const GpdFunctor& f, const GpdFunctor& g) {
  return into_pullback(prod, f, g);
}

GpdFunctor diagonal(const GpdPullback& prod) {
  const GpdPresheaf& g = prod.left.target();
  return pairing(prod, identity(g), identity(g));
}

PseudoPullback pseudo_pullback(const GpdFunctor& f, const GpdFunctor& g) {
  if (!(f.target() == g.target())) throw PreconditionError("pseudo_pullback: functors have different targets");
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = g.source();
  const GpdPresheaf& cc = f.target();
  const FinCategory& c = a.cat();
  std::vector<StageAssembler> st(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    const auto& sc = cc.stage(p);
    auto& s = st[idx(p)];
    for (int x = 0; x < sa.num_objects(); ++x)
      for (int phi : sc.out(f.obj(p, x)))
        for (int y = 0; y < sb.num_objects(); ++y)
          if (g.obj(p, y) == sc.cod(phi)) s.add_object({x, phi, y});
    const int n = s.num_objects();
    for (int o = 0; o < n; ++o) {
      const Key& k = s.object_key(o);
      s.add_arrow(o, o, {o, k[0], k[2]});
    }
    for (int o = 0; o < n; ++o) {
      Key k = s.object_key(o);
      for (int u : sa.out(k[0]))
        for (int v : sb.out(k[2])) {
          if (sa.is_identity(u) && sb.is_identity(v)) continue;
          int phi2 = sc.compose(sc.compose(g.arr(p, v), k[1]), sc.inverse(f.arr(p, u)));
          s.add_arrow(o, s.find_object({sa.cod(u), phi2, sb.cod(v)}), {o, u, v});
        }
    }
  }
  std::vector<FinGroupoid> stages;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    const auto& s = st[idx(p)];
    stages.push_back(s.build(
        [&](const Key& k2, const Key& k1) {
          return Key{k1[0], sa.compose(k2[1], k1[1]), sb.compose(k2[2], k1[2])};
        },
        [&](const Key& k) { return Key{s.arrow(s.find_arrow(k)).cod, sa.inverse(k[1]), sb.inverse(k[2])}; }));
  }
  auto act = detail::restrictions(
      c, st,
      [&](int h, const Key& k) { return Key{a.act_obj(h, k[0]), cc.act_arr(h, k[1]), b.act_obj(h, k[2])}; },
      [&](int h, const Key& k) {
        const auto& from = st[idx(c.cod(h))];
        const auto& to = st[idx(c.dom(h))];
        const Key& ok = from.object_key(k[0]);
        int o = to.find_object({a.act_obj(h, ok[0]), cc.act_arr(h, ok[1]), b.act_obj(h, ok[2])});
        return Key{o, a.act_arr(h, k[1]), b.act_arr(h, k[2])};
      });
  GpdPresheaf apex = GpdPresheaf::unchecked(a.base(), std::move(stages), std::move(act));
  std::vector<StageFunctor> left, right;
  std::vector<std::vector<int>> cell;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = st[idx(p)];
    StageFunctor l, r;
    std::vector<int> row;
    for (int x = 0; x < s.num_objects(); ++x) {
      l.obj.push_back(s.object_key(x)[0]);
      r.obj.push_back(s.object_key(x)[2]);
      row.push_back(s.object_key(x)[1]);
    }
    for (int u = 0; u < s.num_arrows(); ++u) {
      l.arr.push_back(s.arrow_key(u)[1]);
      r.arr.push_back(s.arrow_key(u)[2]);
    }
    left.push_back(std::move(l));
    right.push_back(std::move(r));
    cell.push_back(std::move(row));
  }
  auto lf = GpdFunctor::unchecked(apex, a, std::move(left));
  auto rf = GpdFunctor::unchecked(apex, b, std::move(right));
  auto theta = TwoCell::unchecked(compose(f, lf), compose(g, rf), std::move(cell));
  return {apex, lf, rf, theta};
}

PathGroupoid path_groupoid(const GpdPresheaf& g) {
  const FinCategory& c = g.cat();
  std::vector<StageAssembler> st(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = g.stage(p);
    auto& t = st[idx(p)];
    for (int phi = 0; phi < s.num_arrows(); ++phi) t.add_object({phi}, s.arrow(phi).name);
    for (int phi = 0; phi < s.num_arrows(); ++phi) t.add_arrow(phi, phi, {phi, s.dom(phi), s.cod(phi)});
    for (int phi = 0; phi < s.num_arrows(); ++phi)
      for (int u : s.out(s.dom(phi)))
        for (int v : s.out(s.cod(phi))) {
          if (s.is_identity(u) && s.is_identity(v)) continue;
          int target = s.compose(s.compose(v, phi), s.inverse(u));
          t.add_arrow(phi, target, {phi, u, v});
        }
  }
  std::vector<FinGroupoid> stages;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = g.stage(p);
    const auto& t = st[idx(p)];
    stages.push_back(t.build(
        [&](const Key& k2, const Key& k1) { return Key{k1[0], s.compose(k2[1], k1[1]), s.compose(k2[2], k1[2])}; },
        [&](const Key& k) { return Key{t.arrow(t.find_arrow(k)).cod, s.inverse(k[1]), s.inverse(k[2])}; }));
  }
  auto act = detail::restrictions(
      c, st, [&](int h, const Key& k) { return Key{g.act_arr(h, k[0])}; },
      [&](int h, const Key& k) { return Key{g.act_arr(h, k[0]), g.act_arr(h, k[1]), g.act_arr(h, k[2])}; });
  GpdPresheaf path = GpdPresheaf::unchecked(g.base(), std::move(stages), std::move(act));
  std::vector<StageFunctor> dom, cod, unit;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = g.stage(p);
    const auto& t = st[idx(p)];
    StageFunctor d, e, u;
    for (int x = 0; x < t.num_objects(); ++x) {
      d.obj.push_back(s.dom(x));
      e.obj.push_back(s.cod(x));
    }
    for (int a = 0; a < t.num_arrows(); ++a) {
      d.arr.push_back(t.arrow_key(a)[1]);
      e.arr.push_back(t.arrow_key(a)[2]);
    }
    for (int x = 0; x < s.num_objects(); ++x) u.obj.push_back(x);
    for (int w = 0; w < s.num_arrows(); ++w) u.arr.push_back(t.find_arrow({s.dom(w), w, w}));
    dom.push_back(std::move(d));
    cod.push_back(std::move(e));
    unit.push_back(std::move(u));
  }
  auto df = GpdFunctor::unchecked(path, g, std::move(dom));
  auto cf = GpdFunctor::unchecked(path, g, std::move(cod));
  GpdPullback sq = product(g, g);
  GpdFunctor ends = pairing(sq, df, cf);
  return {path, sq, ends, df, cf, GpdFunctor::unchecked(g, path, std::move(unit))};
}

Pi0Result pi0(const GpdPresheaf& g) {
  auto q = coequalize_eqrel(g.dom_map(), g.cod_map());
  GpdPresheaf d = discrete(q.quotient);
  std::vector<StageFunctor> st;
  for (int p = 0; p < g.cat().num_objects(); ++p) {
    const auto& s = g.stage(p);
    StageFunctor f;
    f.obj = q.projection.component(p);
    for (int a = 0; a < s.num_arrows(); ++a) f.arr.push_back(f.obj[idx(s.dom(a))]);
    st.push_back(std::move(f));
  }
  return {q.quotient, GpdFunctor::unchecked(g, d, std::move(st))};
}

}  // namespace e2t
