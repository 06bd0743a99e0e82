#include "e2t/modelcat.hpp"

#include <memory>

#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;
using detail::Key;

bool is_cofibration(const GpdFunctor& f) {
  for (int p = 0; p < f.source().cat().num_objects(); ++p) {
    std::vector<char> hit(idx(f.target().stage(p).num_objects()), 0);
    for (int y : f.stage(p).obj) {
      if (hit[idx(y)]) return false;
      hit[idx(y)] = 1;
    }
  }
  return true;
}

bool is_objectwise_trivial_fibration(const GpdFunctor& q) {
  for (int p = 0; p < q.source().cat().num_objects(); ++p) {
    const auto& se = q.source().stage(p);
    const auto& sg = q.target().stage(p);
    std::vector<char> hit(idx(sg.num_objects()), 0);
    for (int y : q.stage(p).obj) hit[idx(y)] = 1;
    for (char h : hit)
      if (!h) return false;
    for (int a = 0; a < se.num_objects(); ++a)
      for (int b = 0; b < se.num_objects(); ++b) {
        auto from = se.hom(a, b);
        auto to = sg.hom(q.obj(p, a), q.obj(p, b));
        if (from.size() != to.size()) return false;
        std::vector<char> seen(idx(sg.num_arrows()), 0);
        for (int u : from) {
          if (seen[idx(q.arr(p, u))]) return false;
          seen[idx(q.arr(p, u))] = 1;
        }
      }
  }
  return true;
}

bool TrivFibWitness::check() const {
  if (!(q.source() == s.target()) || !(q.target() == s.source())) return false;
  if (!(compose(q, s) == identity(q.target()))) return false;
  if (!(eps.source() == compose(s, q)) || !(eps.target() == identity(q.source()))) return false;
  try {
    q.validate("trivial fibration");
    s.validate("trivial fibration section");
    eps.validate("trivial fibration 2-cell");
  } catch (const InvariantViolation&) {
    return false;
  }
  for (int p = 0; p < q.source().cat().num_objects(); ++p)
    for (int x = 0; x < q.source().stage(p).num_objects(); ++x)
      if (!q.target().stage(p).is_identity(q.arr(p, eps(p, x)))) return false;
  return is_objectwise_trivial_fibration(q);
}

// ---------------------------------------------------------------- factorizations

namespace {

int find_out(const FinGroupoid& s, int from, const std::function<bool(int)>& pred) {
  for (int a : s.out(from))
    if (pred(a)) return a;
  return -1;
}

}  // namespace

FactorizationResult factor_trivcof_fib(const GpdFunctor& f) {
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& g = f.target();
  const FinCategory& c = a.cat();
  PseudoPullback e = pseudo_pullback(f, identity(g));
  const GpdPresheaf& m = e.apex;
  std::vector<StageFunctor> js;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sm = m.stage(p);
    StageFunctor j;
    j.obj.assign(idx(a.stage(p).num_objects()), -1);
    for (int o = 0; o < sm.num_objects(); ++o)
      if (g.stage(p).is_identity(e.cell(p, o))) j.obj[idx(e.left.obj(p, o))] = o;
    for (int u = 0; u < a.stage(p).num_arrows(); ++u)
      j.arr.push_back(find_out(sm, j.obj[idx(a.stage(p).dom(u))], [&](int w) {
        return e.left.arr(p, w) == u && e.right.arr(p, w) == f.arr(p, u);
      }));
    js.push_back(std::move(j));
  }
  GpdFunctor j(a, m, std::move(js), "trivial cofibration");
  std::vector<std::vector<int>> back(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sm = m.stage(p);
    for (int o = 0; o < sm.num_objects(); ++o) {
      int x = e.left.obj(p, o);
      back[idx(p)].push_back(find_out(sm, j.obj(p, x), [&](int w) {
        return sm.cod(w) == o && e.left.arr(p, w) == x && e.right.arr(p, w) == e.cell(p, o);
      }));
    }
  }
  QuasiInverse retract{e.left, identity_cell(identity(a)),
                       TwoCell(compose(j, e.left), identity(m), std::move(back), "deformation retraction")};
  CleavageWitness cl = make_cleavage(e.right, [&](int p, int o, int psi) {
    const auto& sm = m.stage(p);
    return find_out(sm, o, [&](int w) { return e.left.arr(p, w) == e.left.obj(p, o) && e.right.arr(p, w) == psi; });
  });
  return FactorizationResult{m, j, e.right, retract, cl, std::nullopt};
}

FactorizationResult factor_cof_trivfib(const GpdFunctor& f) {
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& g = f.target();
  const FinCategory& c = a.cat();
  // Object keys {0, x} for x in F0 and {1, y} for y in G0; arrow keys
  // {side, x, side', x', arrow of G}.
  auto q_obj = [&](int p, const Key& k) { return k[0] == 0 ? f.obj(p, k[1]) : k[1]; };
  std::vector<detail::StageAssembler> st(idx(c.num_objects()));
  std::vector<FinGroupoid> stages;
  for (int p = 0; p < c.num_objects(); ++p) {
    auto& s = st[idx(p)];
    const auto& sg = g.stage(p);
    for (int x = 0; x < a.stage(p).num_objects(); ++x) s.add_object({0, x}, "l_" + a.stage(p).object_name(x));
    for (int y = 0; y < sg.num_objects(); ++y) s.add_object({1, y}, "r_" + sg.object_name(y));
    const int n = s.num_objects();
    for (int o = 0; o < n; ++o) {
      const Key k = s.object_key(o);
      int y = q_obj(p, k);
      s.add_arrow(o, o, {k[0], k[1], k[0], k[1], y});
    }
    for (int o1 = 0; o1 < n; ++o1)
      for (int o2 = 0; o2 < n; ++o2) {
        const Key k1 = s.object_key(o1), k2 = s.object_key(o2);
        for (int v : sg.hom(q_obj(p, k1), q_obj(p, k2)))
          if (o1 != o2 || !sg.is_identity(v)) s.add_arrow(o1, o2, {k1[0], k1[1], k2[0], k2[1], v});
      }
    stages.push_back(s.build(
        [&](const Key& k2, const Key& k1) { return Key{k1[0], k1[1], k2[2], k2[3], sg.compose(k2[4], k1[4])}; },
        [&](const Key& k) { return Key{k[2], k[3], k[0], k[1], sg.inverse(k[4])}; }));
  }
  auto restrict_obj = [&](int h, int side, int x) { return side == 0 ? a.act_obj(h, x) : g.act_obj(h, x); };
  auto act = detail::restrictions(
      c, st, [&](int h, const Key& k) { return Key{k[0], restrict_obj(h, k[0], k[1])}; },
      [&](int h, const Key& k) {
        return Key{k[0], restrict_obj(h, k[0], k[1]), k[2], restrict_obj(h, k[2], k[3]), g.act_arr(h, k[4])};
      });
  GpdPresheaf m = GpdPresheaf::unchecked(a.base(), std::move(stages), std::move(act));
  std::vector<StageFunctor> is, qs, ss;
  std::vector<std::vector<int>> eps(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& s = st[idx(p)];
    const auto& sa = a.stage(p);
    const auto& sg = g.stage(p);
    StageFunctor i, q, sec;
    for (int x = 0; x < sa.num_objects(); ++x) i.obj.push_back(s.find_object({0, x}));
    for (int u = 0; u < sa.num_arrows(); ++u)
      i.arr.push_back(s.find_arrow({0, sa.dom(u), 0, sa.cod(u), f.arr(p, u)}));
    for (int o = 0; o < s.num_objects(); ++o) q.obj.push_back(q_obj(p, s.object_key(o)));
    for (int w = 0; w < s.num_arrows(); ++w) q.arr.push_back(s.arrow_key(w)[4]);
    for (int y = 0; y < sg.num_objects(); ++y) sec.obj.push_back(s.find_object({1, y}));
    for (int v = 0; v < sg.num_arrows(); ++v) sec.arr.push_back(s.find_arrow({1, sg.dom(v), 1, sg.cod(v), v}));
    for (int o = 0; o < s.num_objects(); ++o) {
      const Key& k = s.object_key(o);
      int y = q_obj(p, k);
      eps[idx(p)].push_back(s.find_arrow({1, y, k[0], k[1], y}));
    }
    is.push_back(std::move(i));
    qs.push_back(std::move(q));
    ss.push_back(std::move(sec));
  }
  GpdFunctor left(a, m, std::move(is), "cofibration");
  GpdFunctor q(m, g, std::move(qs), "trivial fibration");
  GpdFunctor sec(g, m, std::move(ss), "trivial fibration section");
  TwoCell e(compose(sec, q), identity(m), std::move(eps), "trivial fibration 2-cell");
  return FactorizationResult{m, left, q, std::nullopt, std::nullopt, TrivFibWitness{q, sec, e}};
}

// ---------------------------------------------------------------- lifting

bool LiftingSquare::commutes() const {
  if (!(left.target() == bottom.source()) || !(right.source() == top.target()) ||
      !(left.source() == top.source()) || !(right.target() == bottom.target()))
    return false;
  return compose(right, top) == compose(bottom, left);
}

namespace {

void check_square(const LiftingSquare& sq) {
  if (!sq.commutes()) throw SquareDoesNotCommute("lift: square does not commute");
}

/// For each stage and each object (arrow) of the cofibration's target, the
/// objects (arrows) of its source mapping there.
struct Preimages {
  std::vector<std::vector<std::vector<int>>> obj;
  std::vector<std::vector<std::vector<int>>> arr;
  explicit Preimages(const GpdFunctor& i) {
    const int n = i.source().cat().num_objects();
    obj.resize(idx(n));
    arr.resize(idx(n));
    for (int p = 0; p < n; ++p) {
      obj[idx(p)].resize(idx(i.target().stage(p).num_objects()));
      arr[idx(p)].resize(idx(i.target().stage(p).num_arrows()));
      for (int x = 0; x < i.source().stage(p).num_objects(); ++x) obj[idx(p)][idx(i.obj(p, x))].push_back(x);
      for (int u = 0; u < i.source().stage(p).num_arrows(); ++u) arr[idx(p)][idx(i.arr(p, u))].push_back(u);
    }
  }
};

}  // namespace

GpdFunctor lift(const LiftingSquare& sq, const TrivFibWitness& w, SearchLimits limits) {
  if (!is_cofibration(sq.left)) throw NotACofibration("lift: left map is not injective on objects");
  check_square(sq);
  if (!(sq.right == w.q)) throw PreconditionError("lift: witness is for a different map");
  const GpdPresheaf& b = sq.left.target();
  const GpdPresheaf& e = w.q.source();
  const FinCategory& c = b.cat();
  Preimages pre(sq.left);
  NatTransf::Components d0(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p)
    for (int y = 0; y < b.stage(p).num_objects(); ++y) {
      const auto& xs = pre.obj[idx(p)][idx(y)];
      d0[idx(p)].push_back(xs.empty() ? w.s.obj(p, sq.bottom.obj(p, y)) : sq.top.obj(p, xs[0]));
    }
  bool natural = true;
  for (int h = 0; h < c.num_arrows() && natural; ++h)
    for (int y = 0; y < b.stage(c.cod(h)).num_objects(); ++y)
      if (d0[idx(c.dom(h))][idx(b.act_obj(h, y))] != e.act_obj(h, d0[idx(c.cod(h))][idx(y)])) {
        natural = false;
        break;
      }
  if (!natural) {
    auto [status, found] = find_constrained_map(
        b.objects(), e.objects(),
        [&](int p, int y, int v) {
          const auto& xs = pre.obj[idx(p)][idx(y)];
          return xs.empty() ? w.q.obj(p, v) == sq.bottom.obj(p, y) : v == sq.top.obj(p, xs[0]);
        },
        limits);
    if (status == SearchStatus::Exhausted) throw SearchExhausted(limits.node_cap);
    if (!found) throw LiftUnavailable("lift: no natural choice of objects over the bottom map");
    d0 = found->components();
  }
  std::vector<StageFunctor> st;
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sb = b.stage(p);
    const auto& se = e.stage(p);
    StageFunctor d;
    d.obj = d0[idx(p)];
    for (int v = 0; v < sb.num_arrows(); ++v) {
      int found = -1;
      for (int u : se.hom(d.obj[idx(sb.dom(v))], d.obj[idx(sb.cod(v))]))
        if (w.q.arr(p, u) == sq.bottom.arr(p, v)) {
          found = u;
          break;
        }
      if (found < 0) throw PreconditionError("lift: trivial fibration is not full");
      d.arr.push_back(found);
    }
    st.push_back(std::move(d));
  }
  GpdFunctor d(b, e, std::move(st), "lift");
  if (!(compose(d, sq.left) == sq.top) || !(compose(w.q, d) == sq.bottom))
    throw InvariantViolation("lift", "lifting triangles", "diagonal does not commute");
  return d;
}

QuasiInverse quasi_inverse_from_trivfib(const TrivFibWitness& w) {
  if (!w.check()) throw PreconditionError("quasi_inverse_from_trivfib: invalid witness");
  return QuasiInverse{w.s, inverse(w.eps), identity_cell(identity(w.q.target()))};
}

namespace {

/// Functor search restricted to diagonals of the square.
FunctorSearchOptions diagonal_options(const LiftingSquare& sq, SearchLimits limits) {
  auto pre = std::make_shared<Preimages>(sq.left);
  FunctorSearchOptions o;
  o.allowed_obj = [&sq, pre](int p, int y, int v) {
    if (sq.right.obj(p, v) != sq.bottom.obj(p, y)) return false;
    for (int x : pre->obj[idx(p)][idx(y)])
      if (sq.top.obj(p, x) != v) return false;
    return true;
  };
  o.allowed_arr = [&sq, pre](int p, int u, int v) {
    if (sq.right.arr(p, v) != sq.bottom.arr(p, u)) return false;
    for (int x : pre->arr[idx(p)][idx(u)])
      if (sq.top.arr(p, x) != v) return false;
    return true;
  };
  o.limits = limits;
  return o;
}

}  // namespace

DiagonalCount count_diagonals(const LiftingSquare& sq, SearchLimits limits) {
  check_square(sq);
  DiagonalCount r;
  SearchStatus s = search_functors(sq.left.target(), sq.right.source(), diagonal_options(sq, limits),
                                   [&](const GpdFunctor&) {
                                     ++r.count;
                                     return true;
                                   });
  r.exhausted = s == SearchStatus::Exhausted;
  return r;
}

bool has_rlp(const LiftingSquare& sq, SearchLimits limits) {
  check_square(sq);
  SearchStatus s = search_functors(sq.left.target(), sq.right.source(), diagonal_options(sq, limits),
                                   [](const GpdFunctor&) { return false; });
  if (s == SearchStatus::Exhausted) throw SearchExhausted(limits.node_cap);
  return s == SearchStatus::Found;
}

// ---------------------------------------------------------------- 0-types

bool is_equivalence_relation_gpd(const GpdPresheaf& g) {
  Presheaf g0 = g.objects();
  return pairing(product(g0, g0), g.dom_map(), g.cod_map()).is_mono();
}

ZeroTypeReport is_0type(const GpdPresheaf& g) {
  PathGroupoid pg = path_groupoid(g);
  GpdPullback h = strict_pullback(pg.endpoints, pg.endpoints);
  GpdFunctor comparison = into_pullback(h, pg.unit, pg.unit);
  WeakEquivalenceReport weak = is_weak_equivalence(comparison);
  return ZeroTypeReport{weak.holds, pg, h, comparison, weak};
}

}  // namespace e2t
