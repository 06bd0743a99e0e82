#include <algorithm>

#include "e2t/groupoid.hpp"
#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;

WeakEquivalenceReport is_weak_equivalence(const GpdFunctor& f) {
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = f.target();
  for (int p = 0; p < a.cat().num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    auto comps = sb.components();
    std::vector<char> hit(idx(sb.num_objects()), 0);
    for (int x = 0; x < sa.num_objects(); ++x) hit[idx(comps[idx(f.obj(p, x))])] = 1;
    for (int y = 0; y < sb.num_objects(); ++y)
      if (!hit[idx(comps[idx(y)])]) return {false, p, "not essentially surjective"};
    for (int x = 0; x < sa.num_objects(); ++x)
      for (int x2 = 0; x2 < sa.num_objects(); ++x2) {
        auto h = sa.hom(x, x2);
        std::vector<int> images;
        for (int u : h) images.push_back(f.arr(p, u));
        std::sort(images.begin(), images.end());
        if (std::adjacent_find(images.begin(), images.end()) != images.end()) return {false, p, "not faithful"};
        if (images.size() != sb.hom(f.obj(p, x), f.obj(p, x2)).size()) return {false, p, "not full"};
      }
  }
  return {};
}

bool is_discrete_fibration(const GpdFunctor& f) {
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = f.target();
  for (int p = 0; p < a.cat().num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    for (int x = 0; x < sa.num_objects(); ++x) {
      auto out_a = sa.out(x);
      auto out_b = sb.out(f.obj(p, x));
      if (out_a.size() != out_b.size()) return false;
      std::vector<int> images;
      for (int u : out_a) images.push_back(f.arr(p, u));
      std::sort(images.begin(), images.end());
      if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- quasi-inverses

bool check_quasi_inverse(const GpdFunctor& f, const QuasiInverse& q) {
  try {
    q.inverse.validate();
    if (!(q.inverse.source() == f.target()) || !(q.inverse.target() == f.source())) return false;
    if (!(q.unit.source() == identity(f.source())) || !(q.unit.target() == compose(q.inverse, f))) return false;
    if (!(q.counit.source() == compose(f, q.inverse)) || !(q.counit.target() == identity(f.target()))) return false;
    q.unit.validate();
    q.counit.validate();
  } catch (const InvariantViolation&) {
    return false;
  }
  return true;
}

namespace {

/// The unique u: x -> y of `s` with f(u) = w, or -1.
int preimage(const GpdFunctor& f, int p, int x, int y, int w) {
  for (int u : f.source().stage(p).hom(x, y))
    if (f.arr(p, u) == w) return u;
  return -1;
}

}  // namespace

std::optional<QuasiInverse> find_quasi_inverse(const GpdFunctor& f, SearchLimits limits) {
  if (!is_weak_equivalence(f).holds) return std::nullopt;
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = f.target();
  const FinCategory& c = a.cat();
  // Choices (x, phi: f x -> y) projected to y.
  PullbackResult e = pullback(f.on_objects(), b.dom_map());
  NatTransf to_y = compose(b.cod_map(), e.right);
  auto [status, section] = find_section(to_y, limits);
  if (status == SearchStatus::Exhausted) throw SearchExhausted(limits.node_cap);
  if (!section) return std::nullopt;
  std::vector<StageFunctor> g(idx(c.num_objects()));
  std::vector<std::vector<int>> eps(idx(c.num_objects())), eta(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    auto& gp = g[idx(p)];
    for (int y = 0; y < sb.num_objects(); ++y) {
      int el = (*section)(p, y);
      gp.obj.push_back(e.left(p, el));
      eps[idx(p)].push_back(e.right(p, el));
    }
    for (int v = 0; v < sb.num_arrows(); ++v) {
      int y = sb.dom(v), y2 = sb.cod(v);
      int w = sb.compose(sb.inverse(eps[idx(p)][idx(y2)]), sb.compose(v, eps[idx(p)][idx(y)]));
      gp.arr.push_back(preimage(f, p, gp.obj[idx(y)], gp.obj[idx(y2)], w));
    }
    for (int x = 0; x < sa.num_objects(); ++x) {
      int fx = f.obj(p, x);
      eta[idx(p)].push_back(preimage(f, p, x, gp.obj[idx(fx)], sb.inverse(eps[idx(p)][idx(fx)])));
    }
  }
  GpdFunctor inv(b, a, std::move(g), "quasi-inverse");
  TwoCell unit(identity(a), compose(inv, f), std::move(eta), "quasi-inverse unit");
  TwoCell counit(compose(f, inv), identity(b), std::move(eps), "quasi-inverse counit");
  return QuasiInverse{inv, unit, counit};
}

// ---------------------------------------------------------------- cleavages

namespace {

PullbackResult lifting_problems(const GpdFunctor& p) {
  return pullback(p.on_objects(), p.target().dom_map());
}

/// chi |-> (dom chi, p chi).
NatTransf problem_of(const GpdFunctor& p, const PullbackResult& problems) {
  return into_pullback(problems, p.source().dom_map(), p.on_arrows());
}

}  // namespace

bool CleavageWitness::check() const {
  try {
    choice.validate("cleavage");
  } catch (const InvariantViolation&) {
    return false;
  }
  const GpdPresheaf& x = p.source();
  const GpdPresheaf& g = p.target();
  bool is_normal = true;
  for (int s = 0; s < x.cat().num_objects(); ++s)
    for (int e = 0; e < problems.apex.size(s); ++e) {
      int obj = problems.left(s, e), phi = problems.right(s, e);
      int chi = choice(s, e);
      if (x.stage(s).dom(chi) != obj || p.arr(s, chi) != phi) return false;
      if (g.stage(s).is_identity(phi) && chi != obj) is_normal = false;
    }
  return !normal || is_normal;
}

IsofibrationResult is_isofibration(const GpdFunctor& p, SearchLimits limits) {
  IsofibrationResult r;
  PullbackResult problems = lifting_problems(p);
  NatTransf q = problem_of(p, problems);
  const GpdPresheaf& x = p.source();
  const GpdPresheaf& g = p.target();
  const FinCategory& c = x.cat();
  for (int s = 0; s < c.num_objects(); ++s) {
    std::vector<char> hit(idx(problems.apex.size(s)), 0);
    for (int chi = 0; chi < x.stage(s).num_arrows(); ++chi) hit[idx(q(s, chi))] = 1;
    for (int e = 0; e < problems.apex.size(s); ++e)
      if (!hit[idx(e)]) {
        r.status = CleavageStatus::NotIsofibration;
        r.failure = std::make_tuple(s, problems.left(s, e), problems.right(s, e));
        return r;
      }
  }
  auto normal = [&](int s, int e, int chi) {
    if (q(s, chi) != e) return false;
    return !g.stage(s).is_identity(problems.right(s, e)) || chi == problems.left(s, e);
  };
  auto found = find_constrained_map(problems.apex, x.arrows(), normal, limits).second;
  if (found) {
    r.status = CleavageStatus::Cloven;
    r.witness = CleavageWitness{p, problems, *found, true};
    return r;
  }
  // Exhausted searches and the absence of any natural choice both leave the
  // question open.
  auto any = find_section(q, limits).second;
  if (any) {
    r.status = CleavageStatus::Cloven;
    r.witness = CleavageWitness{p, problems, *any, false};
    return r;
  }
  r.status = CleavageStatus::Inconclusive;
  return r;
}

CleavageWitness make_cleavage(const GpdFunctor& p, const std::function<int(int, int, int)>& lift) {
  PullbackResult problems = lifting_problems(p);
  NatTransf::Components comp(idx(problems.apex.cat().num_objects()));
  bool normal = true;
  for (int s = 0; s < problems.apex.cat().num_objects(); ++s)
    for (int e = 0; e < problems.apex.size(s); ++e) {
      int x = problems.left(s, e), phi = problems.right(s, e);
      int chi = lift(s, x, phi);
      comp[idx(s)].push_back(chi);
      if (p.target().stage(s).is_identity(phi) && chi != x) normal = false;
    }
  CleavageWitness w{p, problems, NatTransf(problems.apex, p.source().arrows(), std::move(comp)), normal};
  if (!w.check()) throw InvariantViolation("cleavage", "lifting", "chosen lift is not over the given iso");
  return w;
}

// ---------------------------------------------------------------- transport

TransportResult transport_along_2cell(const CleavageWitness& cl, const GpdFunctor& f, const GpdFunctor& g,
                                      const TwoCell& alpha) {
  if (!(alpha.source() == f) || !(alpha.target() == g))
    throw PreconditionError("transport_along_2cell: 2-cell is not f => g");
  const GpdFunctor& p = cl.p;
  const GpdPresheaf& x = p.source();
  const GpdPresheaf& gg = p.target();
  const FinCategory& c = x.cat();
  GpdPullback pf = strict_pullback(f, p);
  GpdPullback pg = strict_pullback(g, p);
  detail::PairIndex inf(pf), ing(pg);

  // Moves (a, x) of one pullback to (a, lift target) of the other along the
  // components `cell` (alpha or its inverse).
  auto mover = [&](const GpdPullback& from, const detail::PairIndex& to_index, const GpdPullback& to,
                   bool forward) {
    std::vector<StageFunctor> st;
    for (int s = 0; s < c.num_objects(); ++s) {
      const auto& sf = from.apex.stage(s);
      const auto& sx = x.stage(s);
      const auto& sg = gg.stage(s);
      auto cell = [&](int a) { return forward ? alpha(s, a) : sg.inverse(alpha(s, a)); };
      std::vector<int> chis;
      StageFunctor h;
      for (int o = 0; o < sf.num_objects(); ++o) {
        int a = from.left.obj(s, o), xo = from.right.obj(s, o);
        int chi = cl.lift(s, xo, cell(a));
        chis.push_back(chi);
        h.obj.push_back(to_index.object(s, a, sx.cod(chi)));
      }
      for (int m = 0; m < sf.num_arrows(); ++m) {
        int u = from.left.arr(s, m), psi = from.right.arr(s, m);
        int d = sf.dom(m), e = sf.cod(m);
        int moved = sx.compose(sx.compose(chis[idx(e)], psi), sx.inverse(chis[idx(d)]));
        h.arr.push_back(to_index.arrow(s, u, moved));
      }
      st.push_back(std::move(h));
    }
    return GpdFunctor(from.apex, to.apex, std::move(st), "transport");
  };
  GpdFunctor fwd = mover(pf, ing, pg, true);
  GpdFunctor back = mover(pg, inf, pf, false);

  // Round trips differ from the identity by the composite of the two lifts.
  auto round = [&](const GpdPullback& pb, const detail::PairIndex& index, bool forward_first, bool to_identity) {
    std::vector<std::vector<int>> comp;
    for (int s = 0; s < c.num_objects(); ++s) {
      const auto& sx = x.stage(s);
      const auto& sg = gg.stage(s);
      const auto& sp = pb.apex.stage(s);
      std::vector<int> row;
      for (int o = 0; o < sp.num_objects(); ++o) {
        int a = pb.left.obj(s, o), xo = pb.right.obj(s, o);
        int first = forward_first ? alpha(s, a) : sg.inverse(alpha(s, a));
        int chi = cl.lift(s, xo, first);
        int chi2 = cl.lift(s, sx.cod(chi), sg.inverse(first));
        int both = sx.compose(chi2, chi);
        int arrow = to_identity ? sx.inverse(both) : both;
        row.push_back(index.arrow(s, a, arrow));
      }
      comp.push_back(std::move(row));
    }
    return comp;
  };
  TwoCell unit(identity(pf.apex), compose(back, fwd), round(pf, inf, true, false), "transport unit");
  TwoCell counit(compose(fwd, back), identity(pg.apex), round(pg, ing, false, true), "transport counit");
  return {pf, pg, fwd, QuasiInverse{back, unit, counit}};
}

// ---------------------------------------------------------------- discrete targets

DiscreteTargetReport discrete_target_check(const GpdFunctor& f, SearchLimits limits) {
  if (!f.target().is_discrete()) throw TargetNotDiscrete("discrete_target_check: target has non-identity arrows");
  DiscreteTargetReport r;
  const GpdPresheaf& g = f.source();
  NatTransf f0 = f.on_objects();
  bool weak = f0.is_epi();
  for (int p = 0; p < g.cat().num_objects() && weak; ++p) {
    const auto& s = g.stage(p);
    for (int x = 0; x < s.num_objects() && weak; ++x)
      for (int y = 0; y < s.num_objects() && weak; ++y)
        weak = s.hom(x, y).size() == (f0(p, x) == f0(p, y) ? 1u : 0u);
  }
  r.weak = weak;
  if (!weak) return r;
  Pi0Result comps = pi0(g);
  NatTransf::Components c(idx(g.cat().num_objects()));
  for (int p = 0; p < g.cat().num_objects(); ++p) {
    c[idx(p)].assign(idx(comps.components.size(p)), 0);
    for (int x = 0; x < g.stage(p).num_objects(); ++x) c[idx(p)][idx(comps.quotient.obj(p, x))] = f0(p, x);
  }
  r.pi0_iso = NatTransf(comps.components, f0.target(), std::move(c));
  auto [status, section] = find_section(f0, limits);
  if (status == SearchStatus::Exhausted) throw SearchExhausted(limits.node_cap);
  r.strong = section.has_value();
  r.section = section;
  return r;
}

}  // namespace e2t
