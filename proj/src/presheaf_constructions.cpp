#include <algorithm>
#include <numeric>

#include "e2t/presheaf.hpp"

namespace e2t {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require_same_base(const Presheaf& a, const Presheaf& b, const char* op) {
  if (!(a.cat() == b.cat())) throw PreconditionError(std::string(op) + ": presheaves over different bases");
}

}  // namespace

int hom_position(const FinCategory& c, int arrow) {
  auto h = c.hom(c.dom(arrow), c.cod(arrow));
  return static_cast<int>(std::find(h.begin(), h.end(), arrow) - h.begin());
}

Presheaf yoneda(const CategoryRef& base, int obj) {
  const FinCategory& c = *base;
  std::vector<int> sizes(idx(c.num_objects()));
  std::vector<std::vector<std::string>> labels(idx(c.num_objects()));
  for (int q = 0; q < c.num_objects(); ++q) {
    auto h = c.hom(q, obj);
    sizes[idx(q)] = static_cast<int>(h.size());
    for (int a : h) labels[idx(q)].push_back(c.arrow(a).name);
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    auto src = c.hom(c.cod(h), obj);
    for (int k : src) act[idx(h)].push_back(hom_position(c, c.compose(k, h)));
  }
  return Presheaf::unchecked(base, std::move(sizes), std::move(act), std::move(labels));
}

Presheaf terminal(const CategoryRef& base) {
  const FinCategory& c = *base;
  return Presheaf::unchecked(base, std::vector<int>(idx(c.num_objects()), 1),
                             Presheaf::Table(idx(c.num_arrows()), std::vector<int>{0}),
                             std::vector<std::vector<std::string>>(idx(c.num_objects()), {"pt"}));
}

Presheaf initial(const CategoryRef& base) {
  const FinCategory& c = *base;
  return Presheaf::unchecked(base, std::vector<int>(idx(c.num_objects()), 0),
                             Presheaf::Table(idx(c.num_arrows())));
}

NatTransf identity(const Presheaf& x) {
  NatTransf::Components comp(idx(x.cat().num_objects()));
  for (int o = 0; o < x.cat().num_objects(); ++o) {
    comp[idx(o)].resize(idx(x.size(o)));
    std::iota(comp[idx(o)].begin(), comp[idx(o)].end(), 0);
  }
  return NatTransf::unchecked(x, x, std::move(comp));
}

NatTransf compose(const NatTransf& g, const NatTransf& f) {
  if (!(f.target() == g.source())) throw PreconditionError("compose: maps not composable");
  NatTransf::Components comp(f.components().size());
  for (std::size_t o = 0; o < comp.size(); ++o)
    for (int v : f.components()[o]) comp[o].push_back(g.components()[o][idx(v)]);
  return NatTransf::unchecked(f.source(), g.target(), std::move(comp));
}

NatTransf element_to_map(const Presheaf& x, int obj, int elem) {
  if (elem < 0 || elem >= x.size(obj)) throw PreconditionError("element_to_map: element out of range");
  const FinCategory& c = x.cat();
  Presheaf yp = yoneda(x.base(), obj);
  NatTransf::Components comp(idx(c.num_objects()));
  for (int q = 0; q < c.num_objects(); ++q)
    for (int k : c.hom(q, obj)) comp[idx(q)].push_back(x.act(k, elem));
  return NatTransf::unchecked(yp, x, std::move(comp));
}

int map_to_element(const NatTransf& m, int obj) {
  return m(obj, hom_position(m.source().cat(), obj));
}

NatTransf to_terminal(const Presheaf& x) {
  NatTransf::Components comp(idx(x.cat().num_objects()));
  for (int o = 0; o < x.cat().num_objects(); ++o) comp[idx(o)].assign(idx(x.size(o)), 0);
  return NatTransf::unchecked(x, terminal(x.base()), std::move(comp));
}

NatTransf from_initial(const Presheaf& x) {
  return NatTransf::unchecked(initial(x.base()), x,
                              NatTransf::Components(idx(x.cat().num_objects())));
}

NatTransf yoneda_map(const CategoryRef& base, int arrow) {
  const FinCategory& c = *base;
  int q = c.dom(arrow), p = c.cod(arrow);
  NatTransf::Components comp(idx(c.num_objects()));
  for (int r = 0; r < c.num_objects(); ++r)
    for (int k : c.hom(r, q)) comp[idx(r)].push_back(hom_position(c, c.compose(arrow, k)));
  return NatTransf::unchecked(yoneda(base, q), yoneda(base, p), std::move(comp));
}

PullbackResult pullback(const NatTransf& f, const NatTransf& g) {
  if (!(f.target() == g.target())) throw PreconditionError("pullback: maps have different codomains");
  const Presheaf& a = f.source();
  const Presheaf& b = g.source();
  const FinCategory& c = a.cat();
  const int n = c.num_objects();
  std::vector<int> sizes(idx(n), 0);
  std::vector<std::vector<int>> index(idx(n));
  std::vector<std::vector<std::pair<int, int>>> elems(idx(n));
  std::vector<int> right_sizes(idx(n));
  for (int o = 0; o < n; ++o) {
    right_sizes[idx(o)] = b.size(o);
    index[idx(o)].assign(idx(a.size(o) * b.size(o)), -1);
    for (int x = 0; x < a.size(o); ++x)
      for (int y = 0; y < b.size(o); ++y)
        if (f(o, x) == g(o, y)) {
          index[idx(o)][idx(x * b.size(o) + y)] = sizes[idx(o)]++;
          elems[idx(o)].emplace_back(x, y);
        }
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    int p = c.cod(h), q = c.dom(h);
    for (auto [x, y] : elems[idx(p)])
      act[idx(h)].push_back(index[idx(q)][idx(a.act(h, x) * b.size(q) + b.act(h, y))]);
  }
  Presheaf apex = Presheaf::unchecked(a.base(), sizes, std::move(act));
  NatTransf::Components l(idx(n)), r(idx(n));
  for (int o = 0; o < n; ++o)
    for (auto [x, y] : elems[idx(o)]) {
      l[idx(o)].push_back(x);
      r[idx(o)].push_back(y);
    }
  return PullbackResult{apex, NatTransf::unchecked(apex, a, std::move(l)),
                        NatTransf::unchecked(apex, b, std::move(r)), std::move(index),
                        std::move(right_sizes)};
}

PullbackResult product(const Presheaf& a, const Presheaf& b) {
  require_same_base(a, b, "product");
  return pullback(to_terminal(a), to_terminal(b));
}

PullbackResult kernel_pair(const NatTransf& f) { return pullback(f, f); }

NatTransf into_pullback(const PullbackResult& pb, const NatTransf& f, const NatTransf& g) {
  const Presheaf& x = f.source();
  NatTransf::Components comp(idx(x.cat().num_objects()));
  for (int o = 0; o < x.cat().num_objects(); ++o)
    for (int e = 0; e < x.size(o); ++e) {
      int v = pb.lookup(o, f(o, e), g(o, e));
      if (v < 0) throw PreconditionError("into_pullback: cone does not commute");
      comp[idx(o)].push_back(v);
    }
  return NatTransf::unchecked(x, pb.apex, std::move(comp));
}

NatTransf pairing(const PullbackResult& prod, const NatTransf& f, const NatTransf& g) {
  return into_pullback(prod, f, g);
}

NatTransf diagonal(const Presheaf& x, const PullbackResult& prod) {
  NatTransf id = identity(x);
  return into_pullback(prod, id, id);
}

EqualizerResult equalizer(const NatTransf& f, const NatTransf& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw PreconditionError("equalizer: maps not parallel");
  const Presheaf& a = f.source();
  const FinCategory& c = a.cat();
  const int n = c.num_objects();
  std::vector<std::vector<int>> keep(idx(n)), pos(idx(n));
  std::vector<int> sizes(idx(n));
  for (int o = 0; o < n; ++o) {
    pos[idx(o)].assign(idx(a.size(o)), -1);
    for (int x = 0; x < a.size(o); ++x)
      if (f(o, x) == g(o, x)) {
        pos[idx(o)][idx(x)] = static_cast<int>(keep[idx(o)].size());
        keep[idx(o)].push_back(x);
      }
    sizes[idx(o)] = static_cast<int>(keep[idx(o)].size());
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h)
    for (int x : keep[idx(c.cod(h))]) act[idx(h)].push_back(pos[idx(c.dom(h))][idx(a.act(h, x))]);
  Presheaf e = Presheaf::unchecked(a.base(), sizes, std::move(act));
  return {e, NatTransf::unchecked(e, a, keep)};
}

CoproductResult coproduct(const Presheaf& a, const Presheaf& b) {
  require_same_base(a, b, "coproduct");
  const FinCategory& c = a.cat();
  const int n = c.num_objects();
  std::vector<int> sizes(idx(n));
  for (int o = 0; o < n; ++o) sizes[idx(o)] = a.size(o) + b.size(o);
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    int p = c.cod(h), q = c.dom(h);
    for (int x = 0; x < a.size(p); ++x) act[idx(h)].push_back(a.act(h, x));
    for (int y = 0; y < b.size(p); ++y) act[idx(h)].push_back(a.size(q) + b.act(h, y));
  }
  Presheaf s = Presheaf::unchecked(a.base(), sizes, std::move(act));
  NatTransf::Components l(idx(n)), r(idx(n));
  for (int o = 0; o < n; ++o) {
    l[idx(o)].resize(idx(a.size(o)));
    std::iota(l[idx(o)].begin(), l[idx(o)].end(), 0);
    r[idx(o)].resize(idx(b.size(o)));
    std::iota(r[idx(o)].begin(), r[idx(o)].end(), a.size(o));
  }
  return {s, NatTransf::unchecked(a, s, std::move(l)), NatTransf::unchecked(b, s, std::move(r))};
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(idx(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[idx(std::max(a, b))] = std::min(a, b);
  }
};

// Relation matrix at one stage.
std::vector<char> relation_at(const NatTransf& r1, const NatTransf& r2, int o) {
  int n = r1.target().size(o);
  std::vector<char> rel(idx(n * n), 0);
  for (int k = 0; k < r1.source().size(o); ++k) rel[idx(r1(o, k) * n + r2(o, k))] = 1;
  return rel;
}

std::optional<std::string> eqrel_failure(const NatTransf& r1, const NatTransf& r2) {
  const FinCategory& c = r1.source().cat();
  for (int o = 0; o < c.num_objects(); ++o) {
    int n = r1.target().size(o);
    auto rel = relation_at(r1, r2, o);
    auto at = [&](int a, int b) { return rel[idx(a * n + b)] != 0; };
    for (int a = 0; a < n; ++a) {
      if (!at(a, a)) return "reflexivity fails at " + c.object_name(o);
      for (int b = 0; b < n; ++b) {
        if (at(a, b) && !at(b, a)) return "symmetry fails at " + c.object_name(o);
        if (!at(a, b)) continue;
        for (int d = 0; d < n; ++d)
          if (at(b, d) && !at(a, d)) return "transitivity fails at " + c.object_name(o);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_equivalence_relation(const NatTransf& r1, const NatTransf& r2) {
  return !eqrel_failure(r1, r2).has_value();
}

QuotientResult coequalize_eqrel(const NatTransf& r1, const NatTransf& r2) {
  if (!(r1.source() == r2.source()) || !(r1.target() == r2.target()))
    throw PreconditionError("coequalize_eqrel: maps not parallel");
  if (auto why = eqrel_failure(r1, r2)) throw NotEquivalenceRelation(*why);
  const Presheaf& a = r1.target();
  const FinCategory& c = a.cat();
  const int n = c.num_objects();
  std::vector<int> sizes(idx(n));
  NatTransf::Components proj(idx(n));
  std::vector<std::vector<int>> rep(idx(n));
  for (int o = 0; o < n; ++o) {
    Dsu d(a.size(o));
    for (int k = 0; k < r1.source().size(o); ++k) d.unite(r1(o, k), r2(o, k));
    std::vector<int> cls(idx(a.size(o)), -1);
    for (int x = 0; x < a.size(o); ++x) {
      int root = d.find(x);
      if (cls[idx(root)] == -1) {
        cls[idx(root)] = sizes[idx(o)]++;
        rep[idx(o)].push_back(x);
      }
      proj[idx(o)].push_back(cls[idx(root)]);
    }
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h)
    for (int x : rep[idx(c.cod(h))]) act[idx(h)].push_back(proj[idx(c.dom(h))][idx(a.act(h, x))]);
  Presheaf q = Presheaf::unchecked(a.base(), sizes, std::move(act));
  return {q, NatTransf::unchecked(a, q, std::move(proj))};
}

ImageResult image(const NatTransf& f) {
  const Presheaf& b = f.target();
  const FinCategory& c = b.cat();
  const int n = c.num_objects();
  std::vector<std::vector<int>> keep(idx(n)), pos(idx(n));
  std::vector<int> sizes(idx(n));
  for (int o = 0; o < n; ++o) {
    std::vector<char> hit(idx(b.size(o)), 0);
    for (int v : f.component(o)) hit[idx(v)] = 1;
    pos[idx(o)].assign(idx(b.size(o)), -1);
    for (int y = 0; y < b.size(o); ++y)
      if (hit[idx(y)]) {
        pos[idx(o)][idx(y)] = static_cast<int>(keep[idx(o)].size());
        keep[idx(o)].push_back(y);
      }
    sizes[idx(o)] = static_cast<int>(keep[idx(o)].size());
  }
  Presheaf::Table act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h)
    for (int y : keep[idx(c.cod(h))]) act[idx(h)].push_back(pos[idx(c.dom(h))][idx(b.act(h, y))]);
  Presheaf im = Presheaf::unchecked(b.base(), sizes, std::move(act));
  NatTransf::Components e(idx(n));
  for (int o = 0; o < n; ++o)
    for (int v : f.component(o)) e[idx(o)].push_back(pos[idx(o)][idx(v)]);
  return {im, NatTransf::unchecked(f.source(), im, std::move(e)), NatTransf::unchecked(im, b, keep)};
}

}  // namespace e2t
