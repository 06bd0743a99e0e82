#include "e2t/groupoid.hpp"

#include <algorithm>
#include <numeric>

namespace e2t {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void fail(const std::string& block, const std::string& law, const std::string& what) {
  throw InvariantViolation(block, law, what);
}

}  // namespace

// ---------------------------------------------------------------- FinGroupoid

FinGroupoid FinGroupoid::make(std::vector<std::string> objects, std::vector<Arrow> arrows,
                              const std::function<int(int, int)>& compose, std::vector<int> inverse) {
  auto d = std::make_shared<Data>();
  const int n = static_cast<int>(objects.size());
  const int m = static_cast<int>(arrows.size());
  d->objects = std::move(objects);
  d->arrows = std::move(arrows);
  d->inv = std::move(inverse);
  d->out.assign(idx(n), {});
  for (int a = 0; a < m; ++a) {
    int x = d->arrows[idx(a)].dom;
    if (x >= 0 && x < n) d->out[idx(x)].push_back(a);
  }
  d->pos_in_out.assign(idx(m), -1);
  d->hom_begin.assign(idx(n), std::vector<int>(idx(n) + 1, 0));
  for (int x = 0; x < n; ++x) {
    auto& o = d->out[idx(x)];
    std::stable_sort(o.begin(), o.end(),
                     [&](int a, int b) { return d->arrows[idx(a)].cod < d->arrows[idx(b)].cod; });
    for (std::size_t i = 0; i < o.size(); ++i) d->pos_in_out[idx(o[i])] = static_cast<int>(i);
    auto& hb = d->hom_begin[idx(x)];
    std::size_t i = 0;
    for (int y = 0; y <= n; ++y) {
      while (i < o.size() && d->arrows[idx(o[i])].cod < y) ++i;
      hb[idx(y)] = static_cast<int>(i);
    }
  }
  d->comp.assign(idx(m), {});
  for (int f = 0; f < m; ++f) {
    int y = d->arrows[idx(f)].cod;
    if (y < 0 || y >= n) continue;
    const auto& o = d->out[idx(y)];
    auto& row = d->comp[idx(f)];
    row.reserve(o.size());
    for (int g : o) row.push_back(compose(g, f));
  }
  return FinGroupoid(std::move(d));
}

FinGroupoid FinGroupoid::checked(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                 const std::function<int(int, int)>& compose, std::vector<int> inverse,
                                 const std::string& block) {
  const int n = static_cast<int>(objects.size());
  const int m = static_cast<int>(arrows.size());
  for (int a = 0; a < m; ++a) {
    const auto& ar = arrows[idx(a)];
    if (ar.dom < 0 || ar.dom >= n || ar.cod < 0 || ar.cod >= n)
      fail(block, "typing", "arrow " + ar.name + " has an unknown endpoint");
  }
  std::vector<std::string> names;
  for (const auto& ar : arrows) names.push_back(ar.name);
  auto guarded = [&, names](int g, int f) {
    int h = compose(g, f);
    if (h < 0 || h >= m) fail(block, "totality", "no composite " + names[idx(g)] + " . " + names[idx(f)]);
    return h;
  };
  if (static_cast<int>(inverse.size()) != m) fail(block, "groupoid axioms", "inverse table has the wrong size");
  FinGroupoid g = make(std::move(objects), std::move(arrows), guarded, std::move(inverse));
  g.validate(block);
  return g;
}

FinGroupoid FinGroupoid::discrete(std::vector<std::string> objects) {
  std::vector<Arrow> arrows;
  for (std::size_t x = 0; x < objects.size(); ++x)
    arrows.push_back({"id_" + objects[x], static_cast<int>(x), static_cast<int>(x)});
  std::vector<int> inv(arrows.size());
  std::iota(inv.begin(), inv.end(), 0);
  return make(std::move(objects), std::move(arrows), [](int g, int) { return g; }, std::move(inv));
}

std::span<const int> FinGroupoid::hom(int x, int y) const {
  const auto& o = d_->out[idx(x)];
  const auto& hb = d_->hom_begin[idx(x)];
  return std::span<const int>(o.data() + hb[idx(y)], o.data() + hb[idx(y) + 1]);
}

std::optional<int> FinGroupoid::object_index(const std::string& name) const {
  for (int x = 0; x < num_objects(); ++x)
    if (d_->objects[idx(x)] == name) return x;
  return std::nullopt;
}

std::optional<int> FinGroupoid::arrow_index(const std::string& name) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (d_->arrows[idx(a)].name == name) return a;
  return std::nullopt;
}

std::vector<int> FinGroupoid::components() const {
  std::vector<int> comp(idx(num_objects()), -1);
  for (int x = 0; x < num_objects(); ++x) {
    if (comp[idx(x)] != -1) continue;
    // Every object of a connected component is reachable in one step.
    for (int a : out(x)) comp[idx(cod(a))] = x;
  }
  return comp;
}

void FinGroupoid::validate(const std::string& block) const {
  const int n = num_objects();
  const int m = num_arrows();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (object_name(x) == object_name(y)) fail(block, "unique names", "duplicate object " + object_name(x));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (arrow(a).name == arrow(b).name) fail(block, "unique names", "duplicate arrow " + arrow(a).name);
  if (m < n) fail(block, "identities", "fewer arrows than objects");
  for (int x = 0; x < n; ++x)
    if (dom(x) != x || cod(x) != x) fail(block, "identities", "arrow " + arrow(x).name + " is not id_" + object_name(x));
  for (int a = 0; a < m; ++a)
    if (dom(a) < 0 || dom(a) >= n || cod(a) < 0 || cod(a) >= n)
      fail(block, "typing", "arrow " + arrow(a).name + " has an unknown endpoint");
  for (int f = 0; f < m; ++f)
    for (int g : out(cod(f))) {
      int h = compose(g, f);
      if (h < 0 || h >= m) fail(block, "totality", "no composite " + arrow(g).name + " . " + arrow(f).name);
      if (dom(h) != dom(f) || cod(h) != cod(g))
        fail(block, "typing", arrow(g).name + " . " + arrow(f).name + " = " + arrow(h).name + " is mistyped");
    }
  for (int f = 0; f < m; ++f) {
    if (compose(cod(f), f) != f || compose(f, dom(f)) != f)
      fail(block, "unit laws", "identity composite with " + arrow(f).name);
  }
  for (int f = 0; f < m; ++f)
    for (int g : out(cod(f)))
      for (int h : out(cod(g)))
        if (compose(h, compose(g, f)) != compose(compose(h, g), f))
          fail(block, "associativity", arrow(h).name + " . " + arrow(g).name + " . " + arrow(f).name);
  for (int a = 0; a < m; ++a) {
    int i = inverse(a);
    if (i < 0 || i >= m || dom(i) != cod(a) || cod(i) != dom(a) || compose(i, a) != dom(a) ||
        compose(a, i) != cod(a))
      fail(block, "groupoid axioms", "arrow " + arrow(a).name + " has no inverse");
  }
}

bool operator==(const FinGroupoid& a, const FinGroupoid& b) {
  if (a.d_ == b.d_) return true;
  if (a.d_->objects != b.d_->objects || a.d_->inv != b.d_->inv || a.d_->comp != b.d_->comp) return false;
  if (a.num_arrows() != b.num_arrows()) return false;
  for (int f = 0; f < a.num_arrows(); ++f) {
    const auto &x = a.arrow(f), &y = b.arrow(f);
    if (x.name != y.name || x.dom != y.dom || x.cod != y.cod) return false;
  }
  return true;
}

void check_stage_functor(const FinGroupoid& a, const FinGroupoid& b, const StageFunctor& f,
                         const std::string& block, const std::string& what) {
  if (static_cast<int>(f.obj.size()) != a.num_objects() || static_cast<int>(f.arr.size()) != a.num_arrows())
    fail(block, "functoriality", what + " has tables of the wrong size");
  for (int x = 0; x < a.num_objects(); ++x) {
    int y = f.obj[idx(x)];
    if (y < 0 || y >= b.num_objects()) fail(block, "functoriality", what + " sends " + a.object_name(x) + " out of range");
    if (f.arr[idx(x)] != y) fail(block, "functoriality", what + " does not preserve id_" + a.object_name(x));
  }
  for (int u = 0; u < a.num_arrows(); ++u) {
    int v = f.arr[idx(u)];
    if (v < 0 || v >= b.num_arrows()) fail(block, "functoriality", what + " sends " + a.arrow(u).name + " out of range");
    if (b.dom(v) != f.obj[idx(a.dom(u))] || b.cod(v) != f.obj[idx(a.cod(u))])
      fail(block, "functoriality", what + " does not preserve the type of " + a.arrow(u).name);
  }
  for (int u = 0; u < a.num_arrows(); ++u)
    for (int w : a.out(a.cod(u)))
      if (f.arr[idx(a.compose(w, u))] != b.compose(f.arr[idx(w)], f.arr[idx(u)]))
        fail(block, "functoriality",
             what + " does not preserve " + a.arrow(w).name + " . " + a.arrow(u).name);
}

// ---------------------------------------------------------------- GpdPresheaf

std::shared_ptr<const GpdPresheaf::Data> GpdPresheaf::assemble(CategoryRef base, std::vector<FinGroupoid> stages,
                                                                std::vector<StageFunctor> act) {
  const FinCategory& c = *base;
  const int n = c.num_objects();
  std::vector<int> s0(idx(n)), s1(idx(n));
  std::vector<std::vector<std::string>> l0(idx(n)), l1(idx(n));
  NatTransf::Components dom(idx(n)), cod(idx(n)), ident(idx(n));
  for (int p = 0; p < n; ++p) {
    const auto& g = stages[idx(p)];
    s0[idx(p)] = g.num_objects();
    s1[idx(p)] = g.num_arrows();
    l0[idx(p)] = g.object_names();
    for (int a = 0; a < g.num_arrows(); ++a) {
      l1[idx(p)].push_back(g.arrow(a).name);
      dom[idx(p)].push_back(g.dom(a));
      cod[idx(p)].push_back(g.cod(a));
    }
    ident[idx(p)].resize(idx(g.num_objects()));
    std::iota(ident[idx(p)].begin(), ident[idx(p)].end(), 0);
  }
  Presheaf::Table t0(idx(c.num_arrows())), t1(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    t0[idx(h)] = act[idx(h)].obj;
    t1[idx(h)] = act[idx(h)].arr;
  }
  Presheaf g0 = Presheaf::unchecked(base, s0, std::move(t0), std::move(l0));
  Presheaf g1 = Presheaf::unchecked(base, s1, std::move(t1), std::move(l1));
  auto dm = NatTransf::unchecked(g1, g0, std::move(dom));
  auto cm = NatTransf::unchecked(g1, g0, std::move(cod));
  auto im = NatTransf::unchecked(g0, g1, std::move(ident));
  return std::make_shared<const Data>(
      Data{std::move(base), std::move(stages), std::move(act), g0, g1, dm, cm, im});
}

GpdPresheaf::GpdPresheaf(CategoryRef base, std::vector<FinGroupoid> stages, std::vector<StageFunctor> act,
                         const std::string& block) {
  if (static_cast<int>(stages.size()) != base->num_objects())
    fail(block, "stages", "expected one stage per base object");
  if (static_cast<int>(act.size()) != base->num_arrows())
    fail(block, "stages", "expected one restriction per base arrow");
  for (const auto& s : stages) s.validate(block);
  for (int h = 0; h < base->num_arrows(); ++h)
    check_stage_functor(stages[idx(base->cod(h))], stages[idx(base->dom(h))], act[idx(h)], block,
                        "restriction along " + base->arrow(h).name);
  d_ = assemble(std::move(base), std::move(stages), std::move(act));
  d_->g0.validate(block);
  d_->g1.validate(block);
}

GpdPresheaf GpdPresheaf::unchecked(CategoryRef base, std::vector<FinGroupoid> stages,
                                   std::vector<StageFunctor> act) {
  return GpdPresheaf(assemble(std::move(base), std::move(stages), std::move(act)));
}

bool GpdPresheaf::is_discrete() const {
  for (const auto& s : d_->stages)
    if (!s.is_discrete()) return false;
  return true;
}

void GpdPresheaf::validate(const std::string& block) const {
  GpdPresheaf(d_->base, d_->stages, d_->act, block);
}

bool operator==(const GpdPresheaf& a, const GpdPresheaf& b) {
  if (a.d_ == b.d_) return true;
  return (a.d_->base == b.d_->base || *a.d_->base == *b.d_->base) && a.d_->stages == b.d_->stages &&
         a.d_->act == b.d_->act;
}

// ---------------------------------------------------------------- GpdFunctor

GpdFunctor::GpdFunctor(GpdPresheaf source, GpdPresheaf target, std::vector<StageFunctor> stages,
                       const std::string& block)
    : source_(std::move(source)), target_(std::move(target)), stages_(std::move(stages)) {
  validate(block);
}

GpdFunctor GpdFunctor::unchecked(GpdPresheaf source, GpdPresheaf target, std::vector<StageFunctor> stages) {
  return GpdFunctor(std::move(source), std::move(target), std::move(stages), 0);
}

NatTransf GpdFunctor::on_objects() const {
  NatTransf::Components c;
  for (const auto& s : stages_) c.push_back(s.obj);
  return NatTransf::unchecked(source_.objects(), target_.objects(), std::move(c));
}

NatTransf GpdFunctor::on_arrows() const {
  NatTransf::Components c;
  for (const auto& s : stages_) c.push_back(s.arr);
  return NatTransf::unchecked(source_.arrows(), target_.arrows(), std::move(c));
}

void GpdFunctor::validate(const std::string& block) const {
  const CategoryRef& b = source_.base();
  if (b != target_.base() && !(*b == *target_.base())) fail(block, "typing", "source and target bases differ");
  if (static_cast<int>(stages_.size()) != b->num_objects()) fail(block, "typing", "expected one functor per stage");
  for (int p = 0; p < b->num_objects(); ++p)
    check_stage_functor(source_.stage(p), target_.stage(p), stage(p), block, "stage " + b->object_name(p));
  on_objects().validate(block);
  on_arrows().validate(block);
}

bool operator==(const GpdFunctor& a, const GpdFunctor& b) {
  return a.stages_ == b.stages_ && a.source_ == b.source_ && a.target_ == b.target_;
}

// ---------------------------------------------------------------- TwoCell

TwoCell::TwoCell(GpdFunctor source, GpdFunctor target, std::vector<std::vector<int>> comp, const std::string& block)
    : source_(std::move(source)), target_(std::move(target)), comp_(std::move(comp)) {
  validate(block);
}

TwoCell TwoCell::unchecked(GpdFunctor source, GpdFunctor target, std::vector<std::vector<int>> comp) {
  return TwoCell(std::move(source), std::move(target), std::move(comp), 0);
}

void TwoCell::validate(const std::string& block) const {
  const GpdFunctor& f = source_;
  const GpdFunctor& g = target_;
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    fail(block, "typing", "2-cell between functors that are not parallel");
  const GpdPresheaf& a = f.source();
  const GpdPresheaf& b = f.target();
  const FinCategory& c = a.cat();
  if (static_cast<int>(comp_.size()) != c.num_objects()) fail(block, "typing", "expected one component per stage");
  for (int p = 0; p < c.num_objects(); ++p) {
    const auto& sa = a.stage(p);
    const auto& sb = b.stage(p);
    const auto& row = comp_[idx(p)];
    if (static_cast<int>(row.size()) != sa.num_objects()) fail(block, "typing", "component table has the wrong size");
    for (int x = 0; x < sa.num_objects(); ++x) {
      int t = row[idx(x)];
      if (t < 0 || t >= sb.num_arrows() || sb.dom(t) != f.obj(p, x) || sb.cod(t) != g.obj(p, x))
        fail(block, "typing", "component at " + sa.object_name(x) + " has the wrong endpoints");
    }
    for (int u = 0; u < sa.num_arrows(); ++u)
      if (sb.compose(g.arr(p, u), row[idx(sa.dom(u))]) != sb.compose(row[idx(sa.cod(u))], f.arr(p, u)))
        fail(block, "naturality", "square at " + sa.arrow(u).name + " does not commute");
  }
  for (int h = 0; h < c.num_arrows(); ++h) {
    int q = c.dom(h), p = c.cod(h);
    for (int x = 0; x < a.stage(p).num_objects(); ++x)
      if (b.act_arr(h, comp_[idx(p)][idx(x)]) != comp_[idx(q)][idx(a.act_obj(h, x))])
        fail(block, "naturality", "component at " + a.stage(p).object_name(x) + " does not restrict along " +
                                      c.arrow(h).name);
  }
}

bool operator==(const TwoCell& a, const TwoCell& b) {
  return a.comp_ == b.comp_ && a.source_ == b.source_ && a.target_ == b.target_;
}

}  // namespace e2t
