#include "e2t/category.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "e2t/error.hpp"

namespace e2t {

FinCategory::Builder::Builder(std::string name) : name_(std::move(name)) {}

int FinCategory::Builder::add_object(const std::string& name) {
  if (arrows_.size() > objects_.size())
    throw PreconditionError("category " + name_ + ": object '" + name + "' added after arrows");
  if (object_index(name)) throw InvariantViolation(name_, "unique names", "duplicate object " + name);
  int x = static_cast<int>(objects_.size());
  objects_.push_back(name);
  arrows_.push_back({"id_" + name, x, x});
  return x;
}

int FinCategory::Builder::add_arrow(const std::string& name, int dom, int cod) {
  if (dom < 0 || cod < 0 || dom >= num_objects() || cod >= num_objects())
    throw PreconditionError("category " + name_ + ": arrow '" + name + "' has unknown endpoint");
  if (arrow_index(name)) throw InvariantViolation(name_, "unique names", "duplicate arrow " + name);
  arrows_.push_back({name, dom, cod});
  return static_cast<int>(arrows_.size()) - 1;
}

void FinCategory::Builder::set_composite(int g, int f, int h) { composites_.emplace_back(g, f, h); }

void FinCategory::Builder::derive_thin() {
  std::map<std::pair<int, int>, std::vector<int>> homs;
  for (int a = 0; a < num_arrows(); ++a) homs[{arrows_[a].dom, arrows_[a].cod}].push_back(a);
  std::map<std::pair<int, int>, int> known;
  for (auto [g, f, h] : composites_) known[{g, f}] = h;
  for (int f = 0; f < num_arrows(); ++f)
    for (int g = 0; g < num_arrows(); ++g) {
      if (arrows_[f].cod != arrows_[g].dom || known.count({g, f})) continue;
      auto it = homs.find({arrows_[f].dom, arrows_[g].cod});
      if (it != homs.end() && it->second.size() == 1) composites_.emplace_back(g, f, it->second[0]);
    }
}

std::optional<int> FinCategory::Builder::object_index(const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<int>(it - objects_.begin());
}

std::optional<int> FinCategory::Builder::arrow_index(const std::string& name) const {
  for (std::size_t a = 0; a < arrows_.size(); ++a)
    if (arrows_[a].name == name) return static_cast<int>(a);
  return std::nullopt;
}

FinCategory FinCategory::Builder::build() const {
  if (objects_.empty()) throw InvariantViolation(name_, "nonempty", "no objects");
  auto d = std::make_shared<Data>();
  d->name = name_;
  d->objects = objects_;
  d->arrows = arrows_;
  const int n = num_objects();
  const int m = num_arrows();
  d->out.assign(static_cast<std::size_t>(n), {});
  for (int a = 0; a < m; ++a) d->out[static_cast<std::size_t>(arrows_[a].dom)].push_back(a);
  d->pos_in_out.assign(static_cast<std::size_t>(m), 0);
  d->hom_begin.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  for (int x = 0; x < n; ++x) {
    auto& o = d->out[static_cast<std::size_t>(x)];
    std::stable_sort(o.begin(), o.end(), [&](int a, int b) { return arrows_[a].cod < arrows_[b].cod; });
    for (std::size_t i = 0; i < o.size(); ++i) d->pos_in_out[static_cast<std::size_t>(o[i])] = static_cast<int>(i);
    auto& hb = d->hom_begin[static_cast<std::size_t>(x)];
    std::size_t i = 0;
    for (int y = 0; y <= n; ++y) {
      while (i < o.size() && arrows_[o[i]].cod < y) ++i;
      hb[static_cast<std::size_t>(y)] = static_cast<int>(i);
    }
  }
  d->comp.assign(static_cast<std::size_t>(m), {});
  for (int f = 0; f < m; ++f)
    d->comp[static_cast<std::size_t>(f)].assign(d->out[static_cast<std::size_t>(arrows_[f].cod)].size(), -1);
  auto name_of = [&](int a) { return arrows_[static_cast<std::size_t>(a)].name; };
  // Identity laws are built in; explicit entries must agree with them.
  for (int f = 0; f < m; ++f) {
    int c = arrows_[f].cod;
    d->comp[f][static_cast<std::size_t>(d->pos_in_out[c])] = f;
  }
  for (int g = n; g < m; ++g) {
    int x = arrows_[g].dom;
    d->comp[x][static_cast<std::size_t>(d->pos_in_out[g])] = g;
  }
  for (auto [g, f, h] : composites_) {
    if (g < 0 || f < 0 || h < 0 || g >= m || f >= m || h >= m)
      throw InvariantViolation(name_, "composition table", "unknown arrow in composite");
    if (arrows_[f].cod != arrows_[g].dom)
      throw InvariantViolation(name_, "composition typing",
                               name_of(g) + " . " + name_of(f) + " not composable");
    if (arrows_[h].dom != arrows_[f].dom || arrows_[h].cod != arrows_[g].cod)
      throw InvariantViolation(name_, "composition typing",
                               name_of(g) + " . " + name_of(f) + " = " + name_of(h) + " has wrong type");
    int& slot = d->comp[f][static_cast<std::size_t>(d->pos_in_out[g])];
    if (slot != -1 && slot != h)
      throw InvariantViolation(name_, (f < n || g < n) ? "unit law" : "composition table",
                               name_of(g) + " . " + name_of(f) + " defined twice");
    slot = h;
  }
  for (int f = 0; f < m; ++f)
    for (std::size_t i = 0; i < d->comp[f].size(); ++i)
      if (d->comp[f][i] == -1)
        throw InvariantViolation(name_, "totality",
                                 name_of(d->out[arrows_[f].cod][i]) + " . " + name_of(f) + " undefined");
  FinCategory c(d);
  for (int f = 0; f < m; ++f)
    for (int g : c.out(c.cod(f)))
      for (int h : c.out(c.cod(g)))
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f))
          throw InvariantViolation(name_, "associativity",
                                   name_of(h) + ", " + name_of(g) + ", " + name_of(f));
  return c;
}

int FinCategory::compose(int g, int f) const {
  if (cod(f) != dom(g)) throw PreconditionError("compose: arrows not composable");
  return d_->comp[static_cast<std::size_t>(f)][static_cast<std::size_t>(d_->pos_in_out[static_cast<std::size_t>(g)])];
}

std::span<const int> FinCategory::hom(int x, int y) const {
  const auto& o = d_->out[static_cast<std::size_t>(x)];
  const auto& hb = d_->hom_begin[static_cast<std::size_t>(x)];
  int b = hb[static_cast<std::size_t>(y)];
  int e = hb[static_cast<std::size_t>(y) + 1];
  return std::span<const int>(o.data() + b, static_cast<std::size_t>(e - b));
}

std::optional<int> FinCategory::object_index(const std::string& name) const {
  for (int x = 0; x < num_objects(); ++x)
    if (object_name(x) == name) return x;
  return std::nullopt;
}

std::optional<int> FinCategory::arrow_index(const std::string& name) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (arrow(a).name == name) return a;
  return std::nullopt;
}

bool FinCategory::is_preorder() const {
  for (int x = 0; x < num_objects(); ++x)
    for (int y = 0; y < num_objects(); ++y)
      if (hom(x, y).size() > 1) return false;
  return true;
}

bool operator==(const FinCategory& a, const FinCategory& b) {
  if (a.d_ == b.d_) return true;
  if (a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows()) return false;
  for (int x = 0; x < a.num_arrows(); ++x)
    if (a.dom(x) != b.dom(x) || a.cod(x) != b.cod(x)) return false;
  return a.d_->comp == b.d_->comp && a.d_->out == b.d_->out;
}

namespace stock {

CategoryRef one() {
  static const CategoryRef c = [] {
    FinCategory::Builder b("One");
    b.add_object("pt");
    return std::make_shared<const FinCategory>(b.build());
  }();
  return c;
}

CategoryRef two() {
  static const CategoryRef c = [] {
    FinCategory::Builder b("Two");
    int a = b.add_object("a");
    int bb = b.add_object("b");
    b.add_arrow("f", a, bb);
    return std::make_shared<const FinCategory>(b.build());
  }();
  return c;
}

CategoryRef parallel_pair() {
  static const CategoryRef c = [] {
    FinCategory::Builder b("ParallelPair");
    int a = b.add_object("a");
    int bb = b.add_object("b");
    b.add_arrow("f", a, bb);
    b.add_arrow("g", a, bb);
    return std::make_shared<const FinCategory>(b.build());
  }();
  return c;
}

CategoryRef commutative_square() {
  static const CategoryRef c = [] {
    FinCategory::Builder b("Square");
    int bot = b.add_object("bot");
    int x = b.add_object("x");
    int y = b.add_object("y");
    int top = b.add_object("top");
    b.add_arrow("bx", bot, x);
    b.add_arrow("by", bot, y);
    b.add_arrow("xt", x, top);
    b.add_arrow("yt", y, top);
    b.add_arrow("bt", bot, top);
    b.derive_thin();
    return std::make_shared<const FinCategory>(b.build());
  }();
  return c;
}

CategoryRef trunc_monoid() {
  static const CategoryRef c = [] {
    FinCategory::Builder b("Trunc3");
    int o = b.add_object("pt");
    int t = b.add_arrow("t", o, o);
    int t2 = b.add_arrow("t2", o, o);
    b.set_composite(t, t, t2);
    b.set_composite(t, t2, t2);
    b.set_composite(t2, t, t2);
    b.set_composite(t2, t2, t2);
    return std::make_shared<const FinCategory>(b.build());
  }();
  return c;
}

std::vector<CategoryRef> all() {
  return {one(), two(), parallel_pair(), commutative_square(), trunc_monoid()};
}

std::optional<CategoryRef> by_name(const std::string& name) {
  for (const auto& c : all())
    if (c->name() == name) return c;
  return std::nullopt;
}

}  // namespace stock

}  // namespace e2t
