#include "e2t/presheaf.hpp"

#include <algorithm>
#include <numeric>

namespace e2t {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

Presheaf::Presheaf(CategoryRef base, std::vector<int> sizes, Table act,
                   std::vector<std::vector<std::string>> labels)
    : Presheaf(unchecked(std::move(base), std::move(sizes), std::move(act), std::move(labels))) {
  validate();
}

Presheaf Presheaf::unchecked(CategoryRef base, std::vector<int> sizes, Table act,
                             std::vector<std::vector<std::string>> labels) {
  auto d = std::make_shared<Data>();
  d->base = std::move(base);
  d->sizes = std::move(sizes);
  d->act = std::move(act);
  d->labels = std::move(labels);
  return Presheaf(std::move(d));
}

int Presheaf::total_size() const { return std::accumulate(d_->sizes.begin(), d_->sizes.end(), 0); }

std::string Presheaf::label(int obj, int x) const {
  if (!d_->labels.empty()) return d_->labels[idx(obj)][idx(x)];
  return "e" + std::to_string(x);
}

std::optional<int> Presheaf::element_index(int obj, const std::string& name) const {
  for (int x = 0; x < size(obj); ++x)
    if (label(obj, x) == name) return x;
  return std::nullopt;
}

Presheaf Presheaf::with_labels(std::vector<std::vector<std::string>> labels) const {
  return unchecked(d_->base, d_->sizes, d_->act, std::move(labels));
}

bool Presheaf::is_empty() const {
  return std::all_of(d_->sizes.begin(), d_->sizes.end(), [](int s) { return s == 0; });
}

void Presheaf::validate(const std::string& block) const {
  const FinCategory& c = cat();
  if (static_cast<int>(d_->sizes.size()) != c.num_objects())
    throw InvariantViolation(block, "stage count", "expected one stage per object");
  if (static_cast<int>(d_->act.size()) != c.num_arrows())
    throw InvariantViolation(block, "action table", "expected one table per arrow");
  for (int s : d_->sizes)
    if (s < 0) throw InvariantViolation(block, "stage size", "negative size");
  if (!d_->labels.empty()) {
    for (int o = 0; o < c.num_objects(); ++o)
      if (static_cast<int>(d_->labels[idx(o)].size()) != size(o))
        throw InvariantViolation(block, "labels", "label count differs at " + c.object_name(o));
  }
  for (int h = 0; h < c.num_arrows(); ++h) {
    const auto& t = d_->act[idx(h)];
    int p = c.cod(h), q = c.dom(h);
    if (static_cast<int>(t.size()) != size(p))
      throw InvariantViolation(block, "action table", "act " + c.arrow(h).name + " has wrong length");
    for (int x = 0; x < size(p); ++x)
      if (t[idx(x)] < 0 || t[idx(x)] >= size(q))
        throw InvariantViolation(block, "action table",
                                 "act " + c.arrow(h).name + " on " + label(p, x) + " out of range");
  }
  for (int o = 0; o < c.num_objects(); ++o)
    for (int x = 0; x < size(o); ++x)
      if (act(o, x) != x)
        throw InvariantViolation(block, "functoriality",
                                 "act id_" + c.object_name(o) + " moves " + label(o, x));
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.out(c.cod(f))) {
      int gf = c.compose(g, f);
      for (int x = 0; x < size(c.cod(g)); ++x)
        if (act(gf, x) != act(f, act(g, x)))
          throw InvariantViolation(block, "functoriality",
                                   "act(" + c.arrow(g).name + " . " + c.arrow(f).name + ") on " +
                                       label(c.cod(g), x));
    }
}

bool operator==(const Presheaf& a, const Presheaf& b) {
  if (a.d_ == b.d_) return true;
  return (a.d_->base == b.d_->base || *a.d_->base == *b.d_->base) && a.d_->sizes == b.d_->sizes &&
         a.d_->act == b.d_->act;
}

NatTransf::NatTransf(Presheaf source, Presheaf target, Components comp)
    : source_(std::move(source)), target_(std::move(target)), comp_(std::move(comp)) {
  validate();
}

NatTransf NatTransf::unchecked(Presheaf source, Presheaf target, Components comp) {
  return NatTransf(std::move(source), std::move(target), std::move(comp), NoCheck{});
}

bool NatTransf::is_epi() const {
  const FinCategory& c = source_.cat();
  for (int o = 0; o < c.num_objects(); ++o) {
    std::vector<char> hit(idx(target_.size(o)), 0);
    for (int v : comp_[idx(o)]) hit[idx(v)] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
  }
  return true;
}

bool NatTransf::is_mono() const {
  const FinCategory& c = source_.cat();
  for (int o = 0; o < c.num_objects(); ++o) {
    std::vector<char> hit(idx(target_.size(o)), 0);
    for (int v : comp_[idx(o)]) {
      if (hit[idx(v)]) return false;
      hit[idx(v)] = 1;
    }
  }
  return true;
}

void NatTransf::validate(const std::string& block) const {
  const FinCategory& c = source_.cat();
  if (!(source_.cat() == target_.cat())) throw InvariantViolation(block, "common base", "bases differ");
  if (static_cast<int>(comp_.size()) != c.num_objects())
    throw InvariantViolation(block, "components", "expected one component per object");
  for (int o = 0; o < c.num_objects(); ++o) {
    if (static_cast<int>(comp_[idx(o)].size()) != source_.size(o))
      throw InvariantViolation(block, "components", "wrong length at " + c.object_name(o));
    for (int v : comp_[idx(o)])
      if (v < 0 || v >= target_.size(o))
        throw InvariantViolation(block, "components", "value out of range at " + c.object_name(o));
  }
  for (int h = 0; h < c.num_arrows(); ++h) {
    int p = c.cod(h), q = c.dom(h);
    for (int x = 0; x < source_.size(p); ++x)
      if ((*this)(q, source_.act(h, x)) != target_.act(h, (*this)(p, x)))
        throw InvariantViolation(block, "naturality",
                                 "square for " + c.arrow(h).name + " at " + source_.label(p, x));
  }
}

bool operator==(const NatTransf& a, const NatTransf& b) {
  return a.comp_ == b.comp_ && a.source_ == b.source_ && a.target_ == b.target_;
}

// ---------------------------------------------------------------- search

namespace {

class MapSearch {
 public:
  MapSearch(const Presheaf& x, const Presheaf& y, const MapSearchOptions& opts)
      : x_(x), y_(y), opts_(opts), c_(x.cat()) {
    const int n = c_.num_objects();
    value_.resize(idx(n));
    used_.resize(idx(n));
    into_.resize(idx(n));
    for (int h = 0; h < c_.num_arrows(); ++h)
      if (!c_.is_identity(h)) into_[idx(c_.cod(h))].push_back(h);
    // Stages with more restrictions go first so that their choices force the rest.
    std::vector<int> order(idx(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return into_[idx(a)].size() > into_[idx(b)].size(); });
    for (int o = 0; o < n; ++o) {
      value_[idx(o)].assign(idx(x.size(o)), -1);
      used_[idx(o)].assign(idx(y.size(o)), 0);
    }
    for (int o : order)
      for (int x0 = 0; x0 < x.size(o); ++x0) vars_.emplace_back(o, x0);
  }

  SearchStatus run(const std::function<bool(const NatTransf&)>& visit) {
    visit_ = &visit;
    bool stopped = step(0);
    if (capped_) return SearchStatus::Exhausted;
    return stopped ? SearchStatus::Found : SearchStatus::NotFound;
  }

 private:
  const Presheaf& x_;
  const Presheaf& y_;
  const MapSearchOptions& opts_;
  const FinCategory& c_;
  std::vector<std::pair<int, int>> vars_;
  std::vector<std::vector<int>> value_;
  std::vector<std::vector<int>> used_;
  std::vector<std::vector<int>> into_;
  std::vector<std::pair<int, int>> trail_;
  const std::function<bool(const NatTransf&)>* visit_ = nullptr;
  std::uint64_t nodes_ = 0;
  bool capped_ = false;

  bool assign(int o, int x, int v) {
    int& slot = value_[idx(o)][idx(x)];
    if (slot != -1) return slot == v;
    if (opts_.allowed && !opts_.allowed(o, x, v)) return false;
    if (opts_.injective && used_[idx(o)][idx(v)]) return false;
    slot = v;
    ++used_[idx(o)][idx(v)];
    trail_.emplace_back(o, x);
    for (int h : into_[idx(o)])
      if (!assign(c_.dom(h), x_.act(h, x), y_.act(h, v))) return false;
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [o, x] = trail_.back();
      trail_.pop_back();
      --used_[idx(o)][idx(value_[idx(o)][idx(x)])];
      value_[idx(o)][idx(x)] = -1;
    }
  }

  // Returns true when the visitor asked to stop or the cap was hit.
  bool step(std::size_t i) {
    while (i < vars_.size() && value_[idx(vars_[i].first)][idx(vars_[i].second)] != -1) ++i;
    if (i == vars_.size()) {
      auto m = NatTransf::unchecked(x_, y_, value_);
      return !(*visit_)(m);
    }
    auto [o, x] = vars_[i];
    std::vector<int> cand(idx(y_.size(o)));
    std::iota(cand.begin(), cand.end(), 0);
    if (opts_.reorder) opts_.reorder(o, x, cand);
    for (int v : cand) {
      if (++nodes_ > opts_.limits.node_cap) {
        capped_ = true;
        return true;
      }
      std::size_t mark = trail_.size();
      bool ok = assign(o, x, v);
      if (ok && step(i + 1)) return true;
      undo(mark);
    }
    return false;
  }
};

}  // namespace

SearchStatus search_nat_transfs(const Presheaf& x, const Presheaf& y, const MapSearchOptions& opts,
                                const std::function<bool(const NatTransf&)>& visit) {
  MapSearch s(x, y, opts);
  return s.run(visit);
}

std::vector<NatTransf> all_nat_transfs(const Presheaf& x, const Presheaf& y) {
  std::vector<NatTransf> out;
  MapSearchOptions opts;
  opts.limits.node_cap = UINT64_MAX;
  search_nat_transfs(x, y, opts, [&](const NatTransf& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::pair<SearchStatus, std::optional<NatTransf>> find_constrained_map(
    const Presheaf& x, const Presheaf& y, const std::function<bool(int, int, int)>& allowed,
    SearchLimits limits) {
  MapSearchOptions opts;
  opts.allowed = allowed;
  opts.limits = limits;
  std::optional<NatTransf> found;
  auto st = search_nat_transfs(x, y, opts, [&](const NatTransf& m) {
    found = m;
    return false;
  });
  return {st, found};
}

std::pair<SearchStatus, std::optional<NatTransf>> find_section(const NatTransf& p, SearchLimits limits) {
  return find_constrained_map(
      p.target(), p.source(), [&](int o, int x, int e) { return p(o, e) == x; }, limits);
}

std::optional<NatTransf> find_iso(const Presheaf& a, const Presheaf& b) {
  if (a.sizes() != b.sizes()) return std::nullopt;
  MapSearchOptions opts;
  opts.injective = true;
  opts.limits.node_cap = UINT64_MAX;
  std::optional<NatTransf> found;
  search_nat_transfs(a, b, opts, [&](const NatTransf& m) {
    found = m;
    return false;
  });
  return found;
}

}  // namespace e2t
