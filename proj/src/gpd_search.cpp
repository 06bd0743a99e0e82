#include "e2t/groupoid.hpp"
#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;

namespace {

class ArrowSearch {
 public:
  ArrowSearch(const GpdPresheaf& a, const GpdPresheaf& b, const NatTransf& objects, const FunctorSearchOptions& opts,
              std::uint64_t& nodes)
      : a_(a), b_(b), c_(a.cat()), m0_(objects), opts_(opts), nodes_(nodes) {
    const int n = c_.num_objects();
    into_.resize(idx(n));
    for (int h = 0; h < c_.num_arrows(); ++h)
      if (!c_.is_identity(h)) into_[idx(c_.cod(h))].push_back(h);
    vals_.resize(idx(n));
    for (int p = 0; p < n; ++p) {
      vals_[idx(p)].assign(idx(a.stage(p).num_arrows()), -1);
      for (int x = 0; x < a.stage(p).num_objects(); ++x) vals_[idx(p)][idx(x)] = m0_(p, x);
    }
  }

  /// False when stopped by the visitor or the node cap.
  bool run(const std::function<bool(const GpdFunctor&)>& visit) { return descend(0, 0, visit); }
  bool exhausted() const { return exhausted_; }

 private:
  bool assign(int p, int u, int v) {
    int& slot = vals_[idx(p)][idx(u)];
    if (slot != -1) return slot == v;
    if (++nodes_ > opts_.limits.node_cap) {
      exhausted_ = true;
      return false;
    }
    const auto& sa = a_.stage(p);
    const auto& sb = b_.stage(p);
    if (sb.dom(v) != m0_(p, sa.dom(u)) || sb.cod(v) != m0_(p, sa.cod(u))) return false;
    if (opts_.allowed_arr && !opts_.allowed_arr(p, u, v)) return false;
    slot = v;
    trail_.emplace_back(p, u);
    if (!assign(p, sa.inverse(u), sb.inverse(v))) return false;
    for (int h : into_[idx(p)])
      if (!assign(c_.dom(h), a_.act_arr(h, u), b_.act_arr(h, v))) return false;
    for (int w : sa.out(sa.cod(u))) {
      int vw = vals_[idx(p)][idx(w)];
      if (vw != -1 && !assign(p, sa.compose(w, u), sb.compose(vw, v))) return false;
    }
    for (int w0 : sa.out(sa.dom(u))) {
      int w = sa.inverse(w0);  // w: cod w0 -> dom u
      int vw = vals_[idx(p)][idx(w)];
      if (vw != -1 && !assign(p, sa.compose(u, w), sb.compose(v, vw))) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [p, u] = trail_.back();
      trail_.pop_back();
      vals_[idx(p)][idx(u)] = -1;
    }
  }

  bool descend(int p, int u, const std::function<bool(const GpdFunctor&)>& visit) {
    const int n = c_.num_objects();
    while (p < n && u >= a_.stage(p).num_arrows()) {
      ++p;
      u = 0;
    }
    if (p == n) {
      std::vector<StageFunctor> st;
      for (int q = 0; q < n; ++q) st.push_back({m0_.component(q), vals_[idx(q)]});
      return visit(GpdFunctor::unchecked(a_, b_, std::move(st)));
    }
    if (vals_[idx(p)][idx(u)] != -1) return descend(p, u + 1, visit);
    const auto& sa = a_.stage(p);
    auto h = b_.stage(p).hom(m0_(p, sa.dom(u)), m0_(p, sa.cod(u)));
    std::vector<int> cand(h.begin(), h.end());
    if (opts_.reorder_arr) opts_.reorder_arr(p, u, cand);
    for (int v : cand) {
      std::size_t mark = trail_.size();
      bool ok = assign(p, u, v);
      if (exhausted_) return false;
      if (ok && !descend(p, u + 1, visit)) return false;
      undo(mark);
    }
    return true;
  }

  const GpdPresheaf& a_;
  const GpdPresheaf& b_;
  const FinCategory& c_;
  const NatTransf& m0_;
  const FunctorSearchOptions& opts_;
  std::uint64_t& nodes_;
  std::vector<std::vector<int>> into_;
  std::vector<std::vector<int>> vals_;
  std::vector<std::pair<int, int>> trail_;
  bool exhausted_ = false;
};

}  // namespace

SearchStatus search_functors(const GpdPresheaf& a, const GpdPresheaf& b, const FunctorSearchOptions& opts,
                             const std::function<bool(const GpdFunctor&)>& visit) {
  std::uint64_t nodes = 0;
  bool stopped = false;
  bool exhausted = false;
  MapSearchOptions mo;
  mo.allowed = opts.allowed_obj;
  mo.reorder = opts.reorder_obj;
  mo.limits = opts.limits;
  SearchStatus st = search_nat_transfs(a.objects(), b.objects(), mo, [&](const NatTransf& m0) {
    ArrowSearch s(a, b, m0, opts, nodes);
    if (s.run(visit)) return true;
    if (s.exhausted()) exhausted = true;
    else stopped = true;
    return false;
  });
  if (exhausted || st == SearchStatus::Exhausted) return SearchStatus::Exhausted;
  return stopped ? SearchStatus::Found : SearchStatus::NotFound;
}

}  // namespace e2t
