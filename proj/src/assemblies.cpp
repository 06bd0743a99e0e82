#include "e2t/assemblies.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace e2t {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void require_normal(const std::string& block, const std::string& elem, const pca::Term& t) {
  if (!pca::is_normal(t))
    throw InvariantViolation(block, "normal realizers", elem + " realized by non-normal " + t.to_string());
}

pca::Term normalize_one(const std::string& block, const std::string& elem, const pca::Term& t,
                        std::size_t budget) {
  auto out = pca::reduce(t, budget);
  if (auto* n = std::get_if<pca::Normal>(&out)) return n->term;
  throw InvariantViolation(block, "normalizing realizers",
                           elem + " realizer " + t.to_string() + " has no normal form within budget");
}

}  // namespace

void PartitionedAssembly::validate() const {
  if (carrier.size() != realizer.size())
    throw InvariantViolation(name, "realizer per element", "carrier and realizer counts differ");
  for (std::size_t i = 0; i < carrier.size(); ++i) require_normal(name, carrier[i], realizer[i]);
}

Assembly Assembly::from(const PartitionedAssembly& p) {
  Assembly a{p.name, p.carrier, {}};
  for (const auto& t : p.realizer) a.realizers.push_back({t});
  return a;
}

void Assembly::validate() const {
  if (carrier.size() != realizers.size())
    throw InvariantViolation(name, "realizer sets", "carrier and realizer counts differ");
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    if (realizers[i].empty()) throw InvariantViolation(name, "nonempty realizer sets", carrier[i]);
    for (const auto& t : realizers[i]) require_normal(name, carrier[i], t);
  }
}

PartitionedAssembly normalize_realizers(PartitionedAssembly p, std::size_t budget) {
  for (std::size_t i = 0; i < p.realizer.size() && i < p.carrier.size(); ++i)
    p.realizer[i] = normalize_one(p.name, p.carrier[i], p.realizer[i], budget);
  return p;
}

Assembly normalize_realizers(Assembly a, std::size_t budget) {
  for (std::size_t i = 0; i < a.realizers.size() && i < a.carrier.size(); ++i) {
    std::vector<pca::Term> out;
    for (const auto& t : a.realizers[i]) {
      auto n = normalize_one(a.name, a.carrier[i], t, budget);
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    a.realizers[i] = std::move(out);
  }
  return a;
}

std::optional<pca::Term> find_tracker(const std::vector<int>& fn, const Assembly& a, const Assembly& b,
                                      std::size_t max_size, std::size_t budget) {
  if (max_size < 1) throw PreconditionError("find_tracker: max-term-size must be at least 1");
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const pca::Term& t : pca::terms_of_size(s))
      if (pca::tracks(t, fn, a.realizers, b.realizers, budget) == pca::TrackOutcome::Tracks) return t;
  return std::nullopt;
}

RegularImage regular_image(const TrackedMap& m) {
  const Assembly& q = m.target;
  std::vector<int> keep;
  std::vector<int> pos(q.carrier.size(), -1);
  std::vector<char> hit(q.carrier.size(), 0);
  for (int v : m.fn) hit[idx(v)] = 1;
  for (std::size_t y = 0; y < q.carrier.size(); ++y)
    if (hit[y]) {
      pos[y] = static_cast<int>(keep.size());
      keep.push_back(static_cast<int>(y));
    }
  Assembly im{"Im_" + m.source.name, {}, {}};
  for (int y : keep) {
    im.carrier.push_back(q.carrier[idx(y)]);
    im.realizers.emplace_back();
  }
  for (std::size_t a = 0; a < m.fn.size(); ++a) {
    auto& rs = im.realizers[idx(pos[idx(m.fn[a])])];
    for (const auto& t : m.source.realizers[a])
      if (std::find(rs.begin(), rs.end(), t) == rs.end()) rs.push_back(t);
  }
  std::vector<int> epi_fn;
  for (int v : m.fn) epi_fn.push_back(pos[idx(v)]);
  TrackedMap epi{m.source, im, epi_fn, pca::identity_term()};
  TrackedMap mono{im, q, keep, m.tracker};
  return {im, epi, mono};
}

Site build_site(const std::vector<PartitionedAssembly>& gens, HomBudget budget, std::size_t arrow_cap) {
  if (gens.empty()) throw PreconditionError("build_site: no generators");
  const int n = static_cast<int>(gens.size());
  std::vector<Assembly> as;
  for (const auto& g : gens) as.push_back(Assembly::from(g));

  struct Arr {
    int dom, cod;
    std::vector<int> fn;
    pca::Term tracker;
  };
  std::vector<Arr> arrows;
  std::map<std::tuple<int, int, std::vector<int>>, int> seen;
  auto add = [&](int d, int c, std::vector<int> fn, pca::Term t) {
    auto key = std::make_tuple(d, c, fn);
    if (seen.count(key)) return false;
    if (arrows.size() >= arrow_cap)
      throw SiteTooLarge("build_site: more than " + std::to_string(arrow_cap) + " arrows");
    seen.emplace(key, static_cast<int>(arrows.size()));
    arrows.push_back({d, c, std::move(fn), std::move(t)});
    return true;
  };
  for (int x = 0; x < n; ++x) {
    std::vector<int> id(as[idx(x)].carrier.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    add(x, x, id, pca::identity_term());
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int sx = as[idx(x)].size(), sy = as[idx(y)].size();
      if (sx > 0 && sy == 0) continue;
      std::vector<int> fn(idx(sx), 0);
      while (true) {
        if (auto t = find_tracker(fn, as[idx(x)], as[idx(y)], budget.max_term_size, budget.step_budget))
          add(x, y, fn, *t);
        int i = sx - 1;
        while (i >= 0 && ++fn[idx(i)] == sy) fn[idx(i--)] = 0;
        if (i < 0) break;
      }
    }
  // Close under composition.
  for (std::size_t changed = 1; changed;) {
    changed = 0;
    for (std::size_t f = 0; f < arrows.size(); ++f)
      for (std::size_t g = 0; g < arrows.size(); ++g) {
        if (arrows[f].cod != arrows[g].dom) continue;
        std::vector<int> fn;
        for (int v : arrows[f].fn) fn.push_back(arrows[g].fn[idx(v)]);
        if (add(arrows[f].dom, arrows[g].cod, fn, pca::compose_trackers(arrows[g].tracker, arrows[f].tracker)))
          ++changed;
      }
  }

  FinCategory::Builder b("Site");
  for (const auto& g : gens) b.add_object(g.name);
  std::vector<int> index(arrows.size(), -1);
  for (int x = 0; x < n; ++x) index[idx(x)] = x;
  std::map<std::pair<int, int>, int> counter;
  for (std::size_t a = static_cast<std::size_t>(n); a < arrows.size(); ++a) {
    const auto& ar = arrows[a];
    int k = counter[{ar.dom, ar.cod}]++;
    index[a] = b.add_arrow(gens[idx(ar.dom)].name + "_" + gens[idx(ar.cod)].name + "_" + std::to_string(k),
                           ar.dom, ar.cod);
  }
  for (std::size_t f = 0; f < arrows.size(); ++f)
    for (std::size_t g = 0; g < arrows.size(); ++g) {
      if (arrows[f].cod != arrows[g].dom) continue;
      std::vector<int> fn;
      for (int v : arrows[f].fn) fn.push_back(arrows[g].fn[idx(v)]);
      int h = seen.at(std::make_tuple(arrows[f].dom, arrows[g].cod, fn));
      b.set_composite(index[g], index[f], index[idx(h)]);
    }
  Site s;
  s.category = std::make_shared<const FinCategory>(b.build());
  s.trackers.resize(arrows.size(), pca::identity_term());
  s.functions.resize(arrows.size());
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    s.trackers[idx(index[a])] = arrows[a].tracker;
    s.functions[idx(index[a])] = arrows[a].fn;
  }
  s.generators = gens;
  return s;
}

}  // namespace e2t
