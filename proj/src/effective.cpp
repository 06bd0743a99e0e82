#include "e2t/effective.hpp"

#include <chrono>
#include <map>

#include "e2t/format.hpp"
#include "e2t/modelcat.hpp"
#include "gpd_internal.hpp"

namespace e2t {

using detail::idx;
using detail::Key;

// ---------------------------------------------------------------- discretize

bool DiscretizationResult::check() const {
  if (!strict.weak.holds || !is_equivalence_relation_gpd(strict.k)) return false;
  if (!presentation.kernel_pair || !presentation.coequalizer) return false;
  if (!presentation.cover.is_epi() || !presentation.comparison.is_iso()) return false;
  if (compose(presentation.cover, strict.k.dom_map()) != compose(presentation.cover, strict.k.cod_map())) return false;
  if (!presheaf_coherence.holds || !coherence.holds) return false;
  if (!certificate.weak || !is_weak_equivalence(equivalence).holds) return false;
  return equivalence.source() == strict.k && equivalence.target() == discrete(G);
}

DiscretizationResult discretize(const GpdPresheaf& g) {
  auto cover = find_pseudo_compact_cover(g);
  if (!cover) throw NotCoherent("discretize: no pseudo-compact cover");
  Strictification s = strictify(g, *cover);
  if (!is_equivalence_relation_gpd(s.k)) throw NotZeroType("discretize: K1 -> K0 x K0 is not monic");
  CoherenceReport rep = is_coherent_groupoid(g);
  if (!rep.holds) throw NotCoherent("discretize: coherence conditions fail");

  const GpdPresheaf& k = s.k;
  QuotientResult q = coequalize_eqrel(k.dom_map(), k.cod_map());
  PullbackResult kp = kernel_pair(q.projection);
  NatTransf comparison = into_pullback(kp, k.dom_map(), k.cod_map());
  Presentation pr{q.projection, kp, comparison};
  pr.kernel_pair = comparison.is_iso();
  pr.coequalizer = pr.kernel_pair && q.projection.is_epi();

  GpdPresheaf dg = discrete(q.quotient);
  std::vector<StageFunctor> st;
  for (int p = 0; p < k.cat().num_objects(); ++p) {
    StageFunctor f;
    f.obj = q.projection.component(p);
    for (int a = 0; a < k.stage(p).num_arrows(); ++a) f.arr.push_back(f.obj[idx(k.stage(p).dom(a))]);
    st.push_back(std::move(f));
  }
  GpdFunctor eq(k, dg, std::move(st));
  DiscreteTargetReport cert = discrete_target_check(eq);
  return {q.quotient, std::move(s), is_coherent_presheaf(q.quotient), is_coherent_groupoid(dg), eq, cert, pr};
}

// ---------------------------------------------------------------- classify

bool Classification::chain_consistent() const {
  if ((is_ind_proj() || is_coherent() || is_assembly_like()) && !is_compact()) return false;
  if (!lex_base) return true;
  return (!is_ind_proj() || is_assembly_like()) && (!is_assembly_like() || is_coherent());
}

Classification classify(const Presheaf& x) {
  return {is_indecomposable_projective(x), is_compact(x), is_coherent_presheaf(x), is_assembly_like(x),
          is_lex_base(x.base())};
}

// ---------------------------------------------------------------- generation

namespace gen {

namespace {

std::vector<pca::Term> small_normal_terms() {
  std::vector<pca::Term> out;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& t : pca::terms_of_size(n))
      if (pca::is_normal(t)) out.push_back(t);
  return out;
}

}  // namespace

e2t::Site site(Rng& rng) {
  static const std::vector<pca::Term> terms = small_normal_terms();
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    int n = rng.between(1, 3);
    std::vector<PartitionedAssembly> gens;
    for (int i = 0; i < n; ++i) {
      PartitionedAssembly a{"A" + std::to_string(i), {}, {}};
      int m = rng.between(1, 2);
      for (int e = 0; e < m; ++e) {
        a.carrier.push_back("a" + std::to_string(e));
        a.realizer.push_back(rng.pick(terms));
      }
      gens.push_back(std::move(a));
    }
    try {
      return build_site(gens, {4, 2000});
    } catch (const SiteTooLarge&) {
    }
  }
  throw GenerationExhausted(0, kRetryCap);
}

Instance generate(Kind kind, std::uint64_t seed, const Bounds& bounds) {
  Rng rng(seed);
  CategoryRef base = bounds.base ? bounds.base : stock::one();
  GroupoidBounds gb{bounds.max_stage, bounds.max_order, 40};
  try {
    switch (kind) {
      case Kind::Site:
        return site(rng);
      case Kind::Presheaf:
        return presheaf(rng, base, {bounds.max_stage, 3, 50});
      case Kind::Groupoid:
        return groupoid(rng, base, gb);
      case Kind::Functor:
        for (int attempt = 0; attempt < kRetryCap; ++attempt) {
          auto a = groupoid(rng, base, gb);
          auto b = groupoid(rng, base, gb);
          if (auto f = random_functor(rng, a, b)) return *f;
        }
        break;
    }
  } catch (const GenerationExhausted&) {
  }
  throw GenerationExhausted(seed, kRetryCap);
}

GpdPresheaf kernel_groupoid(const NatTransf& e) {
  const Presheaf& x = e.source();
  const FinCategory& c = x.cat();
  std::vector<detail::StageAssembler> st(idx(c.num_objects()));
  for (int p = 0; p < c.num_objects(); ++p) {
    auto& s = st[idx(p)];
    for (int a = 0; a < x.size(p); ++a) s.add_object({a}, x.label(p, a));
    for (int a = 0; a < x.size(p); ++a) s.add_arrow(a, a, {a, a});
    int named = 0;
    for (int a = 0; a < x.size(p); ++a)
      for (int b = 0; b < x.size(p); ++b)
        if (a != b && e(p, a) == e(p, b)) s.add_arrow(a, b, {a, b}, "r" + std::to_string(named++));
  }
  std::vector<FinGroupoid> stages;
  for (const auto& s : st)
    stages.push_back(s.build([](const Key& g, const Key& f) { return Key{f[0], g[1]}; },
                             [](const Key& k) { return Key{k[1], k[0]}; }));
  auto act = detail::restrictions(
      c, st, [&](int h, const Key& k) { return Key{x.act(h, k[0])}; },
      [&](int h, const Key& k) { return Key{x.act(h, k[0]), x.act(h, k[1])}; });
  return GpdPresheaf(x.base(), std::move(stages), std::move(act));
}

e2t::Presheaf coherent_presheaf(Rng& rng, const CategoryRef& base, PresheafBounds bounds) {
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    auto c = presheaf(rng, base, bounds);
    if (is_coherent_presheaf(c).holds) return c;
  }
  throw GenerationExhausted(0, kRetryCap);
}

GpdPresheaf coherent_eqrel_groupoid(Rng& rng, const CategoryRef& base) {
  if (rng.chance(2, 3)) {
    auto c = coherent_presheaf(rng, base);
    auto w = *is_compact(c);
    NatTransf cover = element_to_map(c, w.obj, w.elem);
    if (rng.chance(1, 2)) return kernel_groupoid(cover);
    // Widen the cover by a second representable mapping to a random element.
    int q = rng.below(base->num_objects());
    if (c.size(q) == 0) return kernel_groupoid(cover);
    NatTransf extra = element_to_map(c, q, rng.below(c.size(q)));
    auto sum = coproduct(cover.source(), extra.source());
    NatTransf::Components comp(idx(base->num_objects()));
    for (int p = 0; p < base->num_objects(); ++p) {
      comp[idx(p)] = cover.component(p);
      for (int y : extra.component(p)) comp[idx(p)].push_back(y);
    }
    return kernel_groupoid(NatTransf(sum.apex, c, std::move(comp)));
  }
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    auto g = groupoid(rng, base, {3, 1, 100});
    if (is_equivalence_relation_gpd(g) && is_coherent_groupoid(g).holds) return g;
  }
  throw GenerationExhausted(0, kRetryCap);
}

WeakEquivalence weak_equivalence(Rng& rng, const CategoryRef& base, GroupoidBounds bounds) {
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    auto g = groupoid(rng, base, bounds);
    switch (rng.below(7)) {
      case 0:
        return {path_groupoid(g).unit, "path-unit"};
      case 1:
        return {path_groupoid(g).dom, "path-leg"};
      case 2:
        if (auto cover = find_pseudo_compact_cover(g)) return {strictify(g, *cover).to_g, "strictification"};
        break;
      case 3:
      case 4: {
        auto a = groupoid(rng, base, {bounds.max_objects, bounds.max_order, 50});
        auto f = random_functor(rng, a, g);
        if (!f) break;
        if (rng.chance(1, 2)) return {factor_trivcof_fib(*f).left, "trivial-cofibration"};
        return {factor_cof_trivfib(*f).right, "trivial-fibration"};
      }
      case 5: {
        auto q = pi0(g).quotient;
        if (is_weak_equivalence(q).holds) return {q, "components"};
        break;
      }
      default: {
        auto a = groupoid(rng, base, bounds);
        auto f = random_functor(rng, a, g);
        if (f && is_weak_equivalence(*f).holds) return {*f, "random"};
        break;
      }
    }
  }
  throw GenerationExhausted(0, kRetryCap);
}

}  // namespace gen

// ---------------------------------------------------------------- lemmas

namespace {

using Clock = std::chrono::steady_clock;

InstanceOutcome pass() { return {}; }

InstanceOutcome inconclusive(std::string why) { return {Verdict::Inconclusive, std::move(why), {}}; }

InstanceOutcome fail(std::string why, const format::Document& doc) {
  std::string dump;
  try {
    dump = format::emit(doc);
  } catch (const Error& e) {
    dump = std::string("# dump failed: ") + e.what() + "\n";
  }
  return {Verdict::Fail, std::move(why), std::move(dump)};
}

format::Document doc_of(std::initializer_list<std::pair<std::string, format::Value>> items) {
  format::Document d;
  for (const auto& [n, v] : items) d.add(n, v);
  return d;
}

CategoryRef any_base(Rng& rng) { return rng.pick(stock::all()); }

CategoryRef one_or_two(Rng& rng) { return rng.chance(1, 2) ? stock::one() : stock::two(); }

std::vector<CategoryRef> lex_bases() { return {stock::one(), stock::two(), stock::commutative_square()}; }

/// Draws until `accept` holds; throws GenerationExhausted.
template <class Make, class Accept>
auto draw(Make&& make, Accept&& accept) {
  for (int attempt = 0; attempt < gen::kRetryCap; ++attempt) {
    auto v = make();
    if (accept(v)) return v;
  }
  throw gen::GenerationExhausted(0, gen::kRetryCap);
}

/// Calls `make` until it yields a value; throws GenerationExhausted.
template <class Make>
auto retry(Make&& make) {
  for (int attempt = 0; attempt < gen::kRetryCap; ++attempt)
    if (auto v = make()) return *v;
  throw gen::GenerationExhausted(0, gen::kRetryCap);
}

std::optional<GpdFunctor> random_functor_between(Rng& rng, const CategoryRef& base, gen::GroupoidBounds b = {3, 2, 40}) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    auto a = gen::groupoid(rng, base, b);
    auto t = gen::groupoid(rng, base, b);
    if (auto f = gen::random_functor(rng, a, t)) return f;
  }
  return std::nullopt;
}

/// A random natural map x -> y, by search with shuffled candidates.
std::optional<NatTransf> random_map(Rng& rng, const Presheaf& x, const Presheaf& y) {
  MapSearchOptions o;
  o.reorder = [&](int, int, std::vector<int>& c) { rng.shuffle(c); };
  std::optional<NatTransf> out;
  search_nat_transfs(x, y, o, [&](const NatTransf& m) {
    out = m;
    return false;
  });
  return out;
}

// ---- coherence from the definition (stage-bounded)

bool trivial_vertex_groups(const GpdPresheaf& g) {
  for (const auto& s : g.stages())
    for (int a = s.num_objects(); a < s.num_arrows(); ++a)
      if (s.dom(a) == s.cod(a)) return false;
  return true;
}

bool compact_discrete(const GpdPresheaf& g) {
  return trivial_vertex_groups(g) && is_compact(pi0(g).components).has_value();
}

bool pseudo_compact_map(const GpdFunctor& f, const std::vector<Presheaf>& compacts) {
  const Presheaf& t0 = f.target().objects();
  for (const auto& k : compacts)
    for (const auto& m : all_nat_transfs(k, t0))
      if (!compact_discrete(pseudo_pullback(from_discrete(f.target(), m), f).apex)) return false;
  return true;
}

bool coherent_by_definition(const GpdPresheaf& g, const std::vector<Presheaf>& compacts) {
  const Presheaf& g0 = g.objects();
  auto comps = pi0(g);
  bool pc = false;
  for (const auto& k : compacts) {
    for (const auto& m : all_nat_transfs(k, g0))
      if (compose(comps.quotient.on_objects(), m).is_epi()) {
        pc = true;
        break;
      }
    if (pc) break;
  }
  if (!pc) return false;
  auto sd = second_diagonal(g);
  return pseudo_compact_map(sd.delta, compacts) && pseudo_compact_map(sd.delta2, compacts);
}

const std::vector<Presheaf>& compacts_over(const CategoryRef& base) {
  static std::map<const FinCategory*, std::vector<Presheaf>> cache;
  auto it = cache.find(base.get());
  if (it != cache.end()) return it->second;
  std::vector<Presheaf> out;
  gen::for_each_presheaf(base, 2, [&](const Presheaf& x) {
    if (is_compact(x)) out.push_back(x);
  });
  return cache.emplace(base.get(), std::move(out)).first->second;
}

/// Restriction functors of a groupoid over One or Two are isofibrations.
bool fibrant_over_two(const GpdPresheaf& g) {
  const FinCategory& c = g.cat();
  for (int h = c.num_objects(); h < c.num_arrows(); ++h) {
    GpdFunctor r(gen::single_stage(g.stage(c.cod(h))), gen::single_stage(g.stage(c.dom(h))), {g.act(h)});
    if (is_isofibration(r).status != CleavageStatus::Cloven) return false;
  }
  return true;
}

// ---- the lemmas

InstanceOutcome disc_gpd_eqv(Rng& rng) {
  auto base = any_base(rng);
  auto g = gen::groupoid(rng, base, {3, 2, 40});
  auto q = pi0(g).quotient;
  auto rq = discrete_target_check(q);
  if (rq.weak != trivial_vertex_groups(g) || !q.on_objects().is_epi())
    return fail("quotient onto components", doc_of({{"G", g}}));
  auto x = gen::presheaf(rng, base, {3, 2, 50});
  auto f = gen::random_functor(rng, g, discrete(x));
  if (!f) return pass();
  auto r = discrete_target_check(*f);
  if (r.weak != is_weak_equivalence(*f).holds) return fail("certificate disagrees with weak equivalence", doc_of({{"F", *f}}));
  if (r.weak && !f->on_objects().is_epi()) return fail("G0 -> X not epic", doc_of({{"F", *f}}));
  return pass();
}

InstanceOutcome pspb_strict(Rng& rng) {
  auto base = any_base(rng);
  auto g = gen::groupoid(rng, base, {3, 2, 40});
  auto x = gen::presheaf(rng, base, {2, 2, 50});
  const Presheaf& g0 = g.objects();
  auto m1 = random_map(rng, x, g0), m2 = random_map(rng, x, g0);
  if (!m1 || !m2) return pass();
  // Strict side: pairs (x, u: m1 x -> m2 x).
  auto pp = product(g0, g0);
  auto strict = pullback(pairing(pp, *m1, *m2), pairing(pp, g.dom_map(), g.cod_map()));
  // Pseudo side: X̲ x_{G x G} G along the diagonal.
  auto gg = product(g, g);
  auto xm = pairing(gg, from_discrete(g, *m1), from_discrete(g, *m2));
  auto ps = pseudo_pullback(xm, diagonal(gg));
  auto dump = [&] { return doc_of({{"X", x}, {"G", g}, {"m1", *m1}, {"m2", *m2}}); };
  auto comps = pi0(ps.apex);
  if (!discrete_target_check(comps.quotient).weak) return fail("pseudo-pullback is not discrete up to equivalence", dump());
  const Presheaf& s = strict.apex;
  const Presheaf& c = comps.components;
  if (s.sizes() != c.sizes()) return fail("component counts differ from the strict pullback", dump());
  // Iso over X: a component lies over the x of any of its objects.
  const FinCategory& cat = *base;
  std::vector<std::vector<int>> over(idx(cat.num_objects()));
  for (int p = 0; p < cat.num_objects(); ++p) {
    over[idx(p)].assign(idx(c.size(p)), -1);
    for (int o = 0; o < ps.apex.stage(p).num_objects(); ++o)
      over[idx(p)][idx(comps.quotient.obj(p, o))] = ps.left.obj(p, o);
  }
  MapSearchOptions opts;
  opts.injective = true;
  opts.allowed = [&](int p, int a, int b) { return strict.left(p, a) == over[idx(p)][idx(b)]; };
  bool found = false;
  search_nat_transfs(s, c, opts, [&](const NatTransf&) {
    found = true;
    return false;
  });
  if (!found) return fail("no isomorphism over X", dump());
  return pass();
}

InstanceOutcome coh_transport(Rng& rng) {
  auto base = any_base(rng);
  auto w = draw([&] { return gen::weak_equivalence(rng, base); },
                [](const gen::WeakEquivalence& e) { return is_coherent_groupoid(e.map.source()).holds; });
  auto src = is_coherent_groupoid(w.map.source());
  try {
    auto t = transport_coherence(w.map, src);
    if (!t.holds || !is_coherent_groupoid(w.map.target()).holds)
      return fail("incoherent target (" + w.construction + ")", doc_of({{"e", w.map}}));
  } catch (const TransportFailure&) {
    return fail("transport failed (" + w.construction + ")", doc_of({{"e", w.map}}));
  }
  return pass();
}

InstanceOutcome coh_transport_back(Rng& rng) {
  auto base = any_base(rng);
  auto f = random_functor_between(rng, base);
  if (!f) return inconclusive("no functor generated");
  auto r = factor_cof_trivfib(*f);
  if (!r.trivfib || !r.trivfib->check()) return fail("trivial fibration witness", doc_of({{"f", *f}}));
  const auto& q = r.right;
  if (is_coherent_groupoid(q.source()).holds != is_coherent_groupoid(q.target()).holds)
    return fail("coherence differs across a trivial fibration", doc_of({{"q", q}}));
  return pass();
}

InstanceOutcome recognize(Rng& rng) {
  auto base = one_or_two(rng);
  auto g = gen::groupoid(rng, base, {3, 2, 40});
  if (coherent_by_definition(g, compacts_over(base)) != is_coherent_groupoid(g).holds)
    return fail("recognition disagrees with the definition", doc_of({{"G", g}}));
  return pass();
}

InstanceOutcome trivfib_strong(Rng& rng) {
  auto f = random_functor_between(rng, any_base(rng));
  if (!f) return inconclusive("no functor generated");
  auto w = *factor_cof_trivfib(*f).trivfib;
  if (!w.check() || !is_objectwise_trivial_fibration(w.q)) return fail("trivial fibration witness", doc_of({{"f", *f}}));
  if (!check_quasi_inverse(w.q, quasi_inverse_from_trivfib(w))) return fail("no strong equivalence", doc_of({{"q", w.q}}));
  return pass();
}

InstanceOutcome discfib_unique_rlp(Rng& rng) {
  auto base = any_base(rng);
  auto f = random_functor_between(rng, base);
  if (!f) return inconclusive("no functor generated");
  auto j = factor_trivcof_fib(*f).left;
  auto [g, bottom] = retry([&]() -> std::optional<std::pair<GpdPresheaf, GpdFunctor>> {
    auto g = gen::groupoid(rng, base, {3, 2, 50});
    auto b = gen::random_functor(rng, j.target(), g);
    if (!b) return std::nullopt;
    return std::pair{g, *b};
  });
  auto pg = path_groupoid(g);
  LiftingSquare sq{j, pg.endpoints, compose(pg.unit, compose(bottom, j)), compose(diagonal(pg.square), bottom)};
  if (!is_discrete_fibration(pg.endpoints)) return fail("endpoints not a discrete fibration", doc_of({{"G", g}}));
  auto n = count_diagonals(sq);
  if (n.exhausted) return inconclusive("diagonal count exhausted");
  if (n.count != 1)
    return fail("found " + std::to_string(n.count) + " diagonals", doc_of({{"j", j}, {"bottom", bottom}}));
  return pass();
}

InstanceOutcome path_fib(Rng& rng) {
  auto g = gen::groupoid(rng, any_base(rng), {3, 2, 40});
  auto r = is_isofibration(path_groupoid(g).endpoints);
  if (r.status == CleavageStatus::Inconclusive) return inconclusive("cleavage search exhausted");
  if (r.status == CleavageStatus::NotIsofibration || !r.witness->check())
    return fail("PG -> G x G has no cleavage", doc_of({{"G", g}}));
  return pass();
}

InstanceOutcome fib_eqv(Rng& rng) {
  auto base = one_or_two(rng);
  auto w = draw([&] { return gen::weak_equivalence(rng, base); },
                [](const gen::WeakEquivalence& e) {
                  return fibrant_over_two(e.map.source()) && fibrant_over_two(e.map.target());
                });
  try {
    auto q = find_quasi_inverse(w.map);
    if (!q || !check_quasi_inverse(w.map, *q))
      return fail("weak equivalence between fibrant objects is not strong (" + w.construction + ")",
                  doc_of({{"e", w.map}}));
  } catch (const SearchExhausted&) {
    return inconclusive("quasi-inverse search exhausted");
  }
  return pass();
}

InstanceOutcome zerotype_eqrel(Rng& rng) {
  auto base = any_base(rng);
  auto g = rng.chance(1, 3) ? gen::coherent_eqrel_groupoid(rng, base) : gen::groupoid(rng, base, {3, 2, 50});
  if (is_0type(g).holds != is_equivalence_relation_gpd(g)) return fail("0-type and eqrel disagree", doc_of({{"G", g}}));
  return pass();
}

InstanceOutcome factor_coh(Rng& rng) {
  auto base = any_base(rng);
  auto f = draw([&] { return random_functor_between(rng, base); },
                [](const std::optional<GpdFunctor>& x) {
                  return x && (is_coherent_groupoid(x->source()).holds || is_coherent_groupoid(x->target()).holds);
                });
  auto a = factor_trivcof_fib(*f), b = factor_cof_trivfib(*f);
  if (compose(a.right, a.left) != *f || compose(b.right, b.left) != *f)
    return fail("factorization does not compose", doc_of({{"f", *f}}));
  if (is_coherent_groupoid(f->source()).holds && !is_coherent_groupoid(a.middle).holds)
    return fail("trivial cofibration middle incoherent", doc_of({{"f", *f}}));
  if (is_coherent_groupoid(f->target()).holds && !is_coherent_groupoid(b.middle).holds)
    return fail("trivial fibration middle incoherent", doc_of({{"f", *f}}));
  return pass();
}

InstanceOutcome main_theorem(Rng& rng) {
  auto base = any_base(rng);
  auto g = gen::coherent_eqrel_groupoid(rng, base);
  try {
    auto r = discretize(g);
    if (!r.check()) return fail("certificates do not replay", doc_of({{"G", g}}));
    if (!find_iso(r.G, pi0(g).components)) return fail("G is not the components of the input", doc_of({{"G", g}}));
  } catch (const Error& e) {
    return fail(e.what(), doc_of({{"G", g}}));
  }
  return pass();
}

InstanceOutcome coh_is_eff(Rng& rng) {
  auto base = rng.pick(lex_bases());
  auto c = gen::presheaf(rng, base);
  if (is_coherent_presheaf(c).holds != exact_presentation(c, PresentationClass::AssemblyLike).has_value())
    return fail("coherence and exact presentation disagree", doc_of({{"C", c}}));
  return pass();
}

InstanceOutcome transport_2cell(Rng& rng) {
  auto base = rng.pick(std::vector<CategoryRef>{stock::one(), stock::two(), stock::trunc_monoid()});
  struct Setup {
    GpdPresheaf g;
    PathGroupoid pg;
    CleavageWitness cleavage;
    GpdFunctor lift;
  };
  auto st = retry([&]() -> std::optional<Setup> {
    auto g = gen::groupoid(rng, base, {3, 2, 30});
    auto pg = path_groupoid(g);
    auto cl = is_isofibration(pg.cod);
    if (!cl.witness) return std::nullopt;
    auto src = gen::groupoid(rng, base, {2, 2, 50});
    auto lift = gen::random_functor(rng, src, pg.path);
    if (!lift) return std::nullopt;
    return Setup{g, pg, *cl.witness, *lift};
  });
  auto f0 = compose(st.pg.dom, st.lift), f1 = compose(st.pg.cod, st.lift);
  std::vector<std::vector<int>> comp;
  for (int p = 0; p < base->num_objects(); ++p) comp.push_back(st.lift.stage(p).obj);
  TwoCell alpha(f0, f1, comp);
  auto t = transport_along_2cell(st.cleavage, f0, f1, alpha);
  if (!check_quasi_inverse(t.forward, t.inverse) || compose(t.along_g.left, t.forward) != t.along_f.left)
    return fail("transport is not an equivalence over F", doc_of({{"G", st.g}, {"al", alpha}}));
  return pass();
}

using LemmaFn = InstanceOutcome (*)(Rng&);

struct Entry {
  LemmaInfo info;
  LemmaFn run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{"disc-gpd-eqv", "a weak equivalence onto a discrete groupoid is epic on objects"}, disc_gpd_eqv},
      {{"pspb-strict", "pseudo-pullback of the diagonal along a discrete map is the strict pullback of G1"}, pspb_strict},
      {{"coh-transport", "weak equivalences carry coherent sources to coherent targets"}, coh_transport},
      {{"coh-transport-back", "trivial fibrations reflect and preserve coherence"}, coh_transport_back},
      {{"recognize", "recognition conditions agree with the definition of coherence"}, recognize},
      {{"trivfib-strong", "a trivial fibration is a strong equivalence"}, trivfib_strong},
      {{"discfib-unique-rlp", "discrete fibrations lift uniquely against trivial cofibrations"}, discfib_unique_rlp},
      {{"path-fib", "PG -> G x G is cloven"}, path_fib},
      {{"fib-eqv", "a weak equivalence between fibrant objects is strong"}, fib_eqv},
      {{"zerotype-eqrel", "0-types are exactly the equivalence-relation groupoids"}, zerotype_eqrel},
      {{"factor-coh", "factorizations keep coherence in the middle object"}, factor_coh},
      {{"main-theorem", "coherent 0-types discretize to coherent presheaves"}, main_theorem},
      {{"coh-is-eff", "coherent iff exactly presented by assembly-like kernels"}, coh_is_eff},
      {{"transport-2cell", "transport along a 2-cell is an equivalence"}, transport_2cell},
  };
  return e;
}

}  // namespace

const std::vector<LemmaInfo>& lemma_registry() {
  static const std::vector<LemmaInfo> infos = [] {
    std::vector<LemmaInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

LemmaReport verify_lemma(const std::string& id, int count, std::uint64_t seed) {
  const Entry* entry = nullptr;
  for (const auto& e : entries())
    if (e.info.id == id) entry = &e;
  if (!entry) throw UnknownLemma(id);
  auto start = Clock::now();
  LemmaReport r{id, 0, 0, 0, seed, 0, {}};
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng(seed).fork(static_cast<std::uint64_t>(i));
    InstanceOutcome out;
    try {
      out = entry->run(rng);
    } catch (const gen::GenerationExhausted& e) {
      out = inconclusive(e.what());
    } catch (const SearchExhausted& e) {
      out = inconclusive(e.what());
    } catch (const Error& e) {
      out = {Verdict::Fail, e.what(), {}};
    }
    ++r.instances;
    if (out.verdict == Verdict::Fail) ++r.failures;
    if (out.verdict == Verdict::Inconclusive) ++r.inconclusive;
    if (out.verdict != Verdict::Pass) r.notes.emplace_back(i, std::move(out));
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

}  // namespace e2t
