#include <set>

#include "coherence_oracle.hpp"
#include "doctest.h"
#include "e2t/effective.hpp"
#include "e2t/format.hpp"
#include "e2t/modelcat.hpp"

using namespace e2t;

namespace {

GpdPresheaf bz2() { return gen::single_stage(gen::block_groupoid({{1, 2}})); }
GpdPresheaf pair(int n) { return gen::single_stage(gen::block_groupoid({{n, 1}})); }

/// Over Two: one element at a, two at b.
Presheaf non_compact() { return Presheaf(stock::two(), {1, 2}, {{0}, {0, 1}, {0, 0}}); }

std::vector<CategoryRef> lex_bases() {
  std::vector<CategoryRef> out;
  for (const auto& b : stock::all())
    if (is_lex_base(b)) out.push_back(b);
  return out;
}

}  // namespace

TEST_CASE("discretize examples") {
  auto d = discretize(pair(2));
  CHECK(d.G.sizes() == std::vector<int>{1});
  CHECK(d.check());
  CHECK(d.presentation.kernel_pair);
  CHECK(d.presentation.coequalizer);
  CHECK(d.certificate.weak);
  CHECK(d.certificate.strong);
  CHECK_THROWS_AS(discretize(bz2()), NotZeroType);
  CHECK_THROWS_AS(discretize(discrete(non_compact())), NotCoherent);
  CHECK_THROWS_AS(discretize(empty_gpd(stock::one())), NotCoherent);
  for (const auto& base : lex_bases())
    for (int p = 0; p < base->num_objects(); ++p) {
      auto y = discretize(discrete(yoneda(base, p)));
      CHECK(find_iso(y.G, yoneda(base, p)));
    }
}

TEST_CASE("discretize agrees with the components oracle") {
  Rng rng(3);
  int seen = 0;
  for (const auto& base : stock::all())
    for (int i = 0; i < 40; ++i) {
      auto g = gen::coherent_eqrel_groupoid(rng, base);
      auto d = discretize(g);
      CAPTURE(format::emit([&] {
        format::Document doc;
        doc.add("G", g);
        return doc;
      }()));
      CHECK(d.check());
      CHECK(find_iso(d.G, oracle::components(g)));
      CHECK(d.coherence.holds);
      CHECK(d.presheaf_coherence.holds);
      // Idempotent up to iso.
      CHECK(find_iso(discretize(discrete(d.G)).G, d.G));
      ++seen;
    }
  CHECK(seen == 200);
}

TEST_CASE("discrete coherent presheaves come back") {
  Rng rng(5);
  for (const auto& base : lex_bases())
    for (int i = 0; i < 25; ++i) {
      auto c = gen::coherent_presheaf(rng, base, {3, 2, 50});
      CHECK(find_iso(discretize(discrete(c)).G, c));
    }
}

TEST_CASE("classify examples") {
  for (const auto& base : lex_bases())
    for (int p = 0; p < base->num_objects(); ++p) {
      auto c = classify(yoneda(base, p));
      CHECK(c.is_ind_proj());
      CHECK(c.is_compact());
      CHECK(c.is_coherent());
      CHECK(c.is_assembly_like());
      CHECK(c.lex_base);
      CHECK(c.chain_consistent());
    }
  auto t = classify(terminal(stock::two()));
  CHECK(t.is_ind_proj());
  CHECK(t.is_compact());
  CHECK(t.is_coherent());
  CHECK(t.is_assembly_like());
  REQUIRE(t.compact);
  CHECK(t.compact->obj == 1);
  auto i = classify(initial(stock::two()));
  CHECK_FALSE(i.is_ind_proj());
  CHECK_FALSE(i.is_compact());
  CHECK_FALSE(i.is_coherent());
  CHECK_FALSE(i.is_assembly_like());
  CHECK(i.chain_consistent());
  auto two = classify(Presheaf(stock::one(), {2}, {{0, 1}}));
  CHECK_FALSE(two.is_compact());
  CHECK_FALSE(two.is_assembly_like());
}

TEST_CASE("classification chain on random presheaves") {
  Rng rng(7);
  int lex = 0;
  for (int i = 0; i < 500; ++i) {
    const auto bases = stock::all();
    const auto& base = bases[static_cast<std::size_t>(rng.below(static_cast<int>(bases.size())))];
    auto x = gen::presheaf(rng, base, {3, 2, 50});
    auto c = classify(x);
    CHECK(c.chain_consistent());
    CHECK(c.is_compact() == oracle::compact(x));
    if (c.lex_base) ++lex;
  }
  CHECK(lex > 100);
}

TEST_CASE("generation is deterministic") {
  gen::Bounds b{stock::two()};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    CHECK(std::get<Presheaf>(gen::generate(gen::Kind::Presheaf, seed, b)) ==
          std::get<Presheaf>(gen::generate(gen::Kind::Presheaf, seed, b)));
    CHECK(std::get<GpdPresheaf>(gen::generate(gen::Kind::Groupoid, seed, b)) ==
          std::get<GpdPresheaf>(gen::generate(gen::Kind::Groupoid, seed, b)));
    CHECK(std::get<GpdFunctor>(gen::generate(gen::Kind::Functor, seed, b)) ==
          std::get<GpdFunctor>(gen::generate(gen::Kind::Functor, seed, b)));
    CHECK(*std::get<Site>(gen::generate(gen::Kind::Site, seed, b)).category ==
          *std::get<Site>(gen::generate(gen::Kind::Site, seed, b)).category);
  }
}

TEST_CASE("generated groupoids pass the loader") {
  gen::Bounds b{stock::two()};
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto g = std::get<GpdPresheaf>(gen::generate(gen::Kind::Groupoid, seed, b));
    CHECK(g.stage(0).num_objects() <= b.max_stage);
    format::Document doc;
    doc.add("G", g);
    auto text = format::emit(doc);
    distinct.insert(text);
    auto back = format::parse(text);
    const auto* h = back.get<GpdPresheaf>("G");
    REQUIRE(h);
    CHECK(*h == g);
  }
  CHECK(distinct.size() > 100);
}

TEST_CASE("weak equivalence constructions") {
  Rng rng(13);
  std::set<std::string> kinds;
  for (int i = 0; i < 150; ++i) {
    auto w = gen::weak_equivalence(rng, stock::two());
    CAPTURE(w.construction);
    CHECK(is_weak_equivalence(w.map).holds);
    kinds.insert(w.construction);
  }
  CHECK(kinds.size() >= 5);
}

TEST_CASE("lemma harness") {
  CHECK(lemma_registry().size() == 14);
  auto z = verify_lemma("zerotype-eqrel", 500, 42);
  CHECK(z.instances == 500);
  CHECK(z.failures == 0);
  auto m = verify_lemma("main-theorem", 200, 7);
  CHECK(m.failures == 0);
  CHECK(m.inconclusive == 0);
  CHECK_THROWS_AS(verify_lemma("no-such-lemma", 1, 0), UnknownLemma);
  for (const auto& info : lemma_registry()) {
    CAPTURE(info.id);
    auto a = verify_lemma(info.id, 15, 3);
    auto b = verify_lemma(info.id, 15, 3);
    CHECK(a.failures == 0);
    CHECK(a.failures == b.failures);
    CHECK(a.inconclusive == b.inconclusive);
    CHECK(a.notes.size() == b.notes.size());
  }
}
