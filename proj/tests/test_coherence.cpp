#include "coherence_oracle.hpp"
#include "doctest.h"
#include "e2t/coherence.hpp"
#include "e2t/generate.hpp"

using namespace e2t;

namespace {

GpdPresheaf bz2() { return gen::single_stage(gen::block_groupoid({{1, 2}})); }
GpdPresheaf pair(int n) { return gen::single_stage(gen::block_groupoid({{n, 1}})); }

/// Over Two: one element at a, two at b.
Presheaf non_compact() { return Presheaf(stock::two(), {1, 2}, {{0}, {0, 1}, {0, 0}}); }

}  // namespace

TEST_CASE("pseudo-compact covers") {
  for (const auto& base : stock::all())
    for (int p = 0; p < base->num_objects(); ++p) {
      auto r = find_pseudo_compact_cover(discrete(yoneda(base, p)));
      REQUIRE(r);
      CHECK(r->obj == p);
      CHECK(r->elem == 0);
    }
  auto pr = find_pseudo_compact_cover(pair(2));
  REQUIRE(pr);
  CHECK(pr->elem == 0);
  CHECK(is_eso_element(pair(2), 0, 1));
  CHECK_FALSE(find_pseudo_compact_cover(discrete(non_compact())));
  CHECK_FALSE(find_pseudo_compact_cover(empty_gpd(stock::one())));
  CHECK_FALSE(find_pseudo_compact_cover(gen::single_stage(gen::block_groupoid({{1, 1}, {1, 1}}))));
}

TEST_CASE("strictification examples") {
  auto two = stock::two();
  for (int p = 0; p < 2; ++p) {
    auto d = discrete(yoneda(two, p));
    auto s = strictify(d, {p, 0});
    CHECK(s.k.is_discrete());
    CHECK(s.k.objects() == yoneda(two, p));
    CHECK(s.weak.holds);
  }
  auto s = strictify(pair(2), {0, 1});
  CHECK(s.k.stage(0).num_objects() == 1);
  CHECK(s.k.stage(0).num_arrows() == 1);
  CHECK(s.weak.holds);
  CHECK(s.to_g.obj(0, 0) == 1);
  auto b = strictify(bz2(), {0, 0});
  CHECK(b.k.stage(0).num_arrows() == 2);
  CHECK(b.weak.holds);
  CHECK_THROWS_AS(strictify(bz2(), {0, 3}), PreconditionError);
}

TEST_CASE("strictification is a weak equivalence on random groupoids") {
  Rng rng(2);
  int seen = 0;
  for (const auto& base : stock::all())
    for (int i = 0; i < 60; ++i) {
      auto g = gen::groupoid(rng, base, {3, 2, 40});
      auto cover = find_pseudo_compact_cover(g);
      if (!cover) continue;
      ++seen;
      auto s = strictify(g, *cover);
      CHECK_NOTHROW(s.k.validate());
      CHECK(s.weak.holds);
      CHECK(s.k.objects() == yoneda(base, cover->obj));
    }
  CHECK(seen > 40);
}

TEST_CASE("coherence examples") {
  CHECK(is_coherent_groupoid(terminal_gpd(stock::one())).holds);
  CHECK(is_coherent_groupoid(pair(3)).holds);
  auto nc = is_coherent_groupoid(discrete(non_compact()));
  CHECK_FALSE(nc.holds);
  CHECK_FALSE(nc.pseudo_compact);
  // BZ2 over One: K1 is the two-element vertex group over a point, not
  // compact, and the diagonal misses the pair (id, s).
  auto b = is_coherent_groupoid(bz2());
  CHECK(b.pseudo_compact);
  CHECK_FALSE(b.cond2.holds);
  REQUIRE(b.cond2.failure);
  CHECK(b.cond2.failure->first == 0);
  CHECK_FALSE(b.cond3.holds);
  CHECK(b.k1_pair->apex.size(0) == 4);
  CHECK_FALSE(b.holds);
  // Over the parallel pair y(b) is compact but its diagonal is not; for a
  // discrete groupoid K1 -> K0 x K0 is that diagonal, and K1 -> K1 x K1 over
  // it is an isomorphism.
  auto pp = is_coherent_groupoid(discrete(yoneda(stock::parallel_pair(), 1)));
  CHECK_FALSE(pp.cond2.holds);
  CHECK(pp.cond3.holds);
}

TEST_CASE("discrete coherence matches presheaf coherence") {
  for (const auto& base : stock::all()) {
    Rng rng(6);
    for (int i = 0; i < 60; ++i) {
      Presheaf c = gen::presheaf(rng, base);
      CHECK(is_coherent_groupoid(discrete(c)).holds == is_coherent_presheaf(c).holds);
    }
  }
  gen::for_each_presheaf(stock::two(), 3, [](const Presheaf& c) {
    CHECK(is_coherent_groupoid(discrete(c)).holds == is_coherent_presheaf(c).holds);
  });
}

TEST_CASE("second diagonal") {
  for (const auto& base : stock::all()) {
    Rng rng(15);
    for (int i = 0; i < 10; ++i) {
      auto g = gen::groupoid(rng, base, {3, 2, 40});
      auto sd = second_diagonal(g);
      CHECK_NOTHROW(sd.delta2.validate());
      CHECK(compose(sd.paths.left, sd.delta2) == identity(g));
      CHECK(compose(sd.paths.right, sd.delta2) == identity(g));
    }
  }
}

TEST_CASE("definition agrees with recognition over One") {
  auto one = stock::one();
  auto compacts = oracle::compact_presheaves(one, 3);
  CHECK(compacts.size() == 1);
  int coherent = 0, total = 0;
  gen::for_each_groupoid_presheaf(one, 3, 2, [&](const GpdPresheaf& g) {
    auto d = oracle::coherent_by_definition(g, compacts);
    auto r = is_coherent_groupoid(g);
    CHECK(d.holds() == r.holds);
    CHECK(d.pseudo_compact == r.pseudo_compact.has_value());
    coherent += r.holds;
    ++total;
  });
  CHECK(total == 18);
  // Exactly the nonempty codiscrete ones.
  CHECK(coherent == 3);
}

TEST_CASE("definition agrees with recognition on random groupoids") {
  for (const auto& base : {stock::two(), stock::commutative_square(), stock::parallel_pair()}) {
    auto compacts = oracle::compact_presheaves(base, 2);
    Rng rng(27);
    for (int i = 0; i < 25; ++i) {
      auto g = gen::groupoid(rng, base, {2, 2, 50});
      CHECK(oracle::coherent_by_definition(g, compacts).holds() == is_coherent_groupoid(g).holds);
    }
  }
}

TEST_CASE("coherence transport") {
  auto p = pair(2);
  auto src = is_coherent_groupoid(p);
  auto same = transport_coherence(identity(p), src);
  CHECK(same.holds == src.holds);
  CHECK(same.pseudo_compact->elem == src.pseudo_compact->elem);
  CHECK_THROWS_AS(transport_coherence(to_terminal(bz2()), is_coherent_groupoid(bz2())), PreconditionError);
  Rng rng(33);
  int coherent_sources = 0;
  for (const auto& base : stock::all())
    for (int i = 0; i < 40; ++i) {
      auto g = gen::groupoid(rng, base, {3, 2, 50});
      auto rep = is_coherent_groupoid(g);
      auto pg = path_groupoid(g);
      // g -> PG, PG -> g and a strictification into g are all weak equivalences.
      CHECK_NOTHROW(transport_coherence(pg.unit, rep));
      auto back = is_coherent_groupoid(pg.path);
      CHECK(back.holds == rep.holds);
      CHECK_NOTHROW(transport_coherence(pg.dom, back));
      if (rep.strictified) {
        auto k = is_coherent_groupoid(rep.strictified->k);
        CHECK(k.holds == rep.holds);
        CHECK_NOTHROW(transport_coherence(rep.strictified->to_g, k));
      }
      coherent_sources += rep.holds;
    }
  CHECK(coherent_sources > 10);
}
