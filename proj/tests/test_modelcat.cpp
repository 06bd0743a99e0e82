#include "doctest.h"
#include "e2t/coherence.hpp"
#include "e2t/generate.hpp"
#include "e2t/modelcat.hpp"

using namespace e2t;

namespace {

GpdPresheaf bz2() { return gen::single_stage(gen::block_groupoid({{1, 2}})); }
GpdPresheaf pair(int n) { return gen::single_stage(gen::block_groupoid({{n, 1}})); }
GpdPresheaf point() { return terminal_gpd(stock::one()); }

GpdFunctor pick(const GpdPresheaf& g, int x) { return GpdFunctor(point(), g, {StageFunctor{{x}, {x}}}); }

/// Codiagonal BZ2 + BZ2 -> BZ2.
GpdFunctor fold() {
  return GpdFunctor(gen::single_stage(gen::block_groupoid({{1, 2}, {1, 2}})), bz2(), {StageFunctor{{0, 0}, {0, 0, 1, 1}}});
}

std::vector<GpdFunctor> random_functors(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<GpdFunctor> out;
  const auto bases = stock::all();
  while (static_cast<int>(out.size()) < count) {
    const auto& base = bases[rng.below(bases.size())];
    auto a = gen::groupoid(rng, base, {3, 2, 50});
    auto b = gen::groupoid(rng, base, {3, 2, 50});
    if (auto f = gen::random_functor(rng, a, b)) out.push_back(*f);
  }
  return out;
}

}  // namespace

TEST_CASE("cofibration examples") {
  auto g = bz2();
  CHECK(is_cofibration(identity(g)));
  CHECK(is_cofibration(path_groupoid(g).unit));
  CHECK_FALSE(is_cofibration(fold()));
  CHECK_FALSE(is_cofibration(to_terminal(pair(2))));
  CHECK(is_cofibration(pick(pair(2), 1)));
}

TEST_CASE("trivial cofibration / fibration factorization examples") {
  auto g = bz2();
  auto r = factor_trivcof_fib(identity(g));
  auto pg = path_groupoid(g);
  CHECK(r.middle.stage(0).num_objects() == pg.path.stage(0).num_objects());
  CHECK(r.middle.stage(0).num_arrows() == pg.path.stage(0).num_arrows());
  auto p = factor_trivcof_fib(pick(g, 0));
  CHECK(p.middle.stage(0).num_objects() == 2);
  REQUIRE(p.cleavage);
  CHECK(p.cleavage->check());
  CHECK(p.cleavage->normal);
  CHECK(compose(p.right, p.left) == pick(g, 0));
}

TEST_CASE("trivial cofibration / fibration factorization properties") {
  for (const auto& f : random_functors(4, 80)) {
    auto r = factor_trivcof_fib(f);
    CHECK_NOTHROW(r.middle.validate());
    CHECK(compose(r.right, r.left) == f);
    CHECK(is_cofibration(r.left));
    CHECK(is_weak_equivalence(r.left).holds);
    REQUIRE(r.left_equivalence);
    CHECK(check_quasi_inverse(r.left, *r.left_equivalence));
    REQUIRE(r.cleavage);
    CHECK(r.cleavage->check());
    CHECK(is_isofibration(r.right).status == CleavageStatus::Cloven);
  }
}

TEST_CASE("cofibration / trivial fibration factorization examples") {
  auto g = bz2();
  auto r = factor_cof_trivfib(identity(g));
  CHECK(r.middle.stage(0).num_objects() == 2);
  CHECK(r.middle.stage(0).num_arrows() == 8);
  REQUIRE(r.trivfib);
  CHECK(r.trivfib->check());
  auto e = factor_cof_trivfib(GpdFunctor(empty_gpd(stock::one()), g, {StageFunctor{}}));
  CHECK(e.middle.stage(0).num_objects() == 1);
  CHECK(e.left.stage(0).obj.empty());
}

TEST_CASE("cofibration / trivial fibration factorization properties") {
  for (const auto& f : random_functors(5, 80)) {
    auto r = factor_cof_trivfib(f);
    CHECK_NOTHROW(r.middle.validate());
    CHECK(compose(r.right, r.left) == f);
    CHECK(is_cofibration(r.left));
    REQUIRE(r.trivfib);
    CHECK(r.trivfib->check());
    CHECK(is_objectwise_trivial_fibration(r.right));
    auto qi = quasi_inverse_from_trivfib(*r.trivfib);
    CHECK(check_quasi_inverse(r.right, qi));
  }
}

TEST_CASE("factorizations preserve coherence into the middle") {
  int coherent = 0;
  for (const auto& f : random_functors(6, 80)) {
    if (is_coherent_groupoid(f.source()).holds) {
      ++coherent;
      CHECK(is_coherent_groupoid(factor_trivcof_fib(f).middle).holds);
    }
    if (is_coherent_groupoid(f.target()).holds) CHECK(is_coherent_groupoid(factor_cof_trivfib(f).middle).holds);
  }
  CHECK(coherent > 5);
}

TEST_CASE("quasi-inverse from a trivial fibration") {
  auto g = bz2();
  auto w = TrivFibWitness{identity(g), identity(g), identity_cell(identity(g))};
  CHECK(w.check());
  auto qi = quasi_inverse_from_trivfib(w);
  CHECK(qi.inverse == identity(g));
  CHECK(qi.unit == identity_cell(identity(g)));
  auto r = factor_cof_trivfib(pick(g, 0));
  REQUIRE(r.trivfib);
  CHECK(check_quasi_inverse(r.right, quasi_inverse_from_trivfib(*r.trivfib)));
}

TEST_CASE("lift examples") {
  auto g = bz2();
  auto r = factor_cof_trivfib(pick(g, 0));
  const auto& w = *r.trivfib;
  auto e = r.middle;
  // i = identity: the lift is the top map.
  auto top = compose(w.s, identity(g));
  LiftingSquare sq{identity(g), w.q, top, identity(g)};
  CHECK(lift(sq, w) == top);
  // From the empty groupoid: the lift is s . bottom.
  auto empty = empty_gpd(stock::one());
  GpdFunctor from_empty(empty, g, {StageFunctor{}});
  GpdFunctor into_e(empty, e, {StageFunctor{}});
  LiftingSquare sq2{from_empty, w.q, into_e, identity(g)};
  CHECK(lift(sq2, w) == w.s);
  LiftingSquare bad{to_terminal(pair(2)), w.q, compose(w.s, pick(g, 0)), pick(g, 0)};
  CHECK_THROWS_AS(lift(bad, w), Error);
  LiftingSquare off{identity(g), w.q, top, compose(pick(g, 0), to_terminal(g))};
  CHECK_THROWS_AS(lift(off, w), SquareDoesNotCommute);
  CHECK_THROWS_AS(lift(LiftingSquare{fold(), w.q,
                                     compose(w.s, fold()), identity(g)},
                       w),
                  NotACofibration);
}

TEST_CASE("lifts on random squares") {
  Rng rng(19);
  int solved = 0;
  for (const auto& f : random_functors(7, 60)) {
    // Cofibration: the F0 inclusion of a collage; trivial fibration: another
    // collage map onto the bottom's target.
    auto i = factor_cof_trivfib(f).left;
    const auto& b = i.target();
    auto target = gen::groupoid(rng, b.base(), {3, 2, 50});
    auto bottom = gen::random_functor(rng, b, target);
    auto src = gen::groupoid(rng, b.base(), {2, 2, 50});
    auto h = gen::random_functor(rng, src, target);
    if (!bottom || !h) continue;
    auto w = *factor_cof_trivfib(*h).trivfib;
    auto top = compose(w.s, compose(*bottom, i));
    LiftingSquare sq{i, w.q, top, *bottom};
    REQUIRE(sq.commutes());
    auto d = lift(sq, w);
    CHECK(compose(d, i) == top);
    CHECK(compose(w.q, d) == *bottom);
    CHECK(has_rlp(sq));
    ++solved;
  }
  CHECK(solved > 20);
}

TEST_CASE("discrete fibrations have unique diagonals against trivial cofibrations") {
  Rng rng(29);
  int squares = 0;
  for (const auto& f : random_functors(8, 60)) {
    auto j = factor_trivcof_fib(f).left;
    const auto& b = j.target();
    auto g = gen::groupoid(rng, b.base(), {3, 2, 50});
    auto bottom = gen::random_functor(rng, b, g);
    if (!bottom) continue;
    auto pg = path_groupoid(g);
    // Lift bottom . j through the discrete fibration PG -> G x G.
    auto corner = compose(*bottom, j);
    auto top = compose(pg.unit, corner);
    LiftingSquare sq{j, pg.endpoints, top, compose(diagonal(pg.square), *bottom)};
    REQUIRE(sq.commutes());
    auto n = count_diagonals(sq);
    CHECK_FALSE(n.exhausted);
    CHECK(n.count == 1);
    ++squares;
  }
  CHECK(squares > 20);
}

TEST_CASE("equivalence relations and 0-types") {
  CHECK(is_equivalence_relation_gpd(discrete(yoneda(stock::two(), 1))));
  CHECK(is_equivalence_relation_gpd(pair(2)));
  CHECK_FALSE(is_equivalence_relation_gpd(bz2()));
  CHECK(is_0type(discrete(yoneda(stock::two(), 1))).holds);
  CHECK(is_0type(pair(2)).holds);
  auto b = is_0type(bz2());
  CHECK_FALSE(b.holds);
  CHECK(b.h.apex.stage(0).num_objects() == 4);
  CHECK(b.weak.reason == "not essentially surjective");
  for (const auto& base : stock::all()) {
    Rng rng(37);
    for (int i = 0; i < 40; ++i) {
      auto g = gen::groupoid(rng, base, {3, 2, 40});
      CHECK(is_0type(g).holds == is_equivalence_relation_gpd(g));
    }
  }
  gen::for_each_groupoid_presheaf(stock::one(), 3, 2, [](const GpdPresheaf& g) {
    CHECK(is_0type(g).holds == is_equivalence_relation_gpd(g));
  });
}
