#include "doctest.h"
#include "e2t/generate.hpp"
#include "e2t/presheaf.hpp"
#include "presheaf_oracle.hpp"

using namespace e2t;

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

// Over Two: stage a = {x}, stage b empty.
Presheaf only_a() {
  auto c = stock::two();
  return Presheaf(c, {1, 0}, {{0}, {}, {}});
}

// Over Two: stage a empty, stage b = {y}. Not functorial unless act f is empty
// on an empty stage a, which is impossible for a nonempty b.
Presheaf only_b_unchecked() {
  auto c = stock::two();
  return Presheaf::unchecked(c, {0, 1}, {{}, {0}, {0}});
}

std::vector<Presheaf> random_presheaves(std::uint64_t seed, const CategoryRef& base, int count) {
  Rng rng(seed);
  std::vector<Presheaf> out;
  for (int i = 0; i < count; ++i) out.push_back(gen::presheaf(rng, base));
  return out;
}

}  // namespace

TEST_CASE("stock bases load and have the expected shape") {
  CHECK(stock::one()->num_arrows() == 1);
  CHECK(stock::two()->num_arrows() == 3);
  CHECK(stock::parallel_pair()->hom(0, 1).size() == 2);
  CHECK(stock::commutative_square()->is_preorder());
  CHECK(stock::trunc_monoid()->num_arrows() == 3);
  CHECK(stock::all().size() == 5);
}

TEST_CASE("category loader rejects broken tables") {
  FinCategory::Builder b("Bad");
  int o = b.add_object("o");
  int t = b.add_arrow("t", o, o);
  CHECK_THROWS_AS(b.build(), InvariantViolation);  // t . t missing
  b.set_composite(t, t, o);
  CHECK_NOTHROW(b.build());
  FinCategory::Builder e("Empty");
  CHECK_THROWS_AS(e.build(), InvariantViolation);
  FinCategory::Builder na("NonAssoc");
  int p = na.add_object("p");
  int s = na.add_arrow("s", p, p);
  int r = na.add_arrow("r", p, p);
  na.set_composite(s, s, p);
  na.set_composite(r, r, r);
  na.set_composite(s, r, s);
  na.set_composite(r, s, s);
  CHECK_THROWS_AS(na.build(), InvariantViolation);
}

TEST_CASE("yoneda over Two and One") {
  auto c = stock::two();
  Presheaf ya = yoneda(c, 0);
  CHECK(ya.sizes() == std::vector<int>{1, 0});
  Presheaf yb = yoneda(c, 1);
  CHECK(yb.sizes() == std::vector<int>{1, 1});
  CHECK(yb.label(0, 0) == "f");
  CHECK(yb.label(1, 0) == "id_b");
  CHECK_NOTHROW(ya.validate());
  CHECK_NOTHROW(yb.validate());
  CHECK(yoneda(stock::one(), 0) == terminal(stock::one()));
}

TEST_CASE("element_to_map examples") {
  auto c = stock::two();
  Presheaf yb = yoneda(c, 1);
  CHECK(element_to_map(yb, 1, 0) == identity(yb));
  auto m = element_to_map(terminal(c), 1, 0);
  CHECK(m.is_epi());
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("presheaf loader rejects non-functorial actions") {
  auto c = stock::two();
  CHECK_THROWS_AS(Presheaf(c, {2, 1}, {{1, 0}, {0}, {0}}), InvariantViolation);
  CHECK_THROWS_AS(only_b_unchecked().validate(), InvariantViolation);
  CHECK_THROWS_AS(Presheaf(c, {1, 1}, {{0}, {0}, {3}}), InvariantViolation);
}

TEST_CASE("Yoneda bijection against brute force on random presheaves") {
  for (const auto& base : stock::all())
    for (const auto& x : random_presheaves(31, base, 40)) {
      for (int p = 0; p < base->num_objects(); ++p) {
        auto yp = yoneda(base, p);
        auto brute = oracle::nat_transfs(yp, x);
        auto fast = all_nat_transfs(yp, x);
        REQUIRE(static_cast<int>(brute.size()) == x.size(p));
        REQUIRE(fast.size() == brute.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
          CHECK(fast[i].components() == brute[i]);
          CHECK(map_to_element(fast[i], p) == static_cast<int>(i));
          CHECK(element_to_map(x, p, static_cast<int>(i)) == fast[i]);
        }
      }
    }
}

TEST_CASE("exhaustive presheaf enumeration counts") {
  int n1 = 0, n2 = 0;
  gen::for_each_presheaf(stock::one(), 3, [&](const Presheaf&) { ++n1; });
  gen::for_each_presheaf(stock::two(), 2, [&](const Presheaf& x) {
    CHECK_NOTHROW(x.validate());
    ++n2;
  });
  CHECK(n1 == 4);
  // sizes (sa, sb) in 0..2, act f maps stage b to stage a: sum of sa^sb.
  CHECK(n2 == 1 + 0 + 0 + 1 + 1 + 1 + 1 + 2 + 4);
}

TEST_CASE("kernel pair, coequalizer and pullback examples") {
  auto c = stock::two();
  Presheaf x = Presheaf(c, {2, 1}, {{0, 1}, {0}, {1}});
  auto kp = kernel_pair(identity(x));
  CHECK(kp.left == kp.right);
  CHECK(kp.left.is_iso());
  auto q = coequalize_eqrel(kp.left, kp.right);
  CHECK(q.quotient.sizes() == x.sizes());
  CHECK(q.projection.is_iso());

  Presheaf yb = yoneda(c, 1);
  auto pb = pullback(to_terminal(yb), to_terminal(yb));
  CHECK(pb.apex.sizes() == std::vector<int>{1, 1});
  CHECK(pb.left(0, 0) == 0);
  CHECK(pb.right(0, 0) == 0);
}

TEST_CASE("coequalize_eqrel rejects non-equivalence relations") {
  auto c = stock::one();
  Presheaf two = Presheaf(c, {2}, {{0, 1}});
  Presheaf one = terminal(c);
  NatTransf r1(one, two, {{0}}), r2(one, two, {{1}});
  CHECK_THROWS_AS(coequalize_eqrel(r1, r2), NotEquivalenceRelation);
}

TEST_CASE("pullback universal property by enumeration") {
  Rng rng(3);
  for (const auto& base : {stock::two(), stock::parallel_pair(), stock::trunc_monoid()})
    for (int i = 0; i < 15; ++i) {
      Presheaf a = gen::presheaf(rng, base, {3, 2, 50});
      Presheaf b = gen::presheaf(rng, base, {3, 2, 50});
      Presheaf cc = gen::presheaf(rng, base, {3, 2, 50});
      auto fs = all_nat_transfs(a, cc), gs = all_nat_transfs(b, cc);
      if (fs.empty() || gs.empty()) continue;
      const NatTransf& f = fs[u(rng.below(static_cast<int>(fs.size())))];
      const NatTransf& g = gs[u(rng.below(static_cast<int>(gs.size())))];
      auto pb = pullback(f, g);
      CHECK_NOTHROW(pb.apex.validate());
      CHECK(compose(f, pb.left) == compose(g, pb.right));
      for (int p = 0; p < base->num_objects(); ++p) {
        auto t = yoneda(base, p);
        std::size_t cones = 0;
        for (const auto& l : oracle::nat_transfs(t, a))
          for (const auto& r : oracle::nat_transfs(t, b)) {
            bool ok = true;
            for (int o = 0; o < base->num_objects() && ok; ++o)
              for (int e = 0; e < t.size(o) && ok; ++e) ok = f(o, l[u(o)][u(e)]) == g(o, r[u(o)][u(e)]);
            cones += ok;
          }
        CHECK(oracle::nat_transfs(t, pb.apex).size() == cones);
      }
    }
}

TEST_CASE("coequalizer universal property by enumeration") {
  Rng rng(4);
  for (const auto& base : {stock::one(), stock::two(), stock::trunc_monoid()})
    for (int i = 0; i < 15; ++i) {
      Presheaf a = gen::presheaf(rng, base, {3, 2, 0});
      std::vector<std::tuple<int, int, int>> pairs;
      if (a.size(0) > 1) pairs.emplace_back(0, 0, 1);
      auto merged = gen::quotient_by_pairs(a, pairs);
      auto kp = kernel_pair(merged.projection);
      auto q = coequalize_eqrel(kp.left, kp.right);
      CHECK(find_iso(q.quotient, merged.quotient).has_value());
      Presheaf z = gen::presheaf(rng, base, {3, 2, 50});
      std::size_t compatible = 0;
      for (const auto& m : oracle::nat_transfs(a, z)) {
        bool ok = true;
        for (int o = 0; o < base->num_objects() && ok; ++o)
          for (int k = 0; k < kp.apex.size(o) && ok; ++k)
            ok = m[u(o)][u(kp.left(o, k))] == m[u(o)][u(kp.right(o, k))];
        compatible += ok;
      }
      CHECK(oracle::nat_transfs(q.quotient, z).size() == compatible);
    }
}

TEST_CASE("epi and mono against independent characterizations") {
  Rng rng(5);
  for (const auto& base : stock::all())
    for (int i = 0; i < 20; ++i) {
      Presheaf a = gen::presheaf(rng, base, {3, 2, 50});
      Presheaf b = gen::presheaf(rng, base, {3, 2, 50});
      auto maps = all_nat_transfs(a, b);
      for (std::size_t k = 0; k < maps.size() && k < 6; ++k) {
        const auto& f = maps[k];
        auto kp = kernel_pair(f);
        CHECK(f.is_mono() == (kp.left == kp.right));
        CHECK(f.is_epi() == image(f).mono.is_iso());
        // Representables detect monos: hom(y(P), -) injective on all P.
        bool rep_mono = true;
        for (int p = 0; p < base->num_objects(); ++p) {
          auto hs = oracle::nat_transfs(yoneda(base, p), a);
          for (std::size_t s = 0; s < hs.size(); ++s)
            for (std::size_t t = s + 1; t < hs.size(); ++t) {
              bool same = true;
              for (int o = 0; o < base->num_objects() && same; ++o)
                for (std::size_t e = 0; e < hs[s][u(o)].size() && same; ++e)
                  same = f(o, hs[s][u(o)][e]) == f(o, hs[t][u(o)][e]);
              if (same) rep_mono = false;
            }
        }
        CHECK(rep_mono == f.is_mono());
      }
    }
}

TEST_CASE("is_compact examples") {
  CHECK_FALSE(is_compact(initial(stock::two())).has_value());
  auto w = is_compact(only_a());
  REQUIRE(w);
  CHECK(w->obj == 0);
  CHECK(w->elem == 0);
  auto t = is_compact(terminal(stock::two()));
  REQUIRE(t);
  CHECK(t->obj == 1);
}

TEST_CASE("is_compact agrees with brute force") {
  for (const auto& base : stock::all())
    for (const auto& x : random_presheaves(77, base, 60)) CHECK(is_compact(x).has_value() == oracle::compact(x));
}

TEST_CASE("compact objects are closed under quotients") {
  Rng rng(8);
  for (const auto& base : stock::all())
    for (int i = 0; i < 40; ++i) {
      Presheaf x = gen::presheaf(rng, base);
      if (!is_compact(x)) continue;
      int o = rng.below(base->num_objects());
      if (x.size(o) == 0) continue;
      auto q = gen::quotient_by_pairs(x, {{o, rng.below(x.size(o)), rng.below(x.size(o))}});
      CHECK(is_compact(q.quotient).has_value());
    }
}

TEST_CASE("is_compact_map examples") {
  auto c = stock::two();
  Presheaf x = only_a();
  CHECK(is_compact_map(identity(x)).holds);
  CHECK(is_compact_map(to_terminal(yoneda(c, 0))).holds);
  // A two-element discrete presheaf over One maps to the terminal with a
  // non-compact fibre.
  auto one = stock::one();
  Presheaf two_pts(one, {2}, {{0, 1}});
  auto r = is_compact_map(to_terminal(two_pts));
  CHECK_FALSE(r.holds);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0] == std::pair<int, int>{0, 0});
}

TEST_CASE("pullback over an element matches the general pullback") {
  Rng rng(9);
  for (const auto& base : stock::all())
    for (int i = 0; i < 20; ++i) {
      Presheaf y = gen::presheaf(rng, base, {3, 2, 50});
      Presheaf x = gen::presheaf(rng, base, {3, 2, 50});
      auto fs = all_nat_transfs(y, x);
      if (fs.empty()) continue;
      const auto& f = fs.front();
      for (int p = 0; p < base->num_objects(); ++p)
        for (int e = 0; e < x.size(p); ++e) {
          auto general = pullback(element_to_map(x, p, e), f).apex;
          CHECK(oracle::isomorphic(general, pullback_over_element(f, p, e)));
        }
    }
}

TEST_CASE("coherent presheaf examples") {
  CHECK(is_coherent_presheaf(terminal(stock::one())).holds);
  for (const auto& base : {stock::one(), stock::two(), stock::commutative_square()})
    for (int p = 0; p < base->num_objects(); ++p) CHECK(is_coherent_presheaf(yoneda(base, p)).holds);
  CHECK_FALSE(is_coherent_presheaf(initial(stock::two())).holds);
  // Over the parallel pair the equalizer of f and g is empty, so y(b) has a
  // non-compact diagonal.
  auto pp = stock::parallel_pair();
  auto r = is_coherent_presheaf(yoneda(pp, 1));
  CHECK_FALSE(r.holds);
  CHECK(r.witness.has_value());
  CHECK(r.failing.has_value());
}

TEST_CASE("indecomposable projective examples") {
  auto c = stock::two();
  CHECK(is_indecomposable_projective(yoneda(c, 1)) == 1);
  CHECK_FALSE(is_indecomposable_projective(initial(c)).has_value());
  auto one = stock::one();
  CHECK_FALSE(is_indecomposable_projective(coproduct(yoneda(one, 0), yoneda(one, 0)).apex).has_value());
  CHECK(is_indecomposable_projective(terminal(c)) == 1);
}

TEST_CASE("indecomposable projective agrees with brute-force isomorphism") {
  for (const auto& base : stock::all())
    for (const auto& x : random_presheaves(55, base, 40)) {
      bool brute = false;
      for (int p = 0; p < base->num_objects() && !brute; ++p) brute = oracle::isomorphic(yoneda(base, p), x);
      CHECK(is_indecomposable_projective(x).has_value() == brute);
    }
}

TEST_CASE("assembly-like examples") {
  for (const auto& base : stock::all())
    for (int p = 0; p < base->num_objects(); ++p) {
      auto w = is_assembly_like(yoneda(base, p));
      REQUIRE(w);
      CHECK(w->factors.size() == 1);
    }
  auto one = stock::one();
  CHECK_FALSE(is_assembly_like(Presheaf(one, {2}, {{0, 1}})).has_value());
  CHECK_FALSE(is_assembly_like(initial(one)).has_value());
}

TEST_CASE("assembly-like witnesses are jointly monic covers") {
  for (const auto& base : stock::all())
    for (const auto& x : random_presheaves(66, base, 40)) {
      auto w = is_assembly_like(x);
      if (!w) continue;
      CHECK(element_to_map(x, w->cover.obj, w->cover.elem).is_epi());
      for (int o = 0; o < base->num_objects(); ++o)
        for (int a = 0; a < x.size(o); ++a)
          for (int b = a + 1; b < x.size(o); ++b) {
            bool same = true;
            for (const auto& l : w->legs) same = same && l(o, a) == l(o, b);
            CHECK_FALSE(same);
          }
    }
}

TEST_CASE("exact presentation examples") {
  auto c = stock::two();
  auto yb = yoneda(c, 1);
  auto ep = exact_presentation(yb, PresentationClass::Representable);
  REQUIRE(ep);
  CHECK(ep->kernel.left == ep->kernel.right);
  CHECK(ep->comparison.is_iso());
  CHECK_FALSE(exact_presentation(initial(c), PresentationClass::AssemblyLike).has_value());
}

TEST_CASE("coherent iff exact presentation by assembly-like kernel, on lex bases") {
  for (const auto& base : {stock::one(), stock::two(), stock::commutative_square()})
    for (const auto& x : random_presheaves(88, base, 60))
      CHECK(is_coherent_presheaf(x).holds == exact_presentation(x, PresentationClass::AssemblyLike).has_value());
}

TEST_CASE("lex bases") {
  CHECK(is_lex_base(stock::one()));
  CHECK(is_lex_base(stock::two()));
  CHECK(is_lex_base(stock::commutative_square()));
  CHECK_FALSE(is_lex_base(stock::parallel_pair()));
  CHECK_FALSE(is_lex_base(stock::trunc_monoid()));
}

TEST_CASE("pseudo-equivalence relation of a representable") {
  auto c = stock::commutative_square();
  for (int p = 0; p < c->num_objects(); ++p) {
    auto r = pseudo_eq_rel_presentation(yoneda(c, p));
    REQUIRE(r);
    CHECK(r->p == p);
    CHECK(r->q == p);
    CHECK(r->d0 == p);
    CHECK(r->d1 == p);
    CHECK(r->reflexivity == p);
    CHECK(r->symmetry == p);
    CHECK(r->transitivity.has_value());
  }
}

TEST_CASE("pseudo-equivalence relation of the terminal over Two") {
  auto r = pseudo_eq_rel_presentation(terminal(stock::two()));
  REQUIRE(r);
  CHECK(r->p == 1);
  CHECK(r->kernel.apex.sizes() == std::vector<int>{1, 1});
  CHECK(r->kernel_cover.is_epi());
}

TEST_CASE("pseudo-equivalence fillers on random coherent presheaves") {
  auto one = stock::one();
  CHECK_THROWS_AS(pseudo_eq_rel_presentation(Presheaf(one, {2}, {{0, 1}})), NotCoherent);
  int seen = 0;
  for (const auto& base : stock::all())
    for (const auto& x : random_presheaves(99, base, 60)) {
      if (!is_coherent_presheaf(x).holds) continue;
      auto r = pseudo_eq_rel_presentation(x);
      if (!r) continue;
      ++seen;
      const auto& c = *base;
      CHECK(r->reflexivity >= 0);
      CHECK(r->symmetry >= 0);
      REQUIRE(r->transitivity.has_value());
      CHECK_NOTHROW(r->transitivity->validate());
      CHECK(c.compose(r->d0, r->reflexivity) == r->p);
      CHECK(c.compose(r->d1, r->symmetry) == r->d0);
    }
  CHECK(seen > 20);
}
