#include <variant>

#include "doctest.h"
#include "e2t/assemblies.hpp"
#include "term_oracle.hpp"

using namespace e2t;
using pca::Term;

namespace {

Term T(const char* s) { return Term::parse(s); }

Assembly asm_of(std::string name, std::vector<std::vector<const char*>> rs) {
  Assembly a{std::move(name), {}, {}};
  for (std::size_t i = 0; i < rs.size(); ++i) {
    a.carrier.push_back("a" + std::to_string(i));
    a.realizers.emplace_back();
    for (const char* r : rs[i]) a.realizers.back().push_back(T(r));
  }
  return a;
}

PartitionedAssembly pasm(std::string name, std::vector<const char*> rs) {
  PartitionedAssembly p{std::move(name), {}, {}};
  for (std::size_t i = 0; i < rs.size(); ++i) {
    p.carrier.push_back("p" + std::to_string(i));
    p.realizer.push_back(T(rs[i]));
  }
  return p;
}

}  // namespace

TEST_CASE("find_tracker examples") {
  Assembly a = asm_of("A", {{"K"}, {"S"}});
  CHECK(find_tracker({0, 1}, a, a, 3, 100) == T("S K K"));
  Assembly b = asm_of("B", {{"K"}});
  CHECK(find_tracker({0, 0}, a, b, 2, 100) == T("K K"));
  CHECK_FALSE(find_tracker({1, 0}, a, a, 1, 100).has_value());
  CHECK_THROWS_AS(find_tracker({0, 1}, a, a, 0, 100), PreconditionError);
}

TEST_CASE("find_tracker returns the enumeration-least tracker") {
  Assembly a = asm_of("A", {{"K"}, {"S"}});
  Assembly b = asm_of("B", {{"K"}});
  auto t = find_tracker({0, 0}, a, b, 3, 100);
  REQUIRE(t);
  for (std::size_t s = 1; s <= 3; ++s)
    for (const Term& c : pca::terms_of_size(s)) {
      if (!(c < *t)) break;
      CHECK(pca::tracks(c, std::vector<int>{0, 0}, a.realizers, b.realizers, 100) != pca::TrackOutcome::Tracks);
    }
}

TEST_CASE("regular image of identity and of a constant map") {
  Assembly p = asm_of("P", {{"K"}, {"S"}});
  TrackedMap id{p, p, {0, 1}, pca::identity_term()};
  auto r = regular_image(id);
  CHECK(r.image.carrier == p.carrier);
  CHECK(r.image.realizers == p.realizers);

  Assembly q = asm_of("Q", {{"K"}});
  TrackedMap c{p, q, {0, 0}, T("K K")};
  auto rc = regular_image(c);
  REQUIRE(rc.image.size() == 1);
  CHECK(rc.image.realizers[0] == std::vector<Term>{T("K"), T("S")});
  CHECK(rc.epi.tracker == pca::identity_term());
  CHECK(rc.mono.fn == std::vector<int>{0});
  CHECK(pca::tracks(rc.epi.tracker, rc.epi.fn, p.realizers, rc.image.realizers, 100) == pca::TrackOutcome::Tracks);
  CHECK(pca::tracks(rc.mono.tracker, rc.mono.fn, rc.image.realizers, q.realizers, 100) == pca::TrackOutcome::Tracks);
}

TEST_CASE("regular image factorization on random maps") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    int n = rng.between(1, 4), m = rng.between(1, 4);
    Assembly p{"P", {}, {}}, q{"Q", {}, {}};
    for (int k = 0; k < n; ++k) {
      p.carrier.push_back("x" + std::to_string(k));
      p.realizers.push_back({oracle::random_term(rng, 2)});
    }
    for (int k = 0; k < m; ++k) {
      q.carrier.push_back("y" + std::to_string(k));
      q.realizers.push_back({oracle::random_term(rng, 2)});
    }
    std::vector<int> fn;
    for (int k = 0; k < n; ++k) fn.push_back(rng.below(m));
    auto r = regular_image(TrackedMap{p, q, fn, pca::identity_term()});
    std::vector<int> comp;
    for (int v : r.epi.fn) comp.push_back(r.mono.fn[static_cast<std::size_t>(v)]);
    CHECK(comp == fn);
    std::vector<int> hits(static_cast<std::size_t>(r.image.size()), 0);
    for (int v : r.epi.fn) hits[static_cast<std::size_t>(v)]++;
    for (int h : hits) CHECK(h > 0);
    for (std::size_t a = 0; a < r.mono.fn.size(); ++a)
      for (std::size_t b = a + 1; b < r.mono.fn.size(); ++b) CHECK(r.mono.fn[a] != r.mono.fn[b]);
  }
}

TEST_CASE("build_site on a singleton is the terminal category") {
  auto s = build_site({pasm("One", {"K"})}, {3, 100});
  CHECK(s.category->num_objects() == 1);
  CHECK(s.category->num_arrows() == 1);
}

TEST_CASE("build_site with two points realized by K and S") {
  auto s = build_site({pasm("A", {"K"}), pasm("B", {"S"})}, {3, 100});
  const auto& c = *s.category;
  CHECK(c.num_objects() == 2);
  CHECK(c.hom(0, 1).size() == 1);
  CHECK(c.hom(1, 0).size() == 1);
  int ab = c.hom(0, 1)[0], ba = c.hom(1, 0)[0];
  CHECK(s.trackers[static_cast<std::size_t>(ab)] == T("K S"));
  CHECK(s.trackers[static_cast<std::size_t>(ba)] == T("K K"));
  CHECK(c.compose(ba, ab) == 0);
}

TEST_CASE("every recorded tracker of a built site tracks its arrow") {
  std::vector<PartitionedAssembly> gens{pasm("A", {"K", "S"}), pasm("B", {"K"}), pasm("C", {"S K", "K K"})};
  auto s = build_site(gens, {3, 200});
  const auto& c = *s.category;
  for (int a = 0; a < c.num_arrows(); ++a) {
    auto src = Assembly::from(gens[static_cast<std::size_t>(c.dom(a))]);
    auto dst = Assembly::from(gens[static_cast<std::size_t>(c.cod(a))]);
    CHECK(pca::tracks(s.trackers[static_cast<std::size_t>(a)], s.functions[static_cast<std::size_t>(a)],
                      src.realizers, dst.realizers, 2000) == pca::TrackOutcome::Tracks);
  }
  // Composition table is function composition.
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.out(c.cod(f))) {
      std::vector<int> fn;
      for (int v : s.functions[static_cast<std::size_t>(f)]) fn.push_back(s.functions[static_cast<std::size_t>(g)][static_cast<std::size_t>(v)]);
      CHECK(fn == s.functions[static_cast<std::size_t>(c.compose(g, f))]);
    }
}

TEST_CASE("site arrow cap") {
  std::vector<PartitionedAssembly> gens{pasm("A", {"K", "S"}), pasm("B", {"K", "S", "S K"})};
  CHECK_THROWS_AS(build_site(gens, {3, 100}, 3), SiteTooLarge);
}

TEST_CASE("loader normalization rejects divergent realizers") {
  PartitionedAssembly p{"P", {"x"}, {T("S (S K K) (S K K) (S (S K K) (S K K))")}};
  CHECK_THROWS_AS(normalize_realizers(p, 100), InvariantViolation);
  PartitionedAssembly q{"Q", {"x"}, {T("K S K")}};
  CHECK(normalize_realizers(q, 100).realizer[0] == T("S"));
  CHECK_THROWS_AS(q.validate(), InvariantViolation);
}
