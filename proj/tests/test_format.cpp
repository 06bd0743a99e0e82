#include <filesystem>
#include <functional>

#include "doctest.h"
#include "e2t/format.hpp"
#include "e2t/generate.hpp"
#include "e2t/modelcat.hpp"

using namespace e2t;
using format::Document;

namespace {

const std::filesystem::path kFixtures = E2T_FIXTURES;

void expect_violation(const std::string& text, const std::string& law,
                      const std::function<void(const InvariantViolation&)>& also = [](const InvariantViolation&) {}) {
  try {
    format::parse(text);
    FAIL("no InvariantViolation for: " << text);
  } catch (const InvariantViolation& e) {
    CHECK(e.law() == law);
    also(e);
  }
}

void expect_syntax(const std::string& text, int line, int col) {
  try {
    format::parse(text);
    FAIL("no SyntaxError for: " << text);
  } catch (const SyntaxError& e) {
    CHECK(e.line() == line);
    CHECK(e.col() == col);
  }
}

Document reparse(const Document& d, const std::filesystem::path& dir = ".") {
  format::ParseOptions o;
  o.base_dir = dir;
  return format::parse(format::emit(d), "<emitted>", o);
}

}  // namespace

TEST_CASE("category blocks") {
  auto d = format::parse("category C { objects: a; }");
  auto c = d.get<CategoryRef>("C");
  REQUIRE(c);
  CHECK(**c == *stock::one());
  auto sq = format::parse(R"(
category Sq {
  objects: a, b, c, d
  f: a -> b; g: a -> c; h: b -> d; k: c -> d
  diag: a -> d
  h . f = diag
  k . g = diag
}
)");
  CHECK(**sq.get<CategoryRef>("Sq") == *stock::commutative_square());
  // Thin homs fill in composites.
  auto t = format::parse("category T { objects: a, b, c; f: a -> b; g: b -> c; gf: a -> c }");
  const auto& tc = **t.get<CategoryRef>("T");
  CHECK(tc.compose(*tc.arrow_index("g"), *tc.arrow_index("f")) == *tc.arrow_index("gf"));
}

TEST_CASE("presheaf blocks and laws") {
  auto d = format::parse("presheaf X over Two { a: x0, x1; b: y; act f: y -> x1 }");
  const auto* x = d.get<Presheaf>("X");
  REQUIRE(x);
  CHECK(x->sizes() == std::vector<int>{2, 1});
  CHECK(x->act(2, 0) == 1);
  CHECK(x->label(0, 1) == "x1");
  expect_violation("presheaf X over Two { a: x0, x1; b: y; act id_a: x0 -> x1, x1 -> x0; act f: y -> x0 }",
                   "functoriality", [](const InvariantViolation& e) {
                     CHECK(e.block().find("presheaf X") != std::string::npos);
                   });
  expect_violation("category C { objects: a, b; f: a -> b; g: a -> b }\n"
                   "presheaf X over C { a: x0, x1; b: y; act f: y -> x0; act g: y -> x1 }\n"
                   "presheaf Y over C { a: u; b: v; act f: v -> u; act g: v -> u }\n"
                   "map m: X -> Y { a: x0 -> u, x1 -> u; b: y -> v }\n"
                   "map n: Y -> X { a: u -> x0; b: v -> y }",
                   "naturality");
}

TEST_CASE("groupoid blocks and laws") {
  auto d = format::parse(R"(
groupoid B over One {
  stage pt {
    objects: x
    s: x -> x
    s . s = id_x
  }
}
groupoid P over One { stage pt { objects: x, y; s: x -> y; t: y -> x } }
gfunctor F: P -> B { pt: x -> x, y -> x, s -> s }
)");
  const auto* b = d.get<GpdPresheaf>("B");
  REQUIRE(b);
  CHECK(b->stage(0).num_arrows() == 2);
  CHECK(b->stage(0).inverse(1) == 1);
  const auto* f = d.get<GpdFunctor>("F");
  REQUIRE(f);
  // t is inverse to s, so it goes to s^-1 = s.
  CHECK(f->arr(0, 3) == 1);
  expect_violation("groupoid G over One { stage pt { objects: x, y; s: x -> y } }", "groupoid axioms");
  expect_violation("groupoid G over One { stage pt { objects: x; s: x -> x; t: x -> x; s . s = t } }",
                   "composition");
}

TEST_CASE("syntax errors carry line and column") {
  expect_syntax("presheaf X over One { pt: u }\nbogus Y {}", 2, 1);
  expect_syntax("presheaf X over One {\n  pt: u,\n  act q: u -> u\n}", 2, 9);
  expect_syntax("presheaf X over One {\n  pt: u\n  act q: u -> u\n}", 3, 7);
  expect_syntax("presheaf X over Nowhere { pt: u }", 1, 17);
  expect_syntax("presheaf X over One { pt: u }\npresheaf X over One { pt: v }", 2, 10);
  expect_syntax("map m: X -> Y {}", 1, 8);
}

TEST_CASE("assemblies and sites") {
  auto d = format::parse(R"(
passembly A { p: K; q: S }
passembly U { o: K }
assembly B { u: K | S; v: S K K }
site W { generators: A, U; term_size: 4 }
)");
  const auto* a = d.get<PartitionedAssembly>("A");
  REQUIRE(a);
  CHECK(a->realizer[1] == pca::Term::s());
  const auto* b = d.get<Assembly>("B");
  REQUIRE(b);
  CHECK(b->realizers[0].size() == 2);
  // S K K normalizes to itself; it is already normal.
  CHECK(b->realizers[1][0] == pca::identity_term());
  const auto* w = d.get<format::SiteBlock>("W");
  REQUIRE(w);
  CHECK(w->site.category->num_objects() == 2);
  CHECK(w->budget.max_term_size == 4);
  CHECK_THROWS_AS(format::parse("site V { generators: A }\npassembly A { p: K }"), SyntaxError);
}

TEST_CASE("fixtures round trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kFixtures)) {
    if (entry.path().extension() != ".e2t") continue;
    CAPTURE(entry.path().string());
    auto d = format::parse_file(entry.path());
    auto back = reparse(d, kFixtures);
    CHECK(format::same(d, back));
    CHECK(format::emit(back) == format::emit(d));
    ++seen;
  }
  CHECK(seen >= 5);
}

TEST_CASE("imports") {
  auto d = format::parse_file(kFixtures / "functor.e2t");
  CHECK(d.imports == std::vector<std::string>{"pair2.e2t", "bz2.e2t"});
  CHECK(d.blocks.size() == 1);
  CHECK(d.get<GpdPresheaf>("P"));
  CHECK_THROWS_AS(format::parse("import \"missing.e2t\""), Error);
}

TEST_CASE("random documents round trip") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto bases = stock::all();
    const auto& base = bases[static_cast<std::size_t>(rng.below(static_cast<int>(bases.size())))];
    Document d;
    auto x = gen::presheaf(rng, base, {3, 2, 50});
    d.add("X", x);
    d.add("tX", to_terminal(x));
    auto g = gen::groupoid(rng, base, {3, 2, 40});
    auto h = gen::groupoid(rng, base, {3, 2, 40});
    d.add("G", g);
    if (auto f = gen::random_functor(rng, g, h)) {
      d.add("F", *f);
      d.add("idF", identity_cell(*f));
    }
    d.add("PG", path_groupoid(g).path);
    auto back = reparse(d);
    CAPTURE(format::emit(d));
    CHECK(format::same(d, back));
    CHECK(format::emit(back) == format::emit(d));
  }
}

TEST_CASE("emitter canonicalizes bad names") {
  Document d;
  d.add("X", Presheaf(stock::one(), {2}, {{0, 1}}, {{"bad name", "bad name"}}));
  auto back = reparse(d);
  const auto* x = back.get<Presheaf>("X");
  REQUIRE(x);
  CHECK(x->label(0, 0) != x->label(0, 1));
  CHECK(x->sizes() == std::vector<int>{2});
}
