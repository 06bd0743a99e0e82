#include "e2t/format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace e2t::format {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

bool is_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool all_names_unique(const std::vector<std::string>& v) {
  std::set<std::string> seen;
  for (const auto& s : v)
    if (!is_name(s) || !seen.insert(s).second) return false;
  return true;
}

// ---------------------------------------------------------------- reader

struct Pos {
  int line = 1;
  int col = 1;
};

class Reader {
 public:
  Reader(const std::string& text, std::string file) : s_(text), file_(std::move(file)) {}

  Pos pos() const { return {line_, col_}; }
  bool eof() const { return i_ >= s_.size(); }
  char cur() const { return i_ < s_.size() ? s_[i_] : '\0'; }

  /// Spaces and comments, not newlines.
  void blank() {
    for (;;) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r') {
        bump();
      } else if (c == '#') {
        while (!eof() && cur() != '\n') bump();
      } else {
        break;
      }
    }
  }

  /// Blank space, newlines and statement separators.
  void gap() {
    for (;;) {
      blank();
      if (cur() == '\n' || cur() == ';')
        bump();
      else
        break;
    }
  }

  bool accept(std::string_view t) {
    blank();
    if (s_.compare(i_, t.size(), t) != 0) return false;
    for (std::size_t k = 0; k < t.size(); ++k) bump();
    return true;
  }

  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }

  bool at_name() {
    blank();
    char c = cur();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string name(const char* what = "a name") {
    if (!at_name()) fail(std::string("expected ") + what);
    std::string out;
    while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
      out += cur();
      bump();
    }
    return out;
  }

  std::string quoted() {
    blank();
    if (cur() != '"') fail("expected a quoted path");
    bump();
    std::string out;
    while (!eof() && cur() != '"' && cur() != '\n') {
      out += cur();
      bump();
    }
    if (cur() != '"') fail("unterminated string");
    bump();
    return out;
  }

  std::size_t number() {
    blank();
    if (!std::isdigit(static_cast<unsigned char>(cur()))) fail("expected a number");
    std::size_t n = 0;
    while (std::isdigit(static_cast<unsigned char>(cur()))) {
      n = n * 10 + static_cast<std::size_t>(cur() - '0');
      bump();
    }
    return n;
  }

  /// Rest of the statement, trimmed.
  std::string raw() {
    blank();
    std::string out;
    while (!eof() && cur() != ';' && cur() != '\n' && cur() != '}' && cur() != '#') {
      out += cur();
      bump();
    }
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
  }

  bool at_statement_end() {
    blank();
    char c = cur();
    return c == ';' || c == '\n' || c == '}' || c == '\0';
  }

  void end_statement() {
    blank();
    if (cur() == ';' || cur() == '\n') {
      bump();
      return;
    }
    if (cur() == '}' || eof()) return;
    fail("expected end of statement");
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos(), msg); }
  [[noreturn]] void fail_at(Pos p, const std::string& msg) const { throw SyntaxError(file_, p.line, p.col, msg); }
  const std::string& file() const { return file_; }

 private:
  void bump() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& s_;
  std::string file_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Name {
  std::string text;
  Pos pos;
};

std::vector<Name> name_list(Reader& r) {
  std::vector<Name> out;
  if (r.at_statement_end()) return out;
  do {
    Pos p = (r.blank(), r.pos());
    out.push_back({r.name(), p});
  } while (r.accept(","));
  return out;
}

struct Pair {
  Name from;
  Name to;
};

/// `a -> b, c -> d`, possibly empty.
std::vector<Pair> pair_list(Reader& r) {
  std::vector<Pair> out;
  if (r.at_statement_end()) return out;
  do {
    Pos p = (r.blank(), r.pos());
    Name a{r.name(), p};
    r.expect("->");
    Pos q = (r.blank(), r.pos());
    out.push_back({a, {r.name(), q}});
  } while (r.accept(","));
  return out;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  Parser(const std::string& text, const std::string& file, const ParseOptions& opts,
         std::vector<std::filesystem::path>& stack)
      : r_(text, file), opts_(opts), stack_(stack) {}

  Document run() {
    for (;;) {
      r_.gap();
      if (r_.eof()) break;
      Pos at = r_.pos();
      std::string kw = r_.name("a block keyword");
      if (kw == "import") {
        import(r_.quoted(), at);
        r_.end_statement();
        continue;
      }
      Pos name_at = (r_.blank(), r_.pos());
      std::string name = r_.name("a block name");
      if (doc_.find(name)) r_.fail_at(name_at, "duplicate block name " + name);
      where_ = kw + " " + name + " (" + r_.file() + ":" + std::to_string(at.line) + ":" + std::to_string(at.col) + ")";
      Value v = block(kw, name, at);
      doc_.blocks.push_back({name, std::move(v), at.line});
      r_.end_statement();
    }
    return std::move(doc_);
  }

 private:
  Value block(const std::string& kw, const std::string& name, Pos at) {
    try {
      if (kw == "category") return category(name);
      if (kw == "presheaf") return presheaf();
      if (kw == "map") return map();
      if (kw == "groupoid") return groupoid();
      if (kw == "gfunctor") return gfunctor();
      if (kw == "twocell") return twocell();
      if (kw == "passembly") return passembly(name);
      if (kw == "assembly") return assembly(name);
      if (kw == "site") return site();
    } catch (const InvariantViolation& e) {
      throw InvariantViolation(where_, e.law(), e.counterexample());
    }
    r_.fail_at(at, "unknown block kind " + kw);
  }

  void import(const std::string& rel, Pos at) {
    auto path = opts_.base_dir / rel;
    auto canon = std::filesystem::weakly_canonical(path);
    if (std::find(stack_.begin(), stack_.end(), canon) != stack_.end()) r_.fail_at(at, "import cycle through " + rel);
    std::ifstream in(path);
    if (!in) r_.fail_at(at, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ParseOptions sub = opts_;
    sub.base_dir = path.parent_path();
    stack_.push_back(canon);
    Document d = Parser(ss.str(), path.string(), sub, stack_).run();
    stack_.pop_back();
    doc_.imports.push_back(rel);
    for (auto& b : d.imported) doc_.imported.push_back(std::move(b));
    for (auto& b : d.blocks) doc_.imported.push_back(std::move(b));
  }

  [[noreturn]] void violation(const std::string& law, const std::string& what) const {
    throw InvariantViolation(where_, law, what);
  }

  template <class T>
  const T& ref(const Name& n, const char* kind) {
    const Block* b = doc_.find(n.text);
    if (!b) r_.fail_at(n.pos, "undeclared " + std::string(kind) + " " + n.text);
    const T* v = std::get_if<T>(&b->value);
    if (!v) r_.fail_at(n.pos, n.text + " is not a " + kind);
    return *v;
  }

  Name next_name(const char* what) {
    Pos p = (r_.blank(), r_.pos());
    return {r_.name(what), p};
  }

  CategoryRef base() {
    r_.expect("over");
    Name n = next_name("a base category");
    if (const Block* b = doc_.find(n.text)) {
      if (auto* c = std::get_if<CategoryRef>(&b->value)) return *c;
      if (auto* s = std::get_if<SiteBlock>(&b->value)) return s->site.category;
      r_.fail_at(n.pos, n.text + " is not a category");
    }
    if (auto c = stock::by_name(n.text)) return *c;
    r_.fail_at(n.pos, "undeclared category " + n.text);
  }

  int object_of(const FinCategory& c, const Name& n) {
    auto o = c.object_index(n.text);
    if (!o) r_.fail_at(n.pos, "no object " + n.text + " in " + c.name());
    return *o;
  }

  int arrow_of(const FinCategory& c, const Name& n) {
    auto a = c.arrow_index(n.text);
    if (!a) r_.fail_at(n.pos, "no arrow " + n.text + " in " + c.name());
    return *a;
  }

  /// Loops over the statements of a `{ ... }` body.
  template <class F>
  void body(F&& statement) {
    r_.expect("{");
    for (;;) {
      r_.gap();
      if (r_.accept("}")) return;
      if (r_.eof()) r_.fail("unterminated block");
      statement();
      r_.end_statement();
    }
  }

  // ---- category

  CategoryRef category(const std::string& name) {
    FinCategory::Builder b(name);
    body([&] {
      Name first = next_name("a statement");
      if (first.text == "objects" && r_.accept(":")) {
        if (b.num_arrows() > b.num_objects()) r_.fail_at(first.pos, "objects must precede arrows");
        for (const auto& o : name_list(r_)) {
          if (b.object_index(o.text)) r_.fail_at(o.pos, "duplicate object " + o.text);
          b.add_object(o.text);
        }
      } else if (r_.accept(":")) {
        if (b.arrow_index(first.text)) r_.fail_at(first.pos, "duplicate arrow " + first.text);
        Name d = next_name("an object");
        r_.expect("->");
        Name c = next_name("an object");
        auto di = b.object_index(d.text), ci = b.object_index(c.text);
        if (!di) r_.fail_at(d.pos, "no object " + d.text);
        if (!ci) r_.fail_at(c.pos, "no object " + c.text);
        b.add_arrow(first.text, *di, *ci);
      } else if (r_.accept(".")) {
        Name f = next_name("an arrow");
        r_.expect("=");
        Name h = next_name("an arrow");
        int gi = builder_arrow(b, first), fi = builder_arrow(b, f), hi = builder_arrow(b, h);
        b.set_composite(gi, fi, hi);
      } else {
        r_.fail("expected 'objects:', an arrow declaration or a composite");
      }
    });
    b.derive_thin();
    return std::make_shared<const FinCategory>(b.build());
  }

  int builder_arrow(const FinCategory::Builder& b, const Name& n) {
    auto a = b.arrow_index(n.text);
    if (!a) r_.fail_at(n.pos, "no arrow " + n.text);
    return *a;
  }

  // ---- presheaf

  /// Fills missing tables of composite arrows from given ones; `compose`
  /// returns the table for g . f from those of g and f.
  template <class T, class Compose>
  void close_under_composites(const FinCategory& c, std::vector<std::optional<T>>& tables, Compose&& compose) {
    for (bool changed = true; changed;) {
      changed = false;
      for (int f = c.num_objects(); f < c.num_arrows(); ++f) {
        if (!tables[idx(f)]) continue;
        for (int g : c.out(c.cod(f))) {
          if (c.is_identity(g) || !tables[idx(g)]) continue;
          int h = c.compose(g, f);
          if (tables[idx(h)]) continue;
          tables[idx(h)] = compose(*tables[idx(g)], *tables[idx(f)]);
          changed = true;
        }
      }
    }
    for (int h = 0; h < c.num_arrows(); ++h)
      if (!tables[idx(h)]) violation("functoriality", "no action given for arrow " + c.arrow(h).name);
  }

  Presheaf presheaf() {
    CategoryRef base_ref = base();
    const FinCategory& c = *base_ref;
    std::vector<std::vector<std::string>> labels(idx(c.num_objects()));
    std::vector<char> stage_seen(idx(c.num_objects()), 0);
    struct Act {
      int arrow;
      std::vector<Pair> pairs;
    };
    std::vector<Act> acts;
    body([&] {
      Name first = next_name("a stage or 'act'");
      if (first.text == "act" && r_.at_name()) {
        Name a = next_name("an arrow");
        r_.expect(":");
        acts.push_back({arrow_of(c, a), pair_list(r_)});
        return;
      }
      int p = object_of(c, first);
      r_.expect(":");
      if (stage_seen[idx(p)]) r_.fail_at(first.pos, "stage " + first.text + " given twice");
      stage_seen[idx(p)] = 1;
      for (const auto& e : name_list(r_)) {
        auto& l = labels[idx(p)];
        if (std::find(l.begin(), l.end(), e.text) != l.end()) r_.fail_at(e.pos, "duplicate element " + e.text);
        l.push_back(e.text);
      }
    });
    auto element = [&](int p, const Name& n) {
      const auto& l = labels[idx(p)];
      auto it = std::find(l.begin(), l.end(), n.text);
      if (it == l.end()) r_.fail_at(n.pos, "no element " + n.text + " at stage " + c.object_name(p));
      return static_cast<int>(it - l.begin());
    };
    std::vector<std::optional<std::vector<int>>> tables(idx(c.num_arrows()));
    for (int p = 0; p < c.num_objects(); ++p) {
      std::vector<int> id(labels[idx(p)].size());
      for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
      tables[idx(p)] = id;
    }
    for (const auto& a : acts) {
      int h = a.arrow;
      std::vector<int> t(labels[idx(c.cod(h))].size(), -1);
      for (const auto& pr : a.pairs) {
        int x = element(c.cod(h), pr.from), y = element(c.dom(h), pr.to);
        if (t[idx(x)] >= 0 && t[idx(x)] != y) violation("functoriality", "act " + c.arrow(h).name + " sends " + pr.from.text + " twice");
        t[idx(x)] = y;
      }
      for (std::size_t x = 0; x < t.size(); ++x)
        if (t[x] < 0) violation("functoriality", "act " + c.arrow(h).name + " misses " + labels[idx(c.cod(h))][x]);
      tables[idx(h)] = t;
    }
    close_under_composites(c, tables, [](const std::vector<int>& g, const std::vector<int>& f) {
      std::vector<int> out;
      for (int x : g) out.push_back(f[idx(x)]);
      return out;
    });
    std::vector<int> sizes;
    for (const auto& l : labels) sizes.push_back(static_cast<int>(l.size()));
    Presheaf::Table act;
    for (auto& t : tables) act.push_back(std::move(*t));
    auto x = Presheaf::unchecked(base_ref, sizes, act, labels);
    x.validate(where_);
    return x;
  }

  // ---- map

  NatTransf map() {
    r_.expect(":");
    Name src = next_name("a presheaf");
    const Presheaf& a = ref<Presheaf>(src, "presheaf");
    r_.expect("->");
    const Presheaf& b = ref<Presheaf>(next_name("a presheaf"), "presheaf");
    if (!(a.base() == b.base() || *a.base() == *b.base())) r_.fail("source and target have different bases");
    const FinCategory& c = a.cat();
    NatTransf::Components comp(idx(c.num_objects()));
    for (int p = 0; p < c.num_objects(); ++p) comp[idx(p)].assign(idx(a.size(p)), -1);
    body([&] {
      Name st = next_name("a stage");
      int p = object_of(c, st);
      r_.expect(":");
      for (const auto& pr : pair_list(r_)) {
        auto x = a.element_index(p, pr.from.text);
        auto y = b.element_index(p, pr.to.text);
        if (!x) r_.fail_at(pr.from.pos, "no element " + pr.from.text + " in the source at " + st.text);
        if (!y) r_.fail_at(pr.to.pos, "no element " + pr.to.text + " in the target at " + st.text);
        comp[idx(p)][idx(*x)] = *y;
      }
    });
    for (int p = 0; p < c.num_objects(); ++p)
      for (int x = 0; x < a.size(p); ++x)
        if (comp[idx(p)][idx(x)] < 0) violation("totality", "no image for " + a.label(p, x) + " at " + c.object_name(p));
    auto m = NatTransf::unchecked(a, b, std::move(comp));
    m.validate(where_);
    return m;
  }

  // ---- groupoids

  struct StageNames {
    const FinGroupoid* g;
    /// Object index, or num_objects() + arrow index for arrows.
    std::optional<int> lookup(const std::string& n) const {
      if (auto o = g->object_index(n)) return *o;
      if (auto a = g->arrow_index(n)) return g->num_objects() + *a;
      return std::nullopt;
    }
  };

  FinGroupoid stage(const std::string& stage_name) {
    std::vector<std::string> objects;
    std::vector<FinGroupoid::Arrow> arrows;
    std::set<std::string> names;
    struct Comp {
      Name g, f, h;
    };
    std::vector<Comp> comps;
    std::vector<Name> declared;
    body([&] {
      Name first = next_name("a statement");
      if (first.text == "objects" && r_.accept(":")) {
        if (!declared.empty()) r_.fail_at(first.pos, "objects must precede arrows");
        for (const auto& o : name_list(r_)) {
          if (!names.insert(o.text).second || !names.insert("id_" + o.text).second)
            r_.fail_at(o.pos, "duplicate name " + o.text);
          objects.push_back(o.text);
        }
      } else if (r_.accept(":")) {
        if (!names.insert(first.text).second) r_.fail_at(first.pos, "duplicate name " + first.text);
        Name d = next_name("an object"), c;
        r_.expect("->");
        c = next_name("an object");
        auto find = [&](const Name& n) {
          auto it = std::find(objects.begin(), objects.end(), n.text);
          if (it == objects.end()) r_.fail_at(n.pos, "no object " + n.text + " at stage " + stage_name);
          return static_cast<int>(it - objects.begin());
        };
        declared.push_back(first);
        arrows.push_back({first.text, find(d), find(c)});
      } else if (r_.accept(".")) {
        Name f = next_name("an arrow");
        r_.expect("=");
        comps.push_back({first, f, next_name("an arrow")});
      } else {
        r_.fail("expected 'objects:', an arrow declaration or a composite");
      }
    });
    const int n = static_cast<int>(objects.size());
    std::vector<FinGroupoid::Arrow> all;
    for (int x = 0; x < n; ++x) all.push_back({"id_" + objects[idx(x)], x, x});
    for (auto& a : arrows) all.push_back(a);
    const int m = static_cast<int>(all.size());
    auto arrow_index = [&](const Name& nm) {
      for (int a = 0; a < m; ++a)
        if (all[idx(a)].name == nm.text) return a;
      r_.fail_at(nm.pos, "no arrow " + nm.text + " at stage " + stage_name);
    };
    std::vector<std::vector<int>> table(idx(m), std::vector<int>(idx(m), -1));  // table[g][f]
    for (const auto& c : comps) {
      int g = arrow_index(c.g), f = arrow_index(c.f), h = arrow_index(c.h);
      if (all[idx(f)].cod != all[idx(g)].dom) violation("composition", c.g.text + " . " + c.f.text + " is not composable");
      if (all[idx(h)].dom != all[idx(f)].dom || all[idx(h)].cod != all[idx(g)].cod)
        violation("composition", c.g.text + " . " + c.f.text + " = " + c.h.text + " is mistyped");
      table[idx(g)][idx(f)] = h;
    }
    for (int f = 0; f < m; ++f)
      for (int g = 0; g < m; ++g) {
        if (all[idx(f)].cod != all[idx(g)].dom) continue;
        int& t = table[idx(g)][idx(f)];
        if (g < n) {
          t = f;
        } else if (f < n) {
          t = g;
        } else if (t < 0) {
          std::vector<int> hom;
          for (int h = 0; h < m; ++h)
            if (all[idx(h)].dom == all[idx(f)].dom && all[idx(h)].cod == all[idx(g)].cod) hom.push_back(h);
          if (hom.size() != 1) violation("composition", "no composite " + all[idx(g)].name + " . " + all[idx(f)].name);
          t = hom[0];
        }
      }
    std::vector<int> inv(idx(m), -1);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m && inv[idx(u)] < 0; ++v)
        if (all[idx(v)].dom == all[idx(u)].cod && all[idx(v)].cod == all[idx(u)].dom &&
            table[idx(v)][idx(u)] == all[idx(u)].dom && table[idx(u)][idx(v)] == all[idx(u)].cod)
          inv[idx(u)] = v;
    for (int u = 0; u < m; ++u)
      if (inv[idx(u)] < 0) violation("groupoid axioms", all[idx(u)].name + " has no inverse");
    return FinGroupoid::checked(objects, all, [&](int g, int f) { return table[idx(g)][idx(f)]; }, inv, where_);
  }

  /// Parses `x -> y, u -> v` into a functor between two stages; arrows not
  /// given are the identities of mapped objects or unique in their hom-set.
  StageFunctor stage_map(const FinGroupoid& a, const FinGroupoid& b, const std::vector<Pair>& pairs,
                         const std::string& what) {
    StageFunctor f;
    f.obj.assign(idx(a.num_objects()), -1);
    f.arr.assign(idx(a.num_arrows()), -1);
    StageNames sa{&a}, sb{&b};
    for (const auto& pr : pairs) {
      auto x = sa.lookup(pr.from.text);
      auto y = sb.lookup(pr.to.text);
      if (!x) r_.fail_at(pr.from.pos, "no object or arrow " + pr.from.text + " in the source of " + what);
      if (!y) r_.fail_at(pr.to.pos, "no object or arrow " + pr.to.text + " in the target of " + what);
      bool xo = *x < a.num_objects(), yo = *y < b.num_objects();
      if (xo != yo) r_.fail_at(pr.to.pos, "objects go to objects and arrows to arrows");
      if (xo)
        f.obj[idx(*x)] = *y;
      else
        f.arr[idx(*x - a.num_objects())] = *y - b.num_objects();
    }
    for (int x = 0; x < a.num_objects(); ++x) {
      if (f.obj[idx(x)] < 0) violation("functoriality", what + " gives no image for " + a.object_name(x));
      f.arr[idx(x)] = f.obj[idx(x)];
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (int u = a.num_objects(); u < a.num_arrows(); ++u) {
        if (f.arr[idx(u)] < 0) continue;
        int v = a.inverse(u);
        if (f.arr[idx(v)] < 0) {
          f.arr[idx(v)] = b.inverse(f.arr[idx(u)]);
          grew = true;
        }
        for (int w : a.out(a.cod(u))) {
          int c = a.compose(w, u);
          if (f.arr[idx(w)] >= 0 && f.arr[idx(c)] < 0) {
            f.arr[idx(c)] = b.compose(f.arr[idx(w)], f.arr[idx(u)]);
            grew = true;
          }
        }
      }
    }
    for (int u = a.num_objects(); u < a.num_arrows(); ++u) {
      if (f.arr[idx(u)] >= 0) continue;
      auto hom = b.hom(f.obj[idx(a.dom(u))], f.obj[idx(a.cod(u))]);
      if (hom.size() != 1) violation("functoriality", what + " gives no image for " + a.arrow(u).name);
      f.arr[idx(u)] = hom[0];
    }
    return f;
  }

  GpdPresheaf groupoid() {
    CategoryRef base_ref = base();
    const FinCategory& c = *base_ref;
    std::vector<std::optional<FinGroupoid>> stages(idx(c.num_objects()));
    struct Act {
      Name arrow;
      std::vector<Pair> pairs;
    };
    std::vector<Act> acts;
    body([&] {
      Name first = next_name("'stage' or 'act'");
      if (first.text == "stage") {
        Name st = next_name("a stage");
        int p = object_of(c, st);
        if (stages[idx(p)]) r_.fail_at(st.pos, "stage " + st.text + " given twice");
        stages[idx(p)] = stage(st.text);
      } else if (first.text == "act") {
        Name a = next_name("an arrow");
        r_.expect(":");
        acts.push_back({a, pair_list(r_)});
      } else {
        r_.fail_at(first.pos, "expected 'stage' or 'act'");
      }
    });
    std::vector<FinGroupoid> st;
    for (auto& s : stages) st.push_back(s ? *s : FinGroupoid::discrete({}));
    std::vector<std::optional<StageFunctor>> tables(idx(c.num_arrows()));
    for (int p = 0; p < c.num_objects(); ++p) {
      StageFunctor id;
      for (int x = 0; x < st[idx(p)].num_objects(); ++x) id.obj.push_back(x);
      for (int u = 0; u < st[idx(p)].num_arrows(); ++u) id.arr.push_back(u);
      tables[idx(p)] = id;
    }
    for (const auto& a : acts) {
      int h = arrow_of(c, a.arrow);
      if (c.is_identity(h)) continue;
      tables[idx(h)] = stage_map(st[idx(c.cod(h))], st[idx(c.dom(h))], a.pairs, "act " + a.arrow.text);
    }
    close_under_composites(c, tables, [](const StageFunctor& g, const StageFunctor& f) {
      StageFunctor out;
      for (int x : g.obj) out.obj.push_back(f.obj[idx(x)]);
      for (int u : g.arr) out.arr.push_back(f.arr[idx(u)]);
      return out;
    });
    std::vector<StageFunctor> act;
    for (auto& t : tables) act.push_back(std::move(*t));
    return GpdPresheaf(base_ref, std::move(st), std::move(act), where_);
  }

  template <class F>
  std::vector<std::vector<Pair>> stage_lines(const FinCategory& c, F&&) {
    std::vector<std::vector<Pair>> lines(idx(c.num_objects()));
    std::vector<char> seen(idx(c.num_objects()), 0);
    body([&] {
      Name st = next_name("a stage");
      int p = object_of(c, st);
      r_.expect(":");
      if (seen[idx(p)]) r_.fail_at(st.pos, "stage " + st.text + " given twice");
      seen[idx(p)] = 1;
      lines[idx(p)] = pair_list(r_);
    });
    return lines;
  }

  GpdFunctor gfunctor() {
    r_.expect(":");
    Name src = next_name("a groupoid");
    const GpdPresheaf& a = ref<GpdPresheaf>(src, "groupoid");
    r_.expect("->");
    const GpdPresheaf& b = ref<GpdPresheaf>(next_name("a groupoid"), "groupoid");
    if (!(a.base() == b.base() || *a.base() == *b.base())) r_.fail("source and target have different bases");
    const FinCategory& c = a.cat();
    auto lines = stage_lines(c, 0);
    std::vector<StageFunctor> st;
    for (int p = 0; p < c.num_objects(); ++p)
      st.push_back(stage_map(a.stage(p), b.stage(p), lines[idx(p)], "stage " + c.object_name(p)));
    return GpdFunctor(a, b, std::move(st), where_);
  }

  TwoCell twocell() {
    r_.expect(":");
    Name src = next_name("a gfunctor");
    const GpdFunctor& f = ref<GpdFunctor>(src, "gfunctor");
    r_.expect("=>");
    const GpdFunctor& g = ref<GpdFunctor>(next_name("a gfunctor"), "gfunctor");
    const FinCategory& c = f.source().cat();
    auto lines = stage_lines(c, 0);
    std::vector<std::vector<int>> comp(idx(c.num_objects()));
    for (int p = 0; p < c.num_objects(); ++p) {
      const auto& s = f.source().stage(p);
      const auto& t = f.target().stage(p);
      comp[idx(p)].assign(idx(s.num_objects()), -1);
      for (const auto& pr : lines[idx(p)]) {
        auto x = s.object_index(pr.from.text);
        auto u = t.arrow_index(pr.to.text);
        if (!x) r_.fail_at(pr.from.pos, "no object " + pr.from.text + " at stage " + c.object_name(p));
        if (!u) r_.fail_at(pr.to.pos, "no arrow " + pr.to.text + " at stage " + c.object_name(p));
        comp[idx(p)][idx(*x)] = *u;
      }
      for (int x = 0; x < s.num_objects(); ++x)
        if (comp[idx(p)][idx(x)] < 0) violation("naturality", "no component at " + s.object_name(x));
    }
    return TwoCell(f, g, std::move(comp), where_);
  }

  // ---- assemblies and sites

  pca::Term term(const std::string& text, Pos at) {
    try {
      return pca::Term::parse(text);
    } catch (const SyntaxError& e) {
      r_.fail_at({at.line, at.col + e.col() - 1}, "bad term: " + std::string(e.what()));
    }
  }

  PartitionedAssembly passembly(const std::string& name) {
    PartitionedAssembly a{name, {}, {}};
    body([&] {
      Name e = next_name("an element");
      if (std::find(a.carrier.begin(), a.carrier.end(), e.text) != a.carrier.end())
        r_.fail_at(e.pos, "duplicate element " + e.text);
      r_.expect(":");
      Pos at = (r_.blank(), r_.pos());
      a.carrier.push_back(e.text);
      a.realizer.push_back(term(r_.raw(), at));
    });
    a = normalize_realizers(std::move(a), opts_.step_budget);
    a.validate();
    return a;
  }

  Assembly assembly(const std::string& name) {
    Assembly a{name, {}, {}};
    body([&] {
      Name e = next_name("an element");
      if (std::find(a.carrier.begin(), a.carrier.end(), e.text) != a.carrier.end())
        r_.fail_at(e.pos, "duplicate element " + e.text);
      r_.expect(":");
      Pos at = (r_.blank(), r_.pos());
      std::string text = r_.raw();
      std::vector<pca::Term> ts;
      std::size_t start = 0;
      for (;;) {
        std::size_t bar = text.find('|', start);
        std::string piece = text.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        ts.push_back(term(piece, {at.line, at.col + static_cast<int>(start)}));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      a.carrier.push_back(e.text);
      a.realizers.push_back(std::move(ts));
    });
    a = normalize_realizers(std::move(a), opts_.step_budget);
    a.validate();
    return a;
  }

  SiteBlock site() {
    SiteBlock s;
    std::vector<PartitionedAssembly> gens;
    body([&] {
      Name key = next_name("a site setting");
      r_.expect(":");
      if (key.text == "generators") {
        for (const auto& g : name_list(r_)) {
          gens.push_back(ref<PartitionedAssembly>(g, "passembly"));
          s.generators.push_back(g.text);
        }
      } else if (key.text == "term_size") {
        s.budget.max_term_size = r_.number();
      } else if (key.text == "step_budget") {
        s.budget.step_budget = r_.number();
      } else if (key.text == "arrow_cap") {
        s.arrow_cap = r_.number();
      } else {
        r_.fail_at(key.pos, "unknown site setting " + key.text);
      }
    });
    if (gens.empty()) r_.fail("site without generators");
    s.site = build_site(gens, s.budget, s.arrow_cap);
    return s;
  }

  Reader r_;
  ParseOptions opts_;
  std::vector<std::filesystem::path>& stack_;
  Document doc_;
  std::string where_;
};

// ---------------------------------------------------------------- emitter

struct CatNames {
  std::vector<std::string> objects;
  std::vector<std::string> arrows;
};

CatNames names_of(const FinCategory& c) {
  CatNames n;
  for (int x = 0; x < c.num_objects(); ++x) n.objects.push_back(c.object_name(x));
  if (!all_names_unique(n.objects))
    for (int x = 0; x < c.num_objects(); ++x) n.objects[idx(x)] = "o" + std::to_string(x);
  for (int x = 0; x < c.num_objects(); ++x) n.arrows.push_back("id_" + n.objects[idx(x)]);
  std::vector<std::string> rest;
  for (int a = c.num_objects(); a < c.num_arrows(); ++a) rest.push_back(c.arrow(a).name);
  std::vector<std::string> all = n.arrows;
  all.insert(all.end(), rest.begin(), rest.end());
  if (!all_names_unique(all))
    for (auto& r : rest) r = "h" + std::to_string(&r - rest.data());
  n.arrows.insert(n.arrows.end(), rest.begin(), rest.end());
  return n;
}

CatNames names_of(const FinGroupoid& g) {
  CatNames n;
  const std::vector<std::string>& objs = g.object_names();
  std::vector<std::string> all = objs;
  bool ok = true;
  for (int a = 0; a < g.num_arrows(); ++a) {
    const std::string& name = g.arrow(a).name;
    if (a < g.num_objects() && name != "id_" + objs[idx(a)]) ok = false;
    all.push_back(name);
  }
  if (ok && all_names_unique(all)) {
    n.objects = objs;
    for (int a = 0; a < g.num_arrows(); ++a) n.arrows.push_back(g.arrow(a).name);
    return n;
  }
  for (int x = 0; x < g.num_objects(); ++x) n.objects.push_back("x" + std::to_string(x));
  for (int x = 0; x < g.num_objects(); ++x) n.arrows.push_back("id_x" + std::to_string(x));
  for (int a = g.num_objects(); a < g.num_arrows(); ++a) n.arrows.push_back("u" + std::to_string(a - g.num_objects()));
  return n;
}

std::vector<std::vector<std::string>> labels_of(const Presheaf& x) {
  std::vector<std::vector<std::string>> out(idx(x.cat().num_objects()));
  for (int p = 0; p < x.cat().num_objects(); ++p) {
    for (int e = 0; e < x.size(p); ++e) out[idx(p)].push_back(x.label(p, e));
    if (!all_names_unique(out[idx(p)]))
      for (int e = 0; e < x.size(p); ++e) out[idx(p)][idx(e)] = "e" + std::to_string(e);
  }
  return out;
}

bool same_category(const FinCategory& a, const FinCategory& b) {
  if (!(a == b)) return false;
  for (int x = 0; x < a.num_objects(); ++x)
    if (a.object_name(x) != b.object_name(x)) return false;
  for (int f = 0; f < a.num_arrows(); ++f)
    if (a.arrow(f).name != b.arrow(f).name) return false;
  return true;
}

bool same_value(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, CategoryRef>) {
          return same_category(*x, *y);
        } else if constexpr (std::is_same_v<T, Presheaf>) {
          return x == y && labels_of(x) == labels_of(y);
        } else if constexpr (std::is_same_v<T, PartitionedAssembly>) {
          return x.carrier == y.carrier && x.realizer == y.realizer;
        } else if constexpr (std::is_same_v<T, Assembly>) {
          return x.carrier == y.carrier && x.realizers == y.realizers;
        } else if constexpr (std::is_same_v<T, SiteBlock>) {
          return x.generators == y.generators && x.budget.max_term_size == y.budget.max_term_size &&
                 x.budget.step_budget == y.budget.step_budget && x.arrow_cap == y.arrow_cap;
        } else {
          return x == y;
        }
      },
      a);
}

/// The equality the emitter uses to resolve references.
bool matches(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CategoryRef>)
          return *x == *std::get<T>(b);
        else if constexpr (std::is_same_v<T, SiteBlock> || std::is_same_v<T, PartitionedAssembly> ||
                           std::is_same_v<T, Assembly> || std::is_same_v<T, Presheaf>)
          return same_value(a, b);
        else
          return x == std::get<T>(b);
      },
      a);
}

class Emitter {
 public:
  explicit Emitter(const Document& d) : d_(d) {}

  std::string run() {
    for (const auto& i : d_.imports) out_ << "import \"" << i << "\"\n";
    for (std::size_t k = 0; k < d_.blocks.size(); ++k) {
      if (k > 0 || !d_.imports.empty()) out_ << "\n";
      current_ = k;
      std::visit([&](const auto& v) { emit(d_.blocks[k].name, v); }, d_.blocks[k].value);
    }
    return out_.str();
  }

 private:
  /// Earlier blocks (imported ones first) whose value matches.
  template <class T, class Eq>
  std::optional<std::string> find_before(Eq&& eq) const {
    for (const auto& b : d_.imported)
      if (auto* v = std::get_if<T>(&b.value); v && eq(*v)) return b.name;
    for (std::size_t k = 0; k < current_; ++k)
      if (auto* v = std::get_if<T>(&d_.blocks[k].value); v && eq(*v)) return d_.blocks[k].name;
    return std::nullopt;
  }

  /// Name of the base and the category carrying the names to use.
  std::pair<std::string, CategoryRef> base(const CategoryRef& c) const {
    if (auto n = find_before<CategoryRef>([&](const CategoryRef& x) { return x == c || same_category(*x, *c); }))
      return {*n, c};
    if (auto n = find_before<SiteBlock>([&](const SiteBlock& s) { return s.site.category == c; })) return {*n, c};
    for (const auto& s : stock::all())
      if (*s == *c) return {s->name(), s};
    if (auto n = find_before<CategoryRef>([&](const CategoryRef& x) { return *x == *c; })) {
      return {*n, *std::get_if<CategoryRef>(&d_.find(*n)->value)};
    }
    throw Error("emit: base category of block " + d_.blocks[current_].name + " is not declared");
  }

  template <class T>
  std::string ref(const T& v, const char* kind) const {
    if (auto n = find_before<T>([&](const T& x) { return matches(Value(x), Value(v)); })) return *n;
    throw Error("emit: " + std::string(kind) + " referenced by " + d_.blocks[current_].name + " is not declared");
  }

  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
  }

  void emit(const std::string& name, const CategoryRef& cr) {
    const FinCategory& c = *cr;
    auto n = names_of(c);
    out_ << "category " << name << " {\n  objects: " << join(n.objects) << "\n";
    for (int a = c.num_objects(); a < c.num_arrows(); ++a)
      out_ << "  " << n.arrows[idx(a)] << ": " << n.objects[idx(c.dom(a))] << " -> " << n.objects[idx(c.cod(a))] << "\n";
    for (int f = c.num_objects(); f < c.num_arrows(); ++f)
      for (int g : c.out(c.cod(f))) {
        if (c.is_identity(g)) continue;
        out_ << "  " << n.arrows[idx(g)] << " . " << n.arrows[idx(f)] << " = " << n.arrows[idx(c.compose(g, f))] << "\n";
      }
    out_ << "}\n";
  }

  void emit(const std::string& name, const Presheaf& x) {
    auto [bn, bc] = base(x.base());
    auto n = names_of(*bc);
    auto l = labels_of(x);
    const FinCategory& c = *bc;
    out_ << "presheaf " << name << " over " << bn << " {\n";
    for (int p = 0; p < c.num_objects(); ++p) {
      out_ << "  " << n.objects[idx(p)] << ":";
      if (x.size(p)) out_ << " " << join(l[idx(p)]);
      out_ << "\n";
    }
    for (int h = c.num_objects(); h < c.num_arrows(); ++h) {
      std::vector<std::string> pairs;
      for (int e = 0; e < x.size(c.cod(h)); ++e) pairs.push_back(l[idx(c.cod(h))][idx(e)] + " -> " + l[idx(c.dom(h))][idx(x.act(h, e))]);
      out_ << "  act " << n.arrows[idx(h)] << ":";
      if (!pairs.empty()) out_ << " " << join(pairs);
      out_ << "\n";
    }
    out_ << "}\n";
  }

  void emit(const std::string& name, const NatTransf& m) {
    std::string s = ref(m.source(), "presheaf"), t = ref(m.target(), "presheaf");
    auto [bn, bc] = base(m.source().base());
    auto n = names_of(*bc);
    auto ls = labels_of(m.source()), lt = labels_of(m.target());
    out_ << "map " << name << ": " << s << " -> " << t << " {\n";
    for (int p = 0; p < bc->num_objects(); ++p) {
      std::vector<std::string> pairs;
      for (int e = 0; e < m.source().size(p); ++e) pairs.push_back(ls[idx(p)][idx(e)] + " -> " + lt[idx(p)][idx(m(p, e))]);
      out_ << "  " << n.objects[idx(p)] << ":";
      if (!pairs.empty()) out_ << " " << join(pairs);
      out_ << "\n";
    }
    out_ << "}\n";
  }

  void emit(const std::string& name, const GpdPresheaf& g) {
    auto [bn, bc] = base(g.base());
    const FinCategory& c = *bc;
    auto n = names_of(c);
    std::vector<CatNames> sn;
    for (const auto& s : g.stages()) sn.push_back(names_of(s));
    out_ << "groupoid " << name << " over " << bn << " {\n";
    for (int p = 0; p < c.num_objects(); ++p) {
      const auto& s = g.stage(p);
      const auto& nm = sn[idx(p)];
      out_ << "  stage " << n.objects[idx(p)] << " {\n    objects:";
      if (s.num_objects()) out_ << " " << join(nm.objects);
      out_ << "\n";
      for (int a = s.num_objects(); a < s.num_arrows(); ++a)
        out_ << "    " << nm.arrows[idx(a)] << ": " << nm.objects[idx(s.dom(a))] << " -> " << nm.objects[idx(s.cod(a))] << "\n";
      for (int f = s.num_objects(); f < s.num_arrows(); ++f)
        for (int gg : s.out(s.cod(f))) {
          if (s.is_identity(gg) || s.hom(s.dom(f), s.cod(gg)).size() == 1) continue;
          out_ << "    " << nm.arrows[idx(gg)] << " . " << nm.arrows[idx(f)] << " = " << nm.arrows[idx(s.compose(gg, f))] << "\n";
        }
      out_ << "  }\n";
    }
    for (int h = c.num_objects(); h < c.num_arrows(); ++h) {
      out_ << "  act " << n.arrows[idx(h)] << ":";
      auto pairs = stage_pairs(g.stage(c.cod(h)), g.stage(c.dom(h)), sn[idx(c.cod(h))], sn[idx(c.dom(h))], g.act(h));
      if (!pairs.empty()) out_ << " " << join(pairs);
      out_ << "\n";
    }
    out_ << "}\n";
  }

  static std::vector<std::string> stage_pairs(const FinGroupoid& a, const FinGroupoid&, const CatNames& na,
                                              const CatNames& nb, const StageFunctor& f) {
    std::vector<std::string> pairs;
    for (int x = 0; x < a.num_objects(); ++x) pairs.push_back(na.objects[idx(x)] + " -> " + nb.objects[idx(f.obj[idx(x)])]);
    for (int u = a.num_objects(); u < a.num_arrows(); ++u) pairs.push_back(na.arrows[idx(u)] + " -> " + nb.arrows[idx(f.arr[idx(u)])]);
    return pairs;
  }

  void emit(const std::string& name, const GpdFunctor& f) {
    std::string s = ref(f.source(), "groupoid"), t = ref(f.target(), "groupoid");
    auto [bn, bc] = base(f.source().base());
    auto n = names_of(*bc);
    out_ << "gfunctor " << name << ": " << s << " -> " << t << " {\n";
    for (int p = 0; p < bc->num_objects(); ++p) {
      const auto& a = f.source().stage(p);
      if (a.num_objects() == 0) continue;
      auto pairs = stage_pairs(a, f.target().stage(p), names_of(a), names_of(f.target().stage(p)), f.stage(p));
      out_ << "  " << n.objects[idx(p)] << ": " << join(pairs) << "\n";
    }
    out_ << "}\n";
  }

  void emit(const std::string& name, const TwoCell& al) {
    std::string s = ref(al.source(), "gfunctor"), t = ref(al.target(), "gfunctor");
    const auto& src = al.source().source();
    auto [bn, bc] = base(src.base());
    auto n = names_of(*bc);
    out_ << "twocell " << name << ": " << s << " => " << t << " {\n";
    for (int p = 0; p < bc->num_objects(); ++p) {
      const auto& a = src.stage(p);
      if (a.num_objects() == 0) continue;
      auto na = names_of(a), nb = names_of(al.source().target().stage(p));
      std::vector<std::string> pairs;
      for (int x = 0; x < a.num_objects(); ++x) pairs.push_back(na.objects[idx(x)] + " -> " + nb.arrows[idx(al(p, x))]);
      out_ << "  " << n.objects[idx(p)] << ": " << join(pairs) << "\n";
    }
    out_ << "}\n";
  }

  void emit(const std::string& name, const PartitionedAssembly& a) {
    out_ << "passembly " << name << " {\n";
    for (std::size_t i = 0; i < a.carrier.size(); ++i) out_ << "  " << a.carrier[i] << ": " << a.realizer[i].to_string() << "\n";
    out_ << "}\n";
  }

  void emit(const std::string& name, const Assembly& a) {
    out_ << "assembly " << name << " {\n";
    for (std::size_t i = 0; i < a.carrier.size(); ++i) {
      out_ << "  " << a.carrier[i] << ":";
      for (std::size_t k = 0; k < a.realizers[i].size(); ++k) out_ << (k ? " | " : " ") << a.realizers[i][k].to_string();
      out_ << "\n";
    }
    out_ << "}\n";
  }

  void emit(const std::string& name, const SiteBlock& s) {
    out_ << "site " << name << " {\n  generators: " << join(s.generators) << "\n  term_size: " << s.budget.max_term_size
         << "\n  step_budget: " << s.budget.step_budget << "\n  arrow_cap: " << s.arrow_cap << "\n}\n";
  }

  const Document& d_;
  std::size_t current_ = 0;
  std::ostringstream out_;
};

}  // namespace

std::string kind_name(const Value& v) {
  static const char* names[] = {"category", "presheaf", "map", "groupoid", "gfunctor",
                                "twocell", "passembly", "assembly", "site"};
  return names[v.index()];
}

const Block* Document::find(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return &b;
  for (const auto& b : imported)
    if (b.name == name) return &b;
  return nullptr;
}

std::string Document::add(const std::string& name, const Value& v) {
  auto fresh = [&](const std::string& prefix) {
    for (int k = 0;; ++k) {
      std::string n = prefix + std::to_string(k);
      if (!find(n)) return n;
    }
  };
  auto ensure = [&](const Value& dep, const std::string& prefix) {
    for (const auto& b : blocks)
      if (matches(b.value, dep)) return;
    add(fresh(prefix), dep);
  };
  auto ensure_base = [&](const CategoryRef& c) {
    for (const auto& s : stock::all())
      if (*s == *c) return;
    for (const auto& b : blocks) {
      if (auto* x = std::get_if<CategoryRef>(&b.value); x && **x == *c) return;
      if (auto* s = std::get_if<SiteBlock>(&b.value); s && s->site.category == c) return;
    }
    add(fresh("C"), c);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Presheaf> || std::is_same_v<T, GpdPresheaf>) {
          ensure_base(x.base());
        } else if constexpr (std::is_same_v<T, NatTransf>) {
          ensure(x.source(), "X");
          ensure(x.target(), "X");
        } else if constexpr (std::is_same_v<T, GpdFunctor>) {
          ensure(x.source(), "G");
          ensure(x.target(), "G");
        } else if constexpr (std::is_same_v<T, TwoCell>) {
          ensure(x.source(), "F");
          ensure(x.target(), "F");
        }
      },
      v);
  std::string n = find(name) ? fresh(name) : name;
  blocks.push_back({n, v, 0});
  return n;
}

Document parse(const std::string& text, const std::string& file, const ParseOptions& opts) {
  std::vector<std::filesystem::path> stack;
  return Parser(text, file, opts, stack).run();
}

Document parse_file(const std::filesystem::path& path, ParseOptions opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  opts.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  std::vector<std::filesystem::path> stack{std::filesystem::weakly_canonical(path)};
  return Parser(ss.str(), path.string(), opts, stack).run();
}

std::string emit(const Document& doc) { return Emitter(doc).run(); }

bool same(const Document& a, const Document& b) {
  if (a.imports != b.imports || a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    if (a.blocks[k].name != b.blocks[k].name || !same_value(a.blocks[k].value, b.blocks[k].value)) return false;
  return true;
}

}  // namespace e2t::format
