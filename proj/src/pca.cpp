#include "e2t/pca.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <unordered_set>

#include "e2t/error.hpp"

namespace e2t::pca {

struct Term::Node {
  Atom atom = Atom::K;
  bool is_atom = true;
  std::optional<Term> fun;
  std::optional<Term> arg;
  std::uint64_t size = 1;
  std::uint64_t nodes = 1;
  std::size_t hash = 0;
};

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
  return a > m - b ? m : a + b;
}

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

const std::shared_ptr<const Term::Node>& atom_node(Atom a) {
  static const auto k = [] {
    auto n = std::make_shared<Term::Node>();
    n->atom = Atom::K;
    n->hash = 0x4b;
    return std::shared_ptr<const Term::Node>(n);
  }();
  static const auto s = [] {
    auto n = std::make_shared<Term::Node>();
    n->atom = Atom::S;
    n->hash = 0x53;
    return std::shared_ptr<const Term::Node>(n);
  }();
  return a == Atom::K ? k : s;
}

}  // namespace

Term Term::k() { return Term(atom_node(Atom::K)); }
Term Term::s() { return Term(atom_node(Atom::S)); }
Term Term::atom(Atom a) { return Term(atom_node(a)); }

Term Term::apply(const Term& fun, const Term& arg) {
  auto n = std::make_shared<Node>();
  n->is_atom = false;
  n->fun = fun;
  n->arg = arg;
  n->size = sat_add(fun.node_->size, arg.node_->size);
  n->nodes = sat_add(sat_add(fun.node_->nodes, arg.node_->nodes), 1);
  n->hash = mix(mix(0xa9, fun.node_->hash), arg.node_->hash);
  return Term(std::move(n));
}

bool Term::is_atom() const noexcept { return node_->is_atom; }

Atom Term::atom_kind() const {
  if (!node_->is_atom) throw PreconditionError("atom_kind on an application");
  return node_->atom;
}

const Term& Term::fun() const {
  if (node_->is_atom) throw PreconditionError("fun on an atom");
  return *node_->fun;
}

const Term& Term::arg() const {
  if (node_->is_atom) throw PreconditionError("arg on an atom");
  return *node_->arg;
}

std::uint64_t Term::size() const noexcept { return node_->size; }
std::uint64_t Term::node_count() const noexcept { return node_->nodes; }
std::size_t Term::hash() const noexcept { return node_->hash; }

namespace {

constexpr std::size_t kPrintLimit = 4096;

void print(const Term::Node* n, bool paren, std::string& out) {
  if (out.size() > kPrintLimit) return;
  if (n->is_atom) {
    out += n->atom == Atom::K ? 'K' : 'S';
    return;
  }
  if (paren) out += '(';
  print(n->fun->node(), false, out);
  out += ' ';
  print(n->arg->node(), true, out);
  if (paren) out += ')';
}

bool equal_nodes(const Term::Node* a, const Term::Node* b) {
  while (true) {
    if (a == b) return true;
    if (a->hash != b->hash || a->size != b->size || a->nodes != b->nodes ||
        a->is_atom != b->is_atom)
      return false;
    if (a->is_atom) return a->atom == b->atom;
    if (!equal_nodes(a->fun->node(), b->fun->node())) return false;
    a = a->arg->node();
    b = b->arg->node();
  }
}

std::strong_ordering compare_nodes(const Term::Node* a, const Term::Node* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->size <=> b->size; c != 0) return c;
  if (a->is_atom != b->is_atom) return a->is_atom ? std::strong_ordering::less
                                                  : std::strong_ordering::greater;
  if (a->is_atom) return a->atom <=> b->atom;
  if (auto c = compare_nodes(a->fun->node(), b->fun->node()); c != 0) return c;
  return compare_nodes(a->arg->node(), b->arg->node());
}

}  // namespace

std::string Term::to_string() const {
  std::string out;
  print(node_.get(), false, out);
  if (out.size() > kPrintLimit) {
    out.resize(kPrintLimit);
    out += " ...";
  }
  return out;
}

bool operator==(const Term& a, const Term& b) { return equal_nodes(a.node(), b.node()); }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  return compare_nodes(a.node(), b.node());
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Term parse_all() {
    Term t = parse_seq();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return t;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError("<term>", 1, static_cast<int>(pos_) + 1,
                      what + " in term '" + std::string(s_) + "'");
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::optional<Term> parse_primary() {
    skip();
    if (pos_ >= s_.size()) return std::nullopt;
    char c = s_[pos_];
    if (c == 'S' || c == 'K') {
      ++pos_;
      return c == 'S' ? Term::s() : Term::k();
    }
    if (c == '(') {
      ++pos_;
      Term t = parse_seq();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    return std::nullopt;
  }

  Term parse_seq() {
    auto first = parse_primary();
    if (!first) fail("expected S, K or '('");
    Term t = *first;
    while (auto next = parse_primary()) t = Term::apply(t, *next);
    return t;
  }
};

}  // namespace

Term Term::parse(std::string_view text) { return Parser(text).parse_all(); }

Term identity_term() { return app(Term::s(), Term::k(), Term::k()); }

Term compose_combinator() {
  return app(Term::s(), Term::apply(Term::k(), Term::s()), Term::k());
}

namespace {

class Reducer {
 public:
  explicit Reducer(std::size_t budget) : budget_(budget) {}

  std::optional<Term> normalize(Term t) {
    std::vector<Term> args;
    while (true) {
      args.clear();
      Term head = t;
      while (!head.is_atom()) {
        args.push_back(head.arg());
        head = head.fun();
      }
      std::reverse(args.begin(), args.end());
      Atom a = head.atom_kind();
      std::size_t used = 0;
      if (a == Atom::K && args.size() >= 2) {
        if (steps_ == budget_) return std::nullopt;
        ++steps_;
        t = args[0];
        used = 2;
      } else if (a == Atom::S && args.size() >= 3) {
        if (steps_ == budget_) return std::nullopt;
        ++steps_;
        t = Term::apply(Term::apply(args[0], args[2]), Term::apply(args[1], args[2]));
        used = 3;
      } else {
        break;
      }
      for (std::size_t i = used; i < args.size(); ++i) t = Term::apply(t, args[i]);
    }
    // Head normal: the remaining redexes sit in the arguments, left to right.
    Term out = t;
    while (!out.is_atom()) out = out.fun();
    bool changed = false;
    for (const Term& arg : args) {
      auto n = normalize_memo(arg);
      if (!n) return std::nullopt;
      changed = changed || n->node() != arg.node();
      out = Term::apply(out, *n);
    }
    return changed ? out : t;
  }

  std::size_t steps() const { return steps_; }

 private:
  std::size_t budget_;
  std::size_t steps_ = 0;
  // Nodes already known to be normal; revisiting them costs no steps, so
  // skipping them keeps step counts exact while avoiding re-traversal.
  std::unordered_set<const Term::Node*> normal_;
  std::vector<Term> keep_;

  std::optional<Term> normalize_memo(const Term& t) {
    if (normal_.count(t.node())) return t;
    auto n = normalize(t);
    if (n) {
      keep_.push_back(*n);
      normal_.insert(n->node());
    }
    return n;
  }
};

}  // namespace

ReductionOutcome reduce(const Term& t, std::size_t budget) {
  Reducer r(budget);
  auto n = r.normalize(t);
  if (!n) return Timeout{r.steps()};
  return Normal{*n, r.steps()};
}

bool is_normal(const Term& t) {
  auto out = reduce(t, 0);
  return std::holds_alternative<Normal>(out);
}

std::vector<Term> terms_of_size(std::size_t size) {
  std::vector<std::vector<Term>> cache{{}, {Term::k(), Term::s()}};
  if (size == 0) return {};
  while (cache.size() <= size) {
    std::size_t n = cache.size();
    std::vector<Term> level;
    for (std::size_t i = 1; i < n; ++i)
      for (const Term& l : cache[i])
        for (const Term& r : cache[n - i]) level.push_back(Term::apply(l, r));
    cache.push_back(std::move(level));
  }
  return cache[size];
}

TrackOutcome tracks(const Term& t, std::span<const int> fn, const RealizerSets& source,
                    const RealizerSets& target, std::size_t budget) {
  bool timed_out = false;
  for (std::size_t a = 0; a < fn.size(); ++a) {
    const auto& want = target.at(static_cast<std::size_t>(fn[a]));
    for (const Term& u : source.at(a)) {
      auto out = reduce(Term::apply(t, u), budget);
      if (auto* n = std::get_if<Normal>(&out)) {
        if (std::find(want.begin(), want.end(), n->term) == want.end()) return TrackOutcome::Fails;
      } else {
        timed_out = true;
      }
    }
  }
  return timed_out ? TrackOutcome::TimeoutEncountered : TrackOutcome::Tracks;
}

Term compose_trackers(const Term& t_g, const Term& t_f) {
  return app(compose_combinator(), t_g, t_f);
}

}  // namespace e2t::pca
