#pragma once

// Independent reference reducer: explicit trees, one leftmost-outermost
// contraction per call, no sharing. Used only to cross-check pca::reduce.

#include <memory>
#include <optional>
#include <string>

#include "e2t/pca.hpp"
#include "e2t/random.hpp"

namespace oracle {

struct Tree {
  char atom = 0;  // 'S', 'K' or 0 for application
  std::shared_ptr<Tree> l, r;
};
using P = std::shared_ptr<Tree>;

inline P atom(char c) {
  auto t = std::make_shared<Tree>();
  t->atom = c;
  return t;
}
inline P ap(P l, P r) {
  auto t = std::make_shared<Tree>();
  t->l = std::move(l);
  t->r = std::move(r);
  return t;
}

inline P copy(const P& t) { return t->atom ? atom(t->atom) : ap(copy(t->l), copy(t->r)); }

inline P from_term(const e2t::pca::Term& t) {
  if (t.is_atom()) return atom(t.atom_kind() == e2t::pca::Atom::S ? 'S' : 'K');
  return ap(from_term(t.fun()), from_term(t.arg()));
}

inline std::string show(const P& t, bool paren = false) {
  if (t->atom) return std::string(1, t->atom);
  std::string s = show(t->l) + " " + show(t->r, true);
  return paren ? "(" + s + ")" : s;
}

inline long tree_size(const P& t) { return t->atom ? 1 : tree_size(t->l) + tree_size(t->r) + 1; }

// Contracts the leftmost-outermost redex; returns false when t is normal.
inline bool step(P& t) {
  // Spine: t = h a1 ... an.
  std::vector<P*> spine;
  P* cur = &t;
  while (!(*cur)->atom) {
    spine.push_back(cur);
    cur = &(*cur)->l;
  }
  char h = (*cur)->atom;
  std::size_t n = spine.size();
  auto arg = [&](std::size_t i) { return (*spine[n - 1 - i])->r; };
  if (h == 'K' && n >= 2) {
    *spine[n - 2] = arg(0);
    return true;
  }
  if (h == 'S' && n >= 3) {
    P x = arg(0), y = arg(1), z = arg(2);
    *spine[n - 3] = ap(ap(x, z), ap(y, copy(z)));
    return true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (step((*spine[n - 1 - i])->r)) return true;
  return false;
}

struct Result {
  bool normal = false;
  std::string nf;
  std::size_t steps = 0;
};

/// nullopt when the tree grows past `size_cap` (instance skipped).
inline std::optional<Result> reduce(const e2t::pca::Term& t, std::size_t budget, long size_cap = 200000) {
  P tree = from_term(t);
  Result r;
  while (true) {
    if (tree_size(tree) > size_cap) return std::nullopt;
    if (r.steps == budget) {
      P c = copy(tree);
      if (step(c)) return r;
      r.normal = true;
      r.nf = show(tree);
      return r;
    }
    if (!step(tree)) {
      r.normal = true;
      r.nf = show(tree);
      return r;
    }
    ++r.steps;
  }
}

inline e2t::pca::Term random_term(e2t::Rng& rng, int atoms) {
  using e2t::pca::Term;
  if (atoms <= 1) return rng.chance(1, 2) ? Term::s() : Term::k();
  int left = rng.between(1, atoms - 1);
  return Term::apply(random_term(rng, left), random_term(rng, atoms - left));
}

}  // namespace oracle
