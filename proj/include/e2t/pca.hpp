#pragma once

// Closed S/K combinatory terms with bounded normal-order reduction. This is the
// realizer algebra behind (partitioned) assemblies.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace e2t::pca {

inline constexpr std::size_t kDefaultStepBudget = 10'000;

/// Atoms are ordered K < S; this is the order used by tracker enumeration.
enum class Atom : std::uint8_t { K = 0, S = 1 };

class Term {
 public:
  static Term k();
  static Term s();
  static Term atom(Atom a);
  static Term apply(const Term& fun, const Term& arg);

  /// Parses the surface syntax, e.g. `S (K S) K`. Application is juxtaposition
  /// and associates to the left.
  static Term parse(std::string_view text);

  bool is_atom() const noexcept;
  Atom atom_kind() const;
  const Term& fun() const;
  const Term& arg() const;

  /// Number of atom leaves. This is the size used by tracker search.
  std::uint64_t size() const noexcept;
  /// Atoms plus application nodes.
  std::uint64_t node_count() const noexcept;
  std::size_t hash() const noexcept;

  std::string to_string() const;

  Term operator()(const Term& arg) const { return apply(*this, arg); }

  friend bool operator==(const Term& a, const Term& b);
  /// Enumeration order: size first, then atoms before applications, then
  /// function part, then argument part.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  struct Node;
  const Node* node() const noexcept { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Left-nested application `t a0 a1 ...`.
template <class... Args>
Term app(const Term& t, const Args&... args) {
  Term out = t;
  ((out = Term::apply(out, args)), ...);
  return out;
}

/// S K K.
Term identity_term();
/// S (K S) K: composition combinator, B g f x ~> g (f x).
Term compose_combinator();

struct Normal {
  Term term;
  std::size_t steps = 0;
};
struct Timeout {
  std::size_t steps = 0;
};
using ReductionOutcome = std::variant<Normal, Timeout>;

/// Normal-order reduction to full normal form within `budget` contractions.
/// Each contraction is one step; the count matches reduction on the
/// unshared term tree.
ReductionOutcome reduce(const Term& t, std::size_t budget = kDefaultStepBudget);

bool is_normal(const Term& t);

/// All terms with exactly `size` atoms, in enumeration order.
std::vector<Term> terms_of_size(std::size_t size);

using RealizerSets = std::vector<std::vector<Term>>;

enum class TrackOutcome { Tracks, Fails, TimeoutEncountered };

/// Does `t` send every realizer of every `a` to a realizer of `fn[a]`? A
/// definite mismatch wins over a timeout elsewhere.
TrackOutcome tracks(const Term& t, std::span<const int> fn, const RealizerSets& source,
                    const RealizerSets& target, std::size_t budget = kDefaultStepBudget);

/// B t_g t_f with B = S (K S) K.
Term compose_trackers(const Term& t_g, const Term& t_f);

}  // namespace e2t::pca

template <>
struct std::hash<e2t::pca::Term> {
  std::size_t operator()(const e2t::pca::Term& t) const noexcept { return t.hash(); }
};
