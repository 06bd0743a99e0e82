#pragma once

#include <cstdint>
#include <optional>

#include "e2t/groupoid.hpp"

namespace e2t {

/// Injective on objects at every stage.
bool is_cofibration(const GpdFunctor& f);

/// Stagewise surjective on objects and fully faithful.
bool is_objectwise_trivial_fibration(const GpdFunctor& q);

/// q: 𝔼 -> 𝔾 with a section s (q s = id) and eps: s q => id lying over
/// identities of 𝔾.
struct TrivFibWitness {
  GpdFunctor q;
  GpdFunctor s;
  TwoCell eps;
  bool check() const;
};

struct FactorizationResult {
  GpdPresheaf middle;
  GpdFunctor left;
  GpdFunctor right;
  /// Trivial cofibration data: a retraction of `left` with left . r => id.
  std::optional<QuasiInverse> left_equivalence;
  std::optional<CleavageWitness> cleavage;
  std::optional<TrivFibWitness> trivfib;
};

/// Middle objects (x, phi: f x -> y, y); left x |-> (x, id, f x), right the
/// y leg with compose-with-iso lifts.
FactorizationResult factor_trivcof_fib(const GpdFunctor& f);

/// Middle objects F0 + G0 with homs copied from 𝔾 along f; left the F0
/// inclusion, right the trivial fibration onto 𝔾.
FactorizationResult factor_cof_trivfib(const GpdFunctor& f);

/// left: 𝔸 -> 𝔹, right: 𝔼 -> 𝔾, top: 𝔸 -> 𝔼, bottom: 𝔹 -> 𝔾.
struct LiftingSquare {
  GpdFunctor left;
  GpdFunctor right;
  GpdFunctor top;
  GpdFunctor bottom;
  bool commutes() const;
};

class NotACofibration : public Error {
 public:
  using Error::Error;
};

class SquareDoesNotCommute : public Error {
 public:
  using Error::Error;
};

/// No natural choice of objects exists for the diagonal. Cannot happen when
/// the complement of the cofibration's image is closed under restriction.
class LiftUnavailable : public Error {
 public:
  using Error::Error;
};

/// Diagonal d: 𝔹 -> 𝔼 with d . left = top and q . d = bottom, where the
/// square's right map is w.q. Objects outside the image of the cofibration
/// go to s(bottom b) when that is natural, otherwise a natural choice over
/// bottom is searched; arrows are the unique q-preimages.
GpdFunctor lift(const LiftingSquare& square, const TrivFibWitness& w, SearchLimits limits = {});

/// (s, eps^-1, id).
QuasiInverse quasi_inverse_from_trivfib(const TrivFibWitness& w);

/// <dom, cod>: G1 -> G0 x G0 is pointwise injective.
bool is_equivalence_relation_gpd(const GpdPresheaf& g);

struct ZeroTypeReport {
  bool holds = false;
  PathGroupoid path;
  /// Pairs of parallel isomorphisms: P𝔾 x_{𝔾x𝔾} P𝔾.
  GpdPullback h;
  /// x |-> (id_x, id_x).
  GpdFunctor comparison;
  WeakEquivalenceReport weak;
};

ZeroTypeReport is_0type(const GpdPresheaf& g);

struct DiagonalCount {
  std::uint64_t count = 0;
  bool exhausted = false;
};

/// Number of diagonals of a commuting square, by exhaustive functor search.
DiagonalCount count_diagonals(const LiftingSquare& square, SearchLimits limits = {});

/// Some diagonal exists. Throws SearchExhausted.
bool has_rlp(const LiftingSquare& square, SearchLimits limits = {});

}  // namespace e2t
