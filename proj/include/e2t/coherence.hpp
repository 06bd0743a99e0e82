#pragma once

#include <optional>
#include <utility>

#include "e2t/groupoid.hpp"

namespace e2t {

/// An element x of G0(P) whose induced y(P)̲ -> 𝔾 is essentially surjective
/// on objects at every stage.
struct PseudoCompactCover {
  int obj = 0;
  int elem = 0;
};

/// Representable covers are tried in (object, element) order.
std::optional<PseudoCompactCover> find_pseudo_compact_cover(const GpdPresheaf& g);

/// Stagewise essential surjectivity of the functor induced by x in G0(P).
bool is_eso_element(const GpdPresheaf& g, int obj, int elem);

struct Strictification {
  PseudoCompactCover cover;
  Presheaf k0;             // y(P)
  PullbackResult k0_square;  // y(P) x y(P)
  /// K1 with left leg into y(P) x y(P) and right leg into G1.
  PullbackResult k1;
  GpdPresheaf k;
  GpdFunctor to_g;
  WeakEquivalenceReport weak;
};

Strictification strictify(const GpdPresheaf& g, PseudoCompactCover cover);

struct CoherenceCondition {
  bool holds = false;
  /// (stage, element of the target) where a pullback is not compact.
  std::optional<std::pair<int, int>> failure;
};

struct CoherenceReport {
  std::optional<PseudoCompactCover> pseudo_compact;
  std::optional<Strictification> strictified;
  /// K1 -> K0 x K0 is compact.
  CoherenceCondition cond2;
  /// K1 -> K1 x_{K0 x K0} K1 is compact.
  CoherenceCondition cond3;
  std::optional<PullbackResult> k1_pair;
  std::optional<NatTransf> k1_diagonal;
  bool holds = false;
};

CoherenceReport is_coherent_groupoid(const GpdPresheaf& g);

struct SecondDiagonal {
  GpdPullback square;  // 𝔾 x 𝔾
  GpdFunctor delta;    // 𝔾 -> 𝔾 x 𝔾
  /// 𝔾 x_{𝔾x𝔾} 𝔾 as the iso-comma of delta against itself.
  PseudoPullback paths;
  /// x |-> (x, id, x).
  GpdFunctor delta2;
};

SecondDiagonal second_diagonal(const GpdPresheaf& g);

class TransportFailure : public Error {
 public:
  using Error::Error;
};

/// Coherence report for the target of a weak equivalence. Throws
/// PreconditionError when e is not a weak equivalence and TransportFailure
/// when a coherent source gives an incoherent target.
CoherenceReport transport_coherence(const GpdFunctor& e, const CoherenceReport& source);

}  // namespace e2t
