#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "e2t/assemblies.hpp"
#include "e2t/coherence.hpp"
#include "e2t/generate.hpp"

namespace e2t {

class NotZeroType : public Error {
 public:
  using Error::Error;
};

struct Presentation {
  NatTransf cover;        // y(P) ->> G
  PullbackResult kernel;  // kernel pair of the cover
  /// K1 -> kernel pair induced by the two legs; pointwise bijective.
  NatTransf comparison;
  bool kernel_pair = false;
  bool coequalizer = false;
};

struct DiscretizationResult {
  Presheaf G;
  Strictification strict;
  PresheafCoherence presheaf_coherence;
  CoherenceReport coherence;  // of discrete(G)
  /// 𝕂 -> discrete(G), x |-> [x].
  GpdFunctor equivalence;
  DiscreteTargetReport certificate;
  Presentation presentation;

  /// Replays every certificate.
  bool check() const;
};

/// Strictifies along the first pseudo-compact cover, checks K1 -> K0 x K0 is
/// monic, then coherence, and quotients y(P) by K1. Throws NotCoherent (no
/// cover, or the coherence conditions fail) and NotZeroType.
DiscretizationResult discretize(const GpdPresheaf& g);

struct Classification {
  std::optional<int> indecomposable_projective;
  std::optional<CompactnessWitness> compact;
  PresheafCoherence coherent;
  std::optional<AssemblyLikeWitness> assembly_like;
  bool lex_base = false;

  bool is_ind_proj() const { return indecomposable_projective.has_value(); }
  bool is_compact() const { return compact.has_value(); }
  bool is_coherent() const { return coherent.holds; }
  bool is_assembly_like() const { return assembly_like.has_value(); }
  /// ind-proj, coherent and assembly-like each imply compact; over a lex
  /// base also ind-proj => assembly-like => coherent.
  bool chain_consistent() const;
};

Classification classify(const Presheaf& x);

// ---------------------------------------------------------------- generation

namespace gen {

enum class Kind { Site, Presheaf, Groupoid, Functor };

struct Bounds {
  /// Stock base; ignored for sites.
  CategoryRef base;
  int max_stage = 3;
  int max_order = 3;
};

using Instance = std::variant<e2t::Site, e2t::Presheaf, GpdPresheaf, GpdFunctor>;

/// Deterministic in seed. Throws GenerationExhausted after kRetryCap
/// rejected attempts.
Instance generate(Kind kind, std::uint64_t seed, const Bounds& bounds);

/// A random site on one to three small partitioned assemblies.
e2t::Site site(Rng& rng);

/// Groupoid with objects E and arrows the kernel pair of an epi e: E ->> C.
GpdPresheaf kernel_groupoid(const NatTransf& e);

struct WeakEquivalence {
  GpdFunctor map;
  std::string construction;
};

/// A weak equivalence built by one of: path groupoid unit or leg,
/// strictification, trivial cofibration, trivial fibration, quotient onto the
/// components, or a random functor accepted by is_weak_equivalence.
WeakEquivalence weak_equivalence(Rng& rng, const CategoryRef& base, GroupoidBounds bounds = {3, 2, 40});

/// A coherent groupoid with monic K1 -> K0 x K0: a kernel groupoid of a
/// cover of a coherent presheaf, or a filtered random groupoid.
GpdPresheaf coherent_eqrel_groupoid(Rng& rng, const CategoryRef& base);

/// A random presheaf accepted by is_coherent_presheaf.
e2t::Presheaf coherent_presheaf(Rng& rng, const CategoryRef& base, PresheafBounds bounds = {});

}  // namespace gen

// ---------------------------------------------------------------- lemma harness

class UnknownLemma : public Error {
 public:
  explicit UnknownLemma(const std::string& id) : Error("unknown lemma: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

enum class Verdict { Pass, Fail, Inconclusive };

struct InstanceOutcome {
  Verdict verdict = Verdict::Pass;
  std::string detail;
  /// .e2t document reproducing the instance; filled on failure.
  std::string dump;
};

struct LemmaReport {
  std::string lemma;
  int instances = 0;
  int failures = 0;
  int inconclusive = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0;
  /// (instance index, outcome) of every failing or inconclusive instance.
  std::vector<std::pair<int, InstanceOutcome>> notes;
};

struct LemmaInfo {
  std::string id;
  std::string statement;
};

const std::vector<LemmaInfo>& lemma_registry();

/// Instance i is generated from Rng(seed).fork(i). Throws UnknownLemma.
LemmaReport verify_lemma(const std::string& id, int count, std::uint64_t seed);

}  // namespace e2t
