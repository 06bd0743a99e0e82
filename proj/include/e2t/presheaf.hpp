#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "e2t/category.hpp"
#include "e2t/error.hpp"

namespace e2t {

/// Finite presheaf on a FinCategory. `act(h)` for h: Q -> P maps stage P to
/// stage Q; identities act as identities.
class Presheaf {
 public:
  using Table = std::vector<std::vector<int>>;

  /// Validates sizes, ranges, identity and composition laws.
  Presheaf(CategoryRef base, std::vector<int> sizes, Table act,
           std::vector<std::vector<std::string>> labels = {});
  static Presheaf unchecked(CategoryRef base, std::vector<int> sizes, Table act,
                            std::vector<std::vector<std::string>> labels = {});

  const CategoryRef& base() const { return d_->base; }
  const FinCategory& cat() const { return *d_->base; }
  int size(int obj) const { return d_->sizes[static_cast<std::size_t>(obj)]; }
  const std::vector<int>& sizes() const { return d_->sizes; }
  int total_size() const;
  int act(int arrow, int x) const {
    return d_->act[static_cast<std::size_t>(arrow)][static_cast<std::size_t>(x)];
  }
  const std::vector<int>& act_table(int arrow) const { return d_->act[static_cast<std::size_t>(arrow)]; }
  const Table& act_tables() const { return d_->act; }
  bool has_labels() const { return !d_->labels.empty(); }
  const std::vector<std::vector<std::string>>& labels() const { return d_->labels; }
  std::string label(int obj, int x) const;
  std::optional<int> element_index(int obj, const std::string& label) const;
  Presheaf with_labels(std::vector<std::vector<std::string>> labels) const;
  bool is_empty() const;

  /// Throws InvariantViolation naming the failing law.
  void validate(const std::string& block = "presheaf") const;

  /// Same base and identical tables.
  friend bool operator==(const Presheaf& a, const Presheaf& b);

 private:
  struct Data {
    CategoryRef base;
    std::vector<int> sizes;
    Table act;
    std::vector<std::vector<std::string>> labels;
  };
  explicit Presheaf(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// Natural transformation between presheaves over one base.
class NatTransf {
 public:
  using Components = std::vector<std::vector<int>>;

  NatTransf(Presheaf source, Presheaf target, Components comp);
  static NatTransf unchecked(Presheaf source, Presheaf target, Components comp);

  const Presheaf& source() const { return source_; }
  const Presheaf& target() const { return target_; }
  int operator()(int obj, int x) const {
    return comp_[static_cast<std::size_t>(obj)][static_cast<std::size_t>(x)];
  }
  const Components& components() const { return comp_; }
  const std::vector<int>& component(int obj) const { return comp_[static_cast<std::size_t>(obj)]; }

  bool is_epi() const;
  bool is_mono() const;
  bool is_iso() const { return is_epi() && is_mono(); }
  void validate(const std::string& block = "map") const;

  friend bool operator==(const NatTransf& a, const NatTransf& b);

 private:
  struct NoCheck {};
  NatTransf(Presheaf source, Presheaf target, Components comp, NoCheck)
      : source_(std::move(source)), target_(std::move(target)), comp_(std::move(comp)) {}
  Presheaf source_;
  Presheaf target_;
  Components comp_;
};

// ---------------------------------------------------------------- constructions

Presheaf yoneda(const CategoryRef& base, int obj);
Presheaf terminal(const CategoryRef& base);
Presheaf initial(const CategoryRef& base);
NatTransf identity(const Presheaf& x);
/// g . f.
NatTransf compose(const NatTransf& g, const NatTransf& f);
/// y(P) -> X at element x of X(P).
NatTransf element_to_map(const Presheaf& x, int obj, int elem);
/// The element of X(P) classified by a map y(P) -> X.
int map_to_element(const NatTransf& m, int obj);
NatTransf to_terminal(const Presheaf& x);
/// y(u): y(Q) -> y(P) for u: Q -> P.
NatTransf yoneda_map(const CategoryRef& base, int arrow);
/// Position of each arrow inside its hom list.
int hom_position(const FinCategory& c, int arrow);
NatTransf from_initial(const Presheaf& x);

/// Limit cone with an index for each tuple.
struct PullbackResult {
  Presheaf apex;
  NatTransf left;
  NatTransf right;
  /// index[obj][a * right_sizes[obj] + b] is the apex element or -1.
  std::vector<std::vector<int>> index;
  std::vector<int> right_sizes;
  /// Apex element at (a, b) or -1.
  int lookup(int obj, int a, int b) const {
    return index[static_cast<std::size_t>(obj)]
                [static_cast<std::size_t>(a * right_sizes[static_cast<std::size_t>(obj)] + b)];
  }
};

/// Pullback of f: A -> C and g: B -> C; elements ordered by (a, b).
PullbackResult pullback(const NatTransf& f, const NatTransf& g);
PullbackResult product(const Presheaf& a, const Presheaf& b);
PullbackResult kernel_pair(const NatTransf& f);
/// <f, g>: X -> A x B into a given product.
NatTransf pairing(const PullbackResult& prod, const NatTransf& f, const NatTransf& g);
/// Universal map into a pullback from a commuting cone.
NatTransf into_pullback(const PullbackResult& pb, const NatTransf& f, const NatTransf& g);
NatTransf diagonal(const Presheaf& x, const PullbackResult& prod);

struct EqualizerResult {
  Presheaf apex;
  NatTransf inclusion;
};
EqualizerResult equalizer(const NatTransf& f, const NatTransf& g);

struct CoproductResult {
  Presheaf apex;
  NatTransf left;
  NatTransf right;
};
CoproductResult coproduct(const Presheaf& a, const Presheaf& b);

struct QuotientResult {
  Presheaf quotient;
  NatTransf projection;
};
/// Quotient of A by the relation <r1, r2>: K -> A x A. Classes are numbered
/// by their least element. Throws NotEquivalenceRelation.
QuotientResult coequalize_eqrel(const NatTransf& r1, const NatTransf& r2);

class NotEquivalenceRelation : public Error {
 public:
  using Error::Error;
};

struct ImageResult {
  Presheaf image;
  NatTransf epi;
  NatTransf mono;
};
ImageResult image(const NatTransf& f);

/// Is <f, g>: K -> A x A a pointwise equivalence relation (not necessarily
/// monic)?
bool is_equivalence_relation(const NatTransf& r1, const NatTransf& r2);

// ---------------------------------------------------------------- search

/// Controls a section-style search: variables are pairs (obj, elem) of a
/// domain presheaf, each choosing a value in the matching stage of a codomain.
struct SearchLimits {
  std::uint64_t node_cap = 2'000'000;
};

enum class SearchStatus { Found, NotFound, Exhausted };

struct MapSearchOptions {
  /// Unary constraint on the value y chosen for element x of stage obj.
  std::function<bool(int obj, int x, int y)> allowed;
  /// Permutes the candidate list of a variable; ascending order otherwise.
  std::function<void(int obj, int x, std::vector<int>& candidates)> reorder;
  bool injective = false;
  SearchLimits limits;
};

/// Backtracking over natural maps X -> Y with forward forcing along
/// restrictions. Variables are visited in (obj, elem) order, so with the
/// default candidate order maps arrive lexicographically. `visit` returns
/// false to stop; Found means it stopped, NotFound that the space was covered.
SearchStatus search_nat_transfs(const Presheaf& x, const Presheaf& y, const MapSearchOptions& opts,
                                const std::function<bool(const NatTransf&)>& visit);
std::vector<NatTransf> all_nat_transfs(const Presheaf& x, const Presheaf& y);

/// The first natural s: X -> E found with p . s = id_X (p: E -> X).
std::pair<SearchStatus, std::optional<NatTransf>> find_section(const NatTransf& p,
                                                               SearchLimits limits = {});

/// The first natural g: X -> Y found satisfying `allowed`.
std::pair<SearchStatus, std::optional<NatTransf>> find_constrained_map(
    const Presheaf& x, const Presheaf& y, const std::function<bool(int, int, int)>& allowed,
    SearchLimits limits = {});

std::optional<NatTransf> find_iso(const Presheaf& a, const Presheaf& b);

// ---------------------------------------------------------------- classification

struct CompactnessWitness {
  int obj = 0;
  int elem = 0;
};

/// First (obj, elem) whose Yoneda map is pointwise surjective.
std::optional<CompactnessWitness> is_compact(const Presheaf& x);

struct CompactMapReport {
  bool holds = true;
  /// (obj, elem) of the target at which the pullback is not compact.
  std::vector<std::pair<int, int>> failures;
};

/// Every pullback of f along a map from a representable is compact.
CompactMapReport is_compact_map(const NatTransf& f);

/// The presheaf y(P) x_X Y for x in X(P).
Presheaf pullback_over_element(const NatTransf& f, int obj, int elem);

struct PresheafCoherence {
  bool holds = false;
  std::optional<CompactnessWitness> witness;
  /// (obj, elem) of C x C at which the diagonal fails compactness.
  std::optional<std::pair<int, int>> failing;
};

PresheafCoherence is_coherent_presheaf(const Presheaf& c);

/// The object P with X = y(P), found through an explicit isomorphism.
std::optional<int> is_indecomposable_projective(const Presheaf& x);

struct AssemblyLikeWitness {
  CompactnessWitness cover;
  std::vector<int> factors;  // objects P1..Pk
  std::vector<NatTransf> legs;  // X -> y(Pi), jointly injective
};

inline constexpr int kDefaultProductBound = 3;

std::optional<AssemblyLikeWitness> is_assembly_like(const Presheaf& x,
                                                    int max_factors = kDefaultProductBound);

enum class PresentationClass { Representable, AssemblyLike };

struct ExactPresentation {
  CompactnessWitness cover_witness;
  NatTransf cover;
  PullbackResult kernel;
  QuotientResult coequalizer;
  /// Comparison quotient -> C, pointwise bijective.
  NatTransf comparison;
  std::optional<int> kernel_representable;
  std::optional<AssemblyLikeWitness> kernel_assembly_like;
};

std::optional<ExactPresentation> exact_presentation(const Presheaf& c, PresentationClass cls,
                                                    int max_factors = kDefaultProductBound);

class NotCoherent : public Error {
 public:
  using Error::Error;
};

struct PseudoEqRel {
  int p = 0;
  int q = 0;
  int d0 = 0;  // arrows q -> p of the base
  int d1 = 0;
  NatTransf cover;      // y(P) -> C
  PullbackResult kernel;
  NatTransf kernel_cover;  // y(Q) -> K
  int reflexivity = -1;  // arrow p -> q with d0 r = d1 r = id
  int symmetry = -1;     // arrow q -> q with d0 s = d1, d1 s = d0
  /// Transitivity filler on y(Q) x_{y(P)} y(Q) (d1 against d0) into y(Q).
  PullbackResult composable;
  std::optional<NatTransf> transitivity;
};

/// Throws NotCoherent. Absent when no representable cover has a compact
/// kernel, which only happens over bases without pullbacks.
std::optional<PseudoEqRel> pseudo_eq_rel_presentation(const Presheaf& c);

/// Terminal object and all pullbacks of representables are representable.
bool is_lex_base(const CategoryRef& base);

}  // namespace e2t
