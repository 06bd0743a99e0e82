#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "e2t/error.hpp"
#include "e2t/presheaf.hpp"

namespace e2t {

/// Finite groupoid with explicit composition and inverse tables. Arrow
/// indices 0..num_objects()-1 are the identities.
class FinGroupoid {
 public:
  struct Arrow {
    std::string name;
    int dom = 0;
    int cod = 0;
  };

  /// `arrows` must start with one identity per object, in object order.
  /// `compose(g, f)` is queried for every composable pair.
  static FinGroupoid make(std::vector<std::string> objects, std::vector<Arrow> arrows,
                          const std::function<int(int g, int f)>& compose, std::vector<int> inverse);
  /// Validating variant of make.
  static FinGroupoid checked(std::vector<std::string> objects, std::vector<Arrow> arrows,
                             const std::function<int(int g, int f)>& compose, std::vector<int> inverse,
                             const std::string& block = "groupoid");
  /// Objects and identities only.
  static FinGroupoid discrete(std::vector<std::string> objects);

  FinGroupoid() : FinGroupoid(discrete({})) {}

  int num_objects() const { return static_cast<int>(d_->objects.size()); }
  int num_arrows() const { return static_cast<int>(d_->arrows.size()); }
  const std::string& object_name(int x) const { return d_->objects[static_cast<std::size_t>(x)]; }
  const std::vector<std::string>& object_names() const { return d_->objects; }
  const Arrow& arrow(int a) const { return d_->arrows[static_cast<std::size_t>(a)]; }
  int dom(int a) const { return arrow(a).dom; }
  int cod(int a) const { return arrow(a).cod; }
  int identity(int x) const { return x; }
  bool is_identity(int a) const { return a < num_objects(); }
  int inverse(int a) const { return d_->inv[static_cast<std::size_t>(a)]; }
  /// g . f; requires cod f == dom g.
  int compose(int g, int f) const {
    return d_->comp[static_cast<std::size_t>(f)][static_cast<std::size_t>(d_->pos_in_out[static_cast<std::size_t>(g)])];
  }
  std::span<const int> hom(int x, int y) const;
  std::span<const int> out(int x) const { return d_->out[static_cast<std::size_t>(x)]; }
  std::optional<int> object_index(const std::string& name) const;
  std::optional<int> arrow_index(const std::string& name) const;
  bool is_discrete() const { return num_arrows() == num_objects(); }
  /// Connected component of each object, numbered by least member.
  std::vector<int> components() const;

  /// Throws InvariantViolation on a broken law.
  void validate(const std::string& block = "groupoid") const;

  friend bool operator==(const FinGroupoid& a, const FinGroupoid& b);

 private:
  struct Data {
    std::vector<std::string> objects;
    std::vector<Arrow> arrows;
    std::vector<int> inv;
    std::vector<std::vector<int>> out;
    std::vector<int> pos_in_out;
    std::vector<std::vector<int>> comp;  // comp[f][pos_in_out[g]] = g . f, or -1
    std::vector<std::vector<int>> hom_begin;
  };
  explicit FinGroupoid(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// Object and arrow assignments of a functor between two stage groupoids.
struct StageFunctor {
  std::vector<int> obj;
  std::vector<int> arr;
  friend bool operator==(const StageFunctor&, const StageFunctor&) = default;
};

/// Throws InvariantViolation unless `f` is a functor a -> b.
void check_stage_functor(const FinGroupoid& a, const FinGroupoid& b, const StageFunctor& f,
                         const std::string& block, const std::string& what);

/// Presheaf of finite groupoids. `act(h)` for h: Q -> P is a functor from
/// stage P to stage Q.
class GpdPresheaf {
 public:
  GpdPresheaf(CategoryRef base, std::vector<FinGroupoid> stages, std::vector<StageFunctor> act,
              const std::string& block = "groupoid");
  static GpdPresheaf unchecked(CategoryRef base, std::vector<FinGroupoid> stages,
                               std::vector<StageFunctor> act);

  const CategoryRef& base() const { return d_->base; }
  const FinCategory& cat() const { return *d_->base; }
  const FinGroupoid& stage(int p) const { return d_->stages[static_cast<std::size_t>(p)]; }
  const std::vector<FinGroupoid>& stages() const { return d_->stages; }
  const StageFunctor& act(int h) const { return d_->act[static_cast<std::size_t>(h)]; }
  const std::vector<StageFunctor>& acts() const { return d_->act; }
  int act_obj(int h, int x) const { return act(h).obj[static_cast<std::size_t>(x)]; }
  int act_arr(int h, int a) const { return act(h).arr[static_cast<std::size_t>(a)]; }

  /// G0 and G1 as presheaves, labelled with object and arrow names.
  const Presheaf& objects() const { return d_->g0; }
  const Presheaf& arrows() const { return d_->g1; }
  const NatTransf& dom_map() const { return d_->dom; }
  const NatTransf& cod_map() const { return d_->cod; }
  const NatTransf& id_map() const { return d_->ident; }

  bool is_discrete() const;
  void validate(const std::string& block = "groupoid") const;

  friend bool operator==(const GpdPresheaf& a, const GpdPresheaf& b);

 private:
  struct Data {
    CategoryRef base;
    std::vector<FinGroupoid> stages;
    std::vector<StageFunctor> act;
    Presheaf g0;
    Presheaf g1;
    NatTransf dom;
    NatTransf cod;
    NatTransf ident;
  };
  explicit GpdPresheaf(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  static std::shared_ptr<const Data> assemble(CategoryRef base, std::vector<FinGroupoid> stages,
                                              std::vector<StageFunctor> act);
  std::shared_ptr<const Data> d_;
};

/// Homomorphism of groupoid presheaves.
class GpdFunctor {
 public:
  GpdFunctor(GpdPresheaf source, GpdPresheaf target, std::vector<StageFunctor> stages,
             const std::string& block = "gfunctor");
  static GpdFunctor unchecked(GpdPresheaf source, GpdPresheaf target, std::vector<StageFunctor> stages);

  const GpdPresheaf& source() const { return source_; }
  const GpdPresheaf& target() const { return target_; }
  const StageFunctor& stage(int p) const { return stages_[static_cast<std::size_t>(p)]; }
  const std::vector<StageFunctor>& stages() const { return stages_; }
  int obj(int p, int x) const { return stage(p).obj[static_cast<std::size_t>(x)]; }
  int arr(int p, int a) const { return stage(p).arr[static_cast<std::size_t>(a)]; }
  NatTransf on_objects() const;
  NatTransf on_arrows() const;

  void validate(const std::string& block = "gfunctor") const;

  friend bool operator==(const GpdFunctor& a, const GpdFunctor& b);

 private:
  GpdFunctor(GpdPresheaf source, GpdPresheaf target, std::vector<StageFunctor> stages, int)
      : source_(std::move(source)), target_(std::move(target)), stages_(std::move(stages)) {}
  GpdPresheaf source_;
  GpdPresheaf target_;
  std::vector<StageFunctor> stages_;
};

/// Invertible 2-cell f => g: for each object x of a source stage, an arrow
/// f(x) -> g(x) of the target stage.
class TwoCell {
 public:
  TwoCell(GpdFunctor source, GpdFunctor target, std::vector<std::vector<int>> comp,
          const std::string& block = "twocell");
  static TwoCell unchecked(GpdFunctor source, GpdFunctor target, std::vector<std::vector<int>> comp);

  const GpdFunctor& source() const { return source_; }
  const GpdFunctor& target() const { return target_; }
  int operator()(int p, int x) const {
    return comp_[static_cast<std::size_t>(p)][static_cast<std::size_t>(x)];
  }
  const std::vector<std::vector<int>>& components() const { return comp_; }

  void validate(const std::string& block = "twocell") const;

  friend bool operator==(const TwoCell& a, const TwoCell& b);

 private:
  TwoCell(GpdFunctor source, GpdFunctor target, std::vector<std::vector<int>> comp, int)
      : source_(std::move(source)), target_(std::move(target)), comp_(std::move(comp)) {}
  GpdFunctor source_;
  GpdFunctor target_;
  std::vector<std::vector<int>> comp_;
};

class SearchExhausted : public Error {
 public:
  explicit SearchExhausted(std::uint64_t bound)
      : Error("search exhausted at node bound " + std::to_string(bound)), bound_(bound) {}
  std::uint64_t bound() const { return bound_; }

 private:
  std::uint64_t bound_;
};

class TargetNotDiscrete : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------- basic constructions

GpdPresheaf discrete(const Presheaf& x);
GpdPresheaf terminal_gpd(const CategoryRef& base);
GpdPresheaf empty_gpd(const CategoryRef& base);
/// The functor X̲ -> Y̲ induced by a presheaf map.
GpdFunctor discrete_map(const NatTransf& f);
/// The functor X̲ -> 𝔾 induced by a map X -> G0.
GpdFunctor from_discrete(const GpdPresheaf& g, const NatTransf& m);
GpdFunctor identity(const GpdPresheaf& g);
GpdFunctor compose(const GpdFunctor& g, const GpdFunctor& f);
GpdFunctor to_terminal(const GpdPresheaf& g);

TwoCell identity_cell(const GpdFunctor& f);
/// beta . alpha for alpha: f => g, beta: g => h.
TwoCell vertical(const TwoCell& beta, const TwoCell& alpha);
TwoCell inverse(const TwoCell& alpha);
/// h alpha: h f => h g.
TwoCell whisker_left(const GpdFunctor& h, const TwoCell& alpha);
/// alpha k: f k => g k.
TwoCell whisker_right(const TwoCell& alpha, const GpdFunctor& k);

struct GpdPullback {
  GpdPresheaf apex;
  GpdFunctor left;
  GpdFunctor right;
};

/// Stagewise strict pullback; objects ordered by (a, b), identities first
/// then arrows by (u, v).
GpdPullback strict_pullback(const GpdFunctor& f, const GpdFunctor& g);
GpdPullback product(const GpdPresheaf& a, const GpdPresheaf& b);
/// <f, g> into a product built by `product`.
GpdFunctor pairing(const GpdPullback& prod, const GpdFunctor& f, const GpdFunctor& g);
/// Universal map into a strict pullback from a strictly commuting cone.
GpdFunctor into_pullback(const GpdPullback& pb, const GpdFunctor& f, const GpdFunctor& g);
GpdFunctor diagonal(const GpdPullback& prod);

struct PseudoPullback {
  GpdPresheaf apex;
  GpdFunctor left;
  GpdFunctor right;
  /// f . left => g . right.
  TwoCell cell;
};

/// Iso-comma object: stage objects (a, phi: f a -> g b, b).
PseudoPullback pseudo_pullback(const GpdFunctor& f, const GpdFunctor& g);

struct PathGroupoid {
  GpdPresheaf path;
  GpdPullback square;   // G x G
  GpdFunctor endpoints;  // <dom, cod>: PG -> G x G
  GpdFunctor dom;
  GpdFunctor cod;
  GpdFunctor unit;  // G -> PG, x |-> id_x
};

/// Stage objects are the arrows of G, stage arrows the commuting squares.
PathGroupoid path_groupoid(const GpdPresheaf& g);

// ---------------------------------------------------------------- functor search

struct FunctorSearchOptions {
  std::function<bool(int p, int x, int y)> allowed_obj;
  std::function<bool(int p, int u, int v)> allowed_arr;
  /// Candidate orders; ascending otherwise.
  std::function<void(int p, int x, std::vector<int>&)> reorder_obj;
  std::function<void(int p, int u, std::vector<int>&)> reorder_arr;
  SearchLimits limits;
};

/// Enumerates functors A -> B: object maps first (as natural maps A0 -> B0),
/// then arrow maps, with values forced through inverses, composites and
/// restrictions. `visit` returns false to stop.
SearchStatus search_functors(const GpdPresheaf& a, const GpdPresheaf& b, const FunctorSearchOptions& opts,
                             const std::function<bool(const GpdFunctor&)>& visit);

// ---------------------------------------------------------------- predicates

struct WeakEquivalenceReport {
  bool holds = true;
  std::optional<int> failing_stage;
  std::string reason;
};

WeakEquivalenceReport is_weak_equivalence(const GpdFunctor& f);

/// F1 -> G1 over F0 -> G0 (via dom) is a pointwise pullback.
bool is_discrete_fibration(const GpdFunctor& f);

// ---------------------------------------------------------------- strong equivalences

struct QuasiInverse {
  GpdFunctor inverse;
  TwoCell unit;    // id => inverse . f
  TwoCell counit;  // f . inverse => id
};

/// Replays the functor and 2-cell checks.
bool check_quasi_inverse(const GpdFunctor& f, const QuasiInverse& q);

/// A quasi-inverse of a weak equivalence is the same thing as a natural choice
/// of (x, f x ~ y) for every y; the search runs over those choices, least
/// first. Absent means none exists. Throws SearchExhausted at the node cap.
std::optional<QuasiInverse> find_quasi_inverse(const GpdFunctor& f, SearchLimits limits = {});

// ---------------------------------------------------------------- cleavages

struct CleavageWitness {
  GpdFunctor p;
  /// Lifting problems (x, phi) with phi: p x -> y, as X0 x_{G0} G1.
  PullbackResult problems;
  /// Chosen lift of each problem, an arrow of X.
  NatTransf choice;
  /// Lifts of identities are identities.
  bool normal = false;

  int lift(int stage, int x, int phi) const { return choice(stage, problems.lookup(stage, x, phi)); }
  bool check() const;
};

enum class CleavageStatus { Cloven, NotIsofibration, Inconclusive };

struct IsofibrationResult {
  CleavageStatus status = CleavageStatus::Inconclusive;
  std::optional<CleavageWitness> witness;
  /// (stage, x, phi) with no lift at all.
  std::optional<std::tuple<int, int, int>> failure;
};

/// Searches a natural cleavage, preferring a normal one.
IsofibrationResult is_isofibration(const GpdFunctor& p, SearchLimits limits = {});

/// Builds the cleavage as given (used for explicit constructions); checked.
CleavageWitness make_cleavage(const GpdFunctor& p,
                              const std::function<int(int stage, int x, int phi)>& lift);

struct TransportResult {
  GpdPullback along_f;  // f*X with legs to F and X
  GpdPullback along_g;
  GpdFunctor forward;   // f*X -> g*X over F
  QuasiInverse inverse;
};

/// Transport along alpha: f => g for a cloven p: X -> G.
TransportResult transport_along_2cell(const CleavageWitness& p, const GpdFunctor& f, const GpdFunctor& g,
                                      const TwoCell& alpha);

// ---------------------------------------------------------------- components

struct Pi0Result {
  Presheaf components;
  GpdFunctor quotient;  // G -> discrete(components)
};

Pi0Result pi0(const GpdPresheaf& g);

struct DiscreteTargetReport {
  bool weak = false;
  bool strong = false;
  /// pi0(G) -> X, present when weak.
  std::optional<NatTransf> pi0_iso;
  /// Section of G0 -> X, present when strong.
  std::optional<NatTransf> section;
};

/// Throws TargetNotDiscrete.
DiscreteTargetReport discrete_target_check(const GpdFunctor& f, SearchLimits limits = {});

}  // namespace e2t
