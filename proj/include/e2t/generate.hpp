#pragma once

// Seeded instance generators. Every function is deterministic in the Rng
// state it is handed.

#include <cstdint>
#include <string>
#include <vector>

#include "e2t/error.hpp"
#include "e2t/groupoid.hpp"
#include "e2t/presheaf.hpp"
#include "e2t/random.hpp"

namespace e2t::gen {

class GenerationExhausted : public Error {
 public:
  GenerationExhausted(std::uint64_t seed, int retries)
      : Error("generation exhausted after " + std::to_string(retries) + " retries (seed " +
              std::to_string(seed) + ")") {}
};

inline constexpr int kRetryCap = 1000;

struct PresheafBounds {
  int max_stage = 4;
  int max_generators = 3;
  /// Percent chance of merging an extra pair of elements.
  int merge_percent = 50;
};

/// A quotient of a sum of 0..max_generators representables by a random
/// congruence, rejected until every stage has at most max_stage elements.
Presheaf presheaf(Rng& rng, const CategoryRef& base, PresheafBounds bounds = {});

/// Merges (obj, a) with (obj, b) and closes under restriction; returns the
/// quotient presheaf and projection.
QuotientResult quotient_by_pairs(const Presheaf& x, const std::vector<std::tuple<int, int, int>>& pairs);

/// Sum of representables y(P1) + ... + y(Pk).
Presheaf sum_of_representables(const CategoryRef& base, const std::vector<int>& objs);

/// Every presheaf on `base` with all stages of size <= max_stage, element
/// labels left implicit. Order: stage sizes lexicographically, then action
/// tables arrow by arrow.
void for_each_presheaf(const CategoryRef& base, int max_stage,
                       const std::function<void(const Presheaf&)>& visit);

// ---------------------------------------------------------------- groupoids

/// Connected block: `objects` objects, cyclic vertex group of order `order`.
struct Block {
  int objects = 1;
  int order = 1;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Disjoint union of blocks. Objects x0, x1, ...; the arrow (i, j, h) of a
/// block goes from i to j and carries h in Z/order.
FinGroupoid block_groupoid(const std::vector<Block>& blocks);

/// Every multiset of blocks with at most `max_objects` objects in total and
/// orders in 1..max_order, in a fixed order (one per isomorphism class).
std::vector<std::vector<Block>> block_shapes(int max_objects, int max_order);

struct GroupoidBounds {
  int max_objects = 4;
  int max_order = 3;
  /// Percent chance that a block is thin (trivial vertex group).
  int thin_percent = 40;
};

std::vector<Block> random_blocks(Rng& rng, GroupoidBounds bounds);

/// The stage groupoid as a presheaf over One.
GpdPresheaf single_stage(const FinGroupoid& g);

/// Random stages; restrictions are random functors on the generating arrows
/// of the base, extended to composites and rejected unless functorial.
GpdPresheaf groupoid(Rng& rng, const CategoryRef& base, GroupoidBounds bounds = {});

/// A random functor a -> b found by search with shuffled candidates.
std::optional<GpdFunctor> random_functor(Rng& rng, const GpdPresheaf& a, const GpdPresheaf& b,
                                         SearchLimits limits = {});

/// Every groupoid presheaf over One or Two whose stages are block shapes
/// within the bounds, with every restriction functor (all functors, not up
/// to isomorphism).
void for_each_groupoid_presheaf(const CategoryRef& base, int max_objects, int max_order,
                                const std::function<void(const GpdPresheaf&)>& visit);

}  // namespace e2t::gen
