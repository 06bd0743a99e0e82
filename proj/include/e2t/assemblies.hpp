#pragma once

#include <optional>
#include <string>
#include <vector>

#include "e2t/category.hpp"
#include "e2t/error.hpp"
#include "e2t/pca.hpp"

namespace e2t {

struct PartitionedAssembly {
  std::string name;
  std::vector<std::string> carrier;
  std::vector<pca::Term> realizer;  // one normal term per element

  void validate() const;
};

struct Assembly {
  std::string name;
  std::vector<std::string> carrier;
  pca::RealizerSets realizers;  // nonempty, normal, duplicate-free

  static Assembly from(const PartitionedAssembly& p);
  int size() const { return static_cast<int>(carrier.size()); }
  void validate() const;
};

struct TrackedMap {
  Assembly source;
  Assembly target;
  std::vector<int> fn;
  pca::Term tracker;
};

struct HomBudget {
  std::size_t max_term_size = 7;
  std::size_t step_budget = pca::kDefaultStepBudget;
};

/// Enumeration-least term of size <= max_size tracking `fn`. Timeouts count
/// as failure for that candidate.
std::optional<pca::Term> find_tracker(const std::vector<int>& fn, const Assembly& a, const Assembly& b,
                                      std::size_t max_size, std::size_t budget);

struct RegularImage {
  Assembly image;
  TrackedMap epi;
  TrackedMap mono;
};

RegularImage regular_image(const TrackedMap& m);

class SiteTooLarge : public Error {
 public:
  using Error::Error;
};

struct Site {
  CategoryRef category;
  /// Tracker per arrow index; identities are tracked by S K K.
  std::vector<pca::Term> trackers;
  /// Carrier function per arrow index.
  std::vector<std::vector<int>> functions;
  std::vector<PartitionedAssembly> generators;
};

inline constexpr std::size_t kDefaultArrowCap = 2000;

Site build_site(const std::vector<PartitionedAssembly>& gens, HomBudget budget,
                std::size_t arrow_cap = kDefaultArrowCap);

/// Normalizes each realizer; throws InvariantViolation when one has no normal
/// form within the budget.
PartitionedAssembly normalize_realizers(PartitionedAssembly p, std::size_t budget);
Assembly normalize_realizers(Assembly a, std::size_t budget);

}  // namespace e2t
