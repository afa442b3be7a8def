#pragma once

#include <vector>

#include "hiercluster/exact_solver.hpp"
#include "hiercluster/metric_space.hpp"

namespace hiercluster {

struct HierarchyError : std::runtime_error {
  enum class Code {
    ground_set_mismatch,
    invalid_sequence,
    invalid_merges,
    kind_mismatch,
    size_mismatch,
    instance_too_large,
  };
  Code code;
  HierarchyError(Code code, const std::string& what) : std::runtime_error(what), code(code) {}
};

// One clustering per level n..1, stored compactly as merge events. Singleton
// clusters carry ids 0..n-1 and merge event j creates id n+j from the set of
// ids it names (two or more). The level-i view is the earliest state whose
// block count is at most i.
class MergeHierarchy {
 public:
  MergeHierarchy() = default;
  MergeHierarchy(int n, std::vector<std::vector<int>> merges);

  static MergeHierarchy trivial(int n);  // n <= 1

  int size() const { return n_; }
  const std::vector<std::vector<int>>& merges() const { return merges_; }

  // Clustering at level i (at most i blocks).
  Clustering level(int i) const;
  // The distinct states from singletons to the single block, in merge order.
  std::vector<Clustering> states() const;
  // Block count of each state, decreasing.
  std::vector<int> state_sizes() const;

  void validate() const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> merges_;
};

// A compatibility chain from the all-singleton clustering to one block that
// need not contain every size; consecutive entries are equal or merge.
struct HierarchicalSequence {
  std::vector<Clustering> clusterings;  // fine to coarse
  void validate(int n) const;
};

bool check_compatibility(const Clustering& fine, const Clustering& coarse);

// Assigns every level i the minimum-cost member of the sequence with at most
// i blocks (ties toward fewer blocks, then latest) and materializes the
// induced merge events.
MergeHierarchy extend_sequence(const HierarchicalSequence& seq, const FiniteMetricSpace& space,
                               CostKind kind);

struct ApproximationProfile {
  struct Row {
    int k = 0;
    double alg_cost = 0.0;
    double opt_cost = 0.0;
    double ratio = 1.0;
  };
  CostKind kind = CostKind::diameter;
  std::vector<Row> rows;  // k = 1..n
  double max_ratio = 1.0;
  int argmax_k = 0;
};

ApproximationProfile approximation_profile(const MergeHierarchy& hier,
                                           const OptimalProfile& profile,
                                           const FiniteMetricSpace& space, CostKind kind);

// Max per-level ratio without a precomputed profile (opt solved on demand).
ApproximationProfile approximation_profile(const MergeHierarchy& hier,
                                           const FiniteMetricSpace& space, CostKind kind,
                                           int solver_limit = kDefaultExactLimit);

struct PriceOfHierarchy {
  double value = 1.0;
  MergeHierarchy witness;
};

// Minimum over all binary merge sequences of the max per-level ratio.
// Binary sequences suffice: refining a multi-merge level by level never
// increases any level's cost.
PriceOfHierarchy exhaustive_price_of_hierarchy(const FiniteMetricSpace& space, CostKind kind,
                                               int limit = 8);

// Independent oracle for n <= 6: exact minimum over all hierarchical
// clusterings including multi-merges, via dynamic programming over the
// partition lattice.
double price_of_hierarchy_multimerge(const FiniteMetricSpace& space, CostKind kind,
                                     int limit = 6);

}  // namespace hiercluster
