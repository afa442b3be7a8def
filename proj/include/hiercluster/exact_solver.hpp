#pragma once

#include <vector>

#include "hiercluster/metric_space.hpp"

namespace hiercluster {

struct SolverError : std::runtime_error {
  int n = 0, limit = 0;
  SolverError(const std::string& what, int n, int limit)
      : std::runtime_error(what), n(n), limit(limit) {}
};

inline constexpr int kDefaultExactLimit = 16;

// Exact optimal costs and one witness per level, for a fixed objective.
// Costs are nonincreasing in k; the cost at k = n is 0.
struct OptimalProfile {
  struct Level {
    int k = 0;
    double cost = 0.0;
    Clustering witness;
  };
  CostKind kind = CostKind::diameter;
  std::vector<Level> levels;  // levels[i] holds k = i + 1

  const Level& at(int k) const { return levels.at(static_cast<size_t>(k) - 1); }
};

// Exact minimum over all partitions into at most k blocks. The optimum is a
// member of the finite candidate-threshold set (pairwise distances for the
// diameter, center-to-point distances otherwise); feasibility at a threshold
// is decided by subset dynamic programming over the 2^n mask lattice.
double optimal_cost(const FiniteMetricSpace& space, int k, CostKind kind,
                    int limit = kDefaultExactLimit);

Clustering optimal_clustering(const FiniteMetricSpace& space, int k, CostKind kind,
                              int limit = kDefaultExactLimit);

OptimalProfile optimal_profile(const FiniteMetricSpace& space, CostKind kind,
                               int limit = kDefaultExactLimit);

// Fewest parts at a fixed threshold (exposed for feasibility-monotonicity
// checks): partitions into threshold-graph cliques for the diameter, ball
// covers for the radius objectives.
int min_parts_at_threshold(const FiniteMetricSpace& space, double threshold, CostKind kind,
                           int limit = kDefaultExactLimit);

}  // namespace hiercluster
