#pragma once

#include <cstdint>
#include <vector>

#include "hiercluster/hierarchy.hpp"
#include "hiercluster/metric_space.hpp"

namespace hiercluster {

// Farthest-first traversal. r[0] is +infinity; r[k] is the distance of
// order[k] to the previously chosen points and is nonincreasing for k >= 1.
struct GonzalesOrdering {
  std::vector<int> order;
  std::vector<double> r;
};

GonzalesOrdering gonzales_ordering(const FiniteMetricSpace& space, int start);

// Nearest-center assignment to the first k ordered points. With the
// farthest-first ordering this is a 2-approximation for the discrete radius
// at every k.
Clustering gonzales_assignment(const FiniteMetricSpace& space, const GonzalesOrdering& ordering,
                               int k);

// Hierarchical baseline on the farthest-first ordering: points attach to the
// nearest point of a strictly coarser granularity band (bands halve, the
// standard rounding of the ordering's R values), and level k cuts the parent
// edges of the first k ordered points.
MergeHierarchy farthest_first_hierarchy(const FiniteMetricSpace& space, int start = 0);

// Agglomerative greedy: repeatedly merge the two clusters whose union has
// the smallest cost under `kind`; ties by lexicographic block signature.
MergeHierarchy complete_linkage(const FiniteMetricSpace& space, CostKind kind);

struct MondalResult {
  MergeHierarchy hierarchy;
  GonzalesOrdering ordering;
  // parent[i] = ordering position of N(x_i), for positions i >= 1; -1 at 0.
  std::vector<int> parent;
};

// Parent rule: N(x) is the nearest point y with R_x <= R_y / 2; level k cuts
// the edges {x_i, N(x_i)} for i = 2..k. tie_seed != 0 randomizes tie choices
// (ordering argmax ties and equally-near parents).
MondalResult mondal_hierarchy(const FiniteMetricSpace& space, int start, uint64_t tie_seed = 0);

struct MondalSearchResult {
  double worst_ratio = 0.0;
  uint64_t seed = 0;
  int start = 0;
  int n = 0;
  std::vector<std::vector<double>> matrix;  // instance realizing worst_ratio
};

// Best-effort randomized hunt for instances where the parent-rule hierarchy
// has a large discrete-radius ratio; not an acceptance gate.
MondalSearchResult mondal_counterexample_search(int n, int trials, uint64_t seed);

}  // namespace hiercluster
