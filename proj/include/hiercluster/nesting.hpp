#pragma once

#include <vector>

#include "hiercluster/exact_solver.hpp"
#include "hiercluster/hierarchy.hpp"
#include "hiercluster/metric_space.hpp"

namespace hiercluster {

struct NestingError : std::runtime_error {
  enum class Code {
    size_precondition,
    distance_precondition,
    bad_alpha,
    kind_unsupported,
    incomplete_profile,
    bound_violation,
  };
  Code code;
  NestingError(Code code, const std::string& what) : std::runtime_error(what), code(code) {}
};

// Constructive nesting parameters: (2,1) for diameter and radius, (1,1) for
// the discrete radius.
struct NestingParams {
  double gamma = 2.0;
  double delta = 1.0;
  CostKind kind = CostKind::diameter;

  static NestingParams for_kind(CostKind kind) {
    return kind == CostKind::discrete_radius ? NestingParams{1.0, 1.0, kind}
                                             : NestingParams{2.0, 1.0, kind};
  }
};

// Coarsens `fine` to at most |target| blocks, hierarchically compatible with
// `fine`, with cost(result) <= gamma*cost(fine) + delta*cost(target). The
// bound is checked against the true cost of every merged block; for the
// discrete radius a violated fast rule falls back to an exact subset search
// before the violation becomes a hard error.
Clustering augment(const FiniteMetricSpace& space, const Clustering& fine,
                   const Clustering& target, const NestingParams& params);

// Reference clusterings fed to the nesting algorithms: one clustering per
// available level with its cost. Optimal profiles qualify; so does any
// family that is optimal at its own sizes.
struct ReferenceProfile {
  struct Entry {
    int k = 0;
    double cost = 0.0;
    Clustering clustering;
  };
  CostKind kind = CostKind::diameter;
  std::vector<Entry> entries;  // sorted by k ascending

  static ReferenceProfile from_optimal(const OptimalProfile& profile);
  const Entry* smallest_k_with_cost_in(double lo, double hi) const;  // cost in (lo, hi]
  const Entry& top() const;                                          // k = 1 entry
  const Entry& finest() const;                                       // largest k
};

// Per-iteration audit trail; costs are in the internal (possibly rescaled)
// units where every pairwise distance exceeds 2.
struct BuildTrace {
  struct Iteration {
    int i = 0;
    int n_i = -1;  // chosen reference level, -1 when the bucket is empty
    double bucket_lo = 0.0;
    double bucket_hi = 0.0;
    int blocks = 0;
    double realized_cost = 0.0;
    double cost_bound = 0.0;  // alpha^(t-i) + 2*sum_{l<t-i} alpha^l for Algorithm 2
    bool copied = false;
    bool bound_ok = true;
  };
  int t = 0;
  double scale_factor = 1.0;
  std::vector<Iteration> iterations;
  bool any_bound_violation = false;
};

// Bucketed nesting over the reference profile; approximation guarantee
// 4*gamma*delta relative to the profile's costs. Rescales internally when
// the minimum distance is not above 2.
MergeHierarchy lin_hierarchy(const FiniteMetricSpace& space, const ReferenceProfile& profile,
                             const NestingParams& params, BuildTrace* trace = nullptr);

// Parent-based nesting with step size alpha > 1; guarantee
// alpha * (2/(alpha-1) + 1), which at alpha = 1+sqrt(2) equals 3+2*sqrt(2).
// Supports diameter and radius; the discrete radius belongs to
// lin_hierarchy.
MergeHierarchy improved_hierarchy(const FiniteMetricSpace& space, const ReferenceProfile& profile,
                                  CostKind kind, double alpha, BuildTrace* trace = nullptr);

inline double lin_guarantee(const NestingParams& p) { return 4.0 * p.gamma * p.delta; }
inline double improved_guarantee(double alpha) { return alpha * (2.0 / (alpha - 1.0) + 1.0); }

}  // namespace hiercluster
