#include "hiercluster/nesting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

namespace hiercluster {

ReferenceProfile ReferenceProfile::from_optimal(const OptimalProfile& profile) {
  ReferenceProfile ref;
  ref.kind = profile.kind;
  ref.entries.reserve(profile.levels.size());
  for (const auto& level : profile.levels)
    ref.entries.push_back({level.k, level.cost, level.witness});
  return ref;
}

const ReferenceProfile::Entry* ReferenceProfile::smallest_k_with_cost_in(double lo,
                                                                         double hi) const {
  for (const auto& entry : entries) {
    if (entry.cost > lo + kTol && entry.cost <= hi + kTol) return &entry;
  }
  return nullptr;
}

const ReferenceProfile::Entry& ReferenceProfile::top() const {
  for (const auto& entry : entries)
    if (entry.k == 1) return entry;
  throw NestingError(NestingError::Code::incomplete_profile, "profile has no k=1 entry");
}

const ReferenceProfile::Entry& ReferenceProfile::finest() const {
  if (entries.empty()) {
    throw NestingError(NestingError::Code::incomplete_profile, "empty profile");
  }
  return entries.back();
}

namespace {

std::vector<int> block_index_of_points(const Clustering& clustering, int n) {
  std::vector<int> owner(n, -1);
  for (int b = 0; b < clustering.block_count(); ++b)
    for (int p : clustering.blocks[b]) owner[p] = b;
  return owner;
}

Clustering groups_to_clustering(const std::map<int, std::vector<int>>& groups,
                                const Clustering& fine, int n) {
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (const auto& [key, fine_ids] : groups) {
    std::vector<int> merged;
    for (int f : fine_ids)
      merged.insert(merged.end(), fine.blocks[f].begin(), fine.blocks[f].end());
    std::sort(merged.begin(), merged.end());
    blocks.push_back(std::move(merged));
  }
  return Clustering::from_blocks(std::move(blocks), n);
}

// Exact fallback for the discrete radius: search all coarsenings of `fine`
// into at most |target| parts for one whose every part stays within `bound`.
// Complete over the search space of the nesting definition.
Clustering exact_drad_nesting(const FiniteMetricSpace& space, const Clustering& fine,
                              int max_parts, double bound) {
  const int m = fine.block_count();
  if (m > 16) {
    throw NestingError(NestingError::Code::bound_violation,
                       "discrete-radius nesting bound violated and instance too large for the "
                       "exact fallback");
  }
  const uint32_t full = (uint32_t{1} << m) - 1;
  std::vector<double> drad_of(full + 1, 0.0);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<int> pts;
    for (int f = 0; f < m; ++f)
      if (mask >> f & 1)
        pts.insert(pts.end(), fine.blocks[f].begin(), fine.blocks[f].end());
    drad_of[mask] = cluster_cost(space, pts, CostKind::discrete_radius);
  }
  std::vector<int> parts(full + 1, m + 1);
  std::vector<uint32_t> choice(full + 1, 0);
  parts[0] = 0;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    const uint32_t low = mask & (~mask + 1);
    for (uint32_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || drad_of[sub] > bound + kTol) continue;
      if (1 + parts[mask ^ sub] < parts[mask]) {
        parts[mask] = 1 + parts[mask ^ sub];
        choice[mask] = sub;
      }
    }
  }
  if (parts[full] > max_parts) {
    throw NestingError(NestingError::Code::bound_violation,
                       "no coarsening meets the discrete-radius nesting bound " +
                           std::to_string(bound));
  }
  std::map<int, std::vector<int>> groups;
  uint32_t mask = full;
  int g = 0;
  while (mask) {
    const uint32_t sub = choice[mask];
    for (int f = 0; f < m; ++f)
      if (sub >> f & 1) groups[g].push_back(f);
    ++g;
    mask ^= sub;
  }
  return groups_to_clustering(groups, fine, fine.ground_size());
}

}  // namespace

Clustering augment(const FiniteMetricSpace& space, const Clustering& fine,
                   const Clustering& target, const NestingParams& params) {
  const int n = space.size();
  if (fine.block_count() <= target.block_count()) {
    throw NestingError(NestingError::Code::size_precondition,
                       "augment requires |fine| > |target|");
  }
  const double cost_fine = clustering_cost(space, fine, params.kind);
  const double cost_target = clustering_cost(space, target, params.kind);
  const double bound = params.gamma * cost_fine + params.delta * cost_target;
  const std::vector<int> target_of = block_index_of_points(target, n);

  std::map<int, std::vector<int>> groups;
  if (params.kind == CostKind::discrete_radius) {
    // Assign by the fine block's optimal center; a block hosting a target's
    // optimal center is pinned to that target so the certifying center stays
    // inside its merged block.
    std::vector<int> host(fine.block_count(), -1);
    const std::vector<int> fine_of = block_index_of_points(fine, n);
    for (int o = 0; o < target.block_count(); ++o) {
      const int c_o = best_discrete_center(space, target.blocks[o]);
      const int f = fine_of[c_o];
      if (host[f] < 0) host[f] = o;
    }
    for (int f = 0; f < fine.block_count(); ++f) {
      const int o = host[f] >= 0 ? host[f] : target_of[best_discrete_center(space, fine.blocks[f])];
      groups[o].push_back(f);
    }
  } else {
    // Smallest-index target block the fine block intersects.
    for (int f = 0; f < fine.block_count(); ++f) {
      int o = std::numeric_limits<int>::max();
      for (int p : fine.blocks[f]) o = std::min(o, target_of[p]);
      groups[o].push_back(f);
    }
  }

  Clustering result = groups_to_clustering(groups, fine, n);
  double worst = clustering_cost(space, result, params.kind);
  if (worst > bound + kTol) {
    if (params.kind == CostKind::discrete_radius) {
      result = exact_drad_nesting(space, fine, target.block_count(), bound);
      worst = clustering_cost(space, result, params.kind);
    }
    if (worst > bound + kTol) {
      throw NestingError(NestingError::Code::bound_violation,
                         "nesting cost " + std::to_string(worst) + " exceeds bound " +
                             std::to_string(bound));
    }
  }
  return result;
}

namespace {

struct ScaledInputs {
  FiniteMetricSpace space;   // distances > 2
  ReferenceProfile profile;  // costs rescaled to match
  double factor = 1.0;
};

ScaledInputs prepare(const FiniteMetricSpace& space, const ReferenceProfile& profile) {
  ScaledInputs out;
  const double mind = space.min_positive_distance();
  out.factor = mind > 2.0 ? 1.0 : (2.0 + 1e-6) / mind;
  out.space = out.factor == 1.0 ? space : space.scaled(out.factor);
  out.profile = profile;
  for (auto& entry : out.profile.entries) entry.cost *= out.factor;
  return out;
}

void check_profile_shape(const ReferenceProfile& profile, const FiniteMetricSpace& space) {
  if (profile.entries.empty()) {
    throw NestingError(NestingError::Code::incomplete_profile, "empty reference profile");
  }
  for (size_t i = 1; i < profile.entries.size(); ++i) {
    if (profile.entries[i].k <= profile.entries[i - 1].k) {
      throw NestingError(NestingError::Code::incomplete_profile,
                         "profile entries must be sorted by k");
    }
  }
  if (profile.finest().clustering.block_count() != space.size()) {
    throw NestingError(NestingError::Code::incomplete_profile,
                       "profile must end with the all-singleton clustering");
  }
  profile.top();  // throws when k=1 is missing
}

}  // namespace

MergeHierarchy lin_hierarchy(const FiniteMetricSpace& space, const ReferenceProfile& profile,
                             const NestingParams& params, BuildTrace* trace) {
  const int n = space.size();
  if (n <= 1) return MergeHierarchy::trivial(n);
  check_profile_shape(profile, space);
  const ScaledInputs in = prepare(space, profile);
  if (trace) {
    trace->scale_factor = in.factor;
    trace->iterations.clear();
    trace->any_bound_violation = false;
  }

  const double base = 2.0 * params.gamma;
  const double delta_cost = in.profile.top().cost;
  const int t = static_cast<int>(std::ceil(std::log(delta_cost) / std::log(base))) + 1;
  if (trace) trace->t = t;

  HierarchicalSequence seq;
  seq.clusterings.push_back(in.profile.finest().clustering);
  Clustering current = seq.clusterings.back();
  for (int i = t - 1; i >= 1; --i) {
    const double lo = std::pow(base, t - i - 1);
    const double hi = std::pow(base, t - i);
    const ReferenceProfile::Entry* entry = in.profile.smallest_k_with_cost_in(lo, hi);
    BuildTrace::Iteration iter;
    iter.i = i;
    iter.bucket_lo = lo;
    iter.bucket_hi = hi;
    if (entry != nullptr && current.block_count() > entry->clustering.block_count()) {
      current = augment(in.space, current, entry->clustering, params);
      iter.n_i = entry->k;
    } else if (entry != nullptr) {
      // already at or below the target size; nesting is the identity
      iter.n_i = entry->k;
      iter.copied = true;
    } else {
      iter.copied = true;
    }
    seq.clusterings.push_back(current);
    if (trace) {
      iter.blocks = current.block_count();
      iter.realized_cost = clustering_cost(in.space, current, params.kind);
      trace->iterations.push_back(iter);
    }
  }
  if (seq.clusterings.back().block_count() != 1) {
    // The top bucket contains cost(O_1), so the last nesting targets k = 1.
    throw NestingError(NestingError::Code::incomplete_profile,
                       "sequence did not reach a single block");
  }
  return extend_sequence(seq, in.space, params.kind);
}

MergeHierarchy improved_hierarchy(const FiniteMetricSpace& space, const ReferenceProfile& profile,
                                  CostKind kind, double alpha, BuildTrace* trace) {
  if (kind == CostKind::discrete_radius) {
    throw NestingError(NestingError::Code::kind_unsupported,
                       "discrete radius is handled by lin_hierarchy");
  }
  if (!(alpha > 1.0)) {
    throw NestingError(NestingError::Code::bad_alpha, "alpha must exceed 1");
  }
  const int n = space.size();
  if (n <= 1) return MergeHierarchy::trivial(n);
  check_profile_shape(profile, space);
  const ScaledInputs in = prepare(space, profile);
  if (trace) {
    trace->scale_factor = in.factor;
    trace->iterations.clear();
    trace->any_bound_violation = false;
  }

  const double delta_cost = in.profile.top().cost;
  const int t = static_cast<int>(std::ceil(std::log(delta_cost) / std::log(alpha))) + 1;
  if (trace) trace->t = t;

  HierarchicalSequence seq;
  Clustering current = in.profile.finest().clustering;
  seq.clusterings.push_back(current);
  // parent of each current block, as reference-block point sets
  std::vector<std::vector<int>> parent_points(current.block_count());
  for (int b = 0; b < current.block_count(); ++b) parent_points[b] = current.blocks[b];

  for (int i = t - 1; i >= 1; --i) {
    const double lo = std::pow(alpha, t - i - 1);
    const double hi = std::pow(alpha, t - i);
    const ReferenceProfile::Entry* entry = in.profile.smallest_k_with_cost_in(lo, hi);
    BuildTrace::Iteration iter;
    iter.i = i;
    iter.bucket_lo = lo;
    iter.bucket_hi = hi;
    if (entry != nullptr) {
      iter.n_i = entry->k;
      const Clustering& target = entry->clustering;
      const std::vector<int> target_of = block_index_of_points(target, n);
      // Nest_i(C) = smallest-index target block meeting parent_{i+1}(C)
      std::map<int, std::vector<int>> groups;
      for (int b = 0; b < current.block_count(); ++b) {
        int o = std::numeric_limits<int>::max();
        for (int p : parent_points[b]) o = std::min(o, target_of[p]);
        groups[o].push_back(b);
      }
      Clustering next = groups_to_clustering(groups, current, n);
      std::vector<std::vector<int>> next_parents(next.block_count());
      {
        // map each merged block to its target (parent) block
        const std::vector<int> next_of = block_index_of_points(next, n);
        for (const auto& [o, fine_ids] : groups) {
          const int nb = next_of[current.blocks[fine_ids.front()].front()];
          next_parents[nb] = target.blocks[o];
        }
      }
      current = std::move(next);
      parent_points = std::move(next_parents);
    } else {
      iter.copied = true;
    }
    seq.clusterings.push_back(current);

    // Intermediate bound of the parent-nesting analysis:
    //   cost(C^(i)) <= alpha^(t-i) + 2 * sum_{l=1}^{t-i-1} alpha^l
    double bound = std::pow(alpha, t - i);
    for (int l = 1; l <= t - i - 1; ++l) bound += 2.0 * std::pow(alpha, l);
    iter.cost_bound = bound;
    iter.blocks = current.block_count();
    iter.realized_cost = clustering_cost(in.space, current, kind);
    iter.bound_ok = iter.realized_cost <= bound + kTol;
    if (kind == CostKind::radius && iter.bound_ok) {
      // every block must stay within the bound around its parent's center
      for (int b = 0; b < current.block_count() && iter.bound_ok; ++b) {
        const Center c = best_radius_center(in.space, parent_points[b]);
        for (int q : current.blocks[b]) {
          if (in.space.center_dist(c, q) > bound + kTol) {
            iter.bound_ok = false;
            break;
          }
        }
      }
    }
    if (trace) {
      trace->iterations.push_back(iter);
      if (!iter.bound_ok) trace->any_bound_violation = true;
    }
  }
  if (seq.clusterings.back().block_count() != 1) {
    throw NestingError(NestingError::Code::incomplete_profile,
                       "sequence did not reach a single block");
  }
  return extend_sequence(seq, in.space, kind);
}

}  // namespace hiercluster
