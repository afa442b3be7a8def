#include "hiercluster/exact_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace hiercluster {

namespace {

using Mask = uint32_t;

struct ThresholdSolver {
  const FiniteMetricSpace& space;
  CostKind kind;
  int n;
  std::vector<double> thresholds;  // sorted unique candidate values

  ThresholdSolver(const FiniteMetricSpace& s, CostKind kind) : space(s), kind(kind), n(s.size()) {
    thresholds.push_back(0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) thresholds.push_back(space.dist(i, j));
    if (kind == CostKind::radius) {
      for (int c = 0; c < space.candidate_count(); ++c)
        for (int p = 0; p < n; ++p) thresholds.push_back(space.candidate_dist(c, p));
    }
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end(),
                                 [](double a, double b) { return std::abs(a - b) <= kTol; }),
                     thresholds.end());
  }

  // --- diameter: fewest threshold-graph cliques partitioning [n] ---

  std::vector<int> clique_partition_dp(double t, std::vector<Mask>* choice) const {
    std::vector<Mask> adj(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && space.dist(i, j) <= t + kTol) adj[i] |= Mask{1} << j;
    const Mask full = (n == 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    std::vector<char> clique(full + 1, 0);
    clique[0] = 1;
    for (Mask mask = 1; mask <= full; ++mask) {
      const int low = std::countr_zero(mask);
      const Mask rest = mask & (mask - 1);
      clique[mask] = clique[rest] && ((rest & adj[low]) == rest);
    }
    std::vector<int> parts(full + 1, n + 1);
    parts[0] = 0;
    if (choice) choice->assign(full + 1, 0);
    for (Mask mask = 1; mask <= full; ++mask) {
      const Mask low = mask & (~mask + 1);
      for (Mask sub = mask; sub; sub = (sub - 1) & mask) {
        if (!(sub & low) || !clique[sub]) continue;
        const int cand = 1 + parts[mask ^ sub];
        if (cand < parts[mask]) {
          parts[mask] = cand;
          if (choice) (*choice)[mask] = sub;
        }
      }
    }
    return parts;
  }

  // --- radius objectives: fewest balls covering [n] ---

  std::vector<Mask> balls_at(double t) const {
    std::vector<Mask> balls;
    const int centers = n + (kind == CostKind::radius ? space.candidate_count() : 0);
    balls.reserve(centers);
    for (int c = 0; c < centers; ++c) {
      Mask ball = 0;
      for (int p = 0; p < n; ++p) {
        const double d = c < n ? space.dist(c, p) : space.candidate_dist(c - n, p);
        if (d <= t + kTol) ball |= Mask{1} << p;
      }
      balls.push_back(ball);
    }
    return balls;
  }

  std::vector<int> ball_cover_dp(double t, std::vector<int>* choice) const {
    const auto balls = balls_at(t);
    const Mask full = (n == 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    std::vector<int> cover(full + 1, n + 1);
    cover[0] = 0;
    if (choice) choice->assign(full + 1, -1);
    for (Mask mask = 1; mask <= full; ++mask) {
      const int low = std::countr_zero(mask);
      for (int c = 0; c < static_cast<int>(balls.size()); ++c) {
        if (!(balls[c] >> low & 1)) continue;
        const int cand = 1 + cover[mask & ~balls[c]];
        if (cand < cover[mask]) {
          cover[mask] = cand;
          if (choice) (*choice)[mask] = c;
        }
      }
    }
    return cover;
  }

  int min_parts(double t) const {
    const Mask full = (n == 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    if (kind == CostKind::diameter) return clique_partition_dp(t, nullptr)[full];
    return ball_cover_dp(t, nullptr)[full];
  }

  // Smallest candidate threshold with min_parts <= k, by binary search.
  // Feasibility is monotone in t: larger thresholds only add edges / grow
  // balls, so any feasible partition stays feasible.
  int optimal_threshold_index(int k, std::vector<int>* cache) const {
    int lo = 0, hi = static_cast<int>(thresholds.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      int& parts = (*cache)[mid];
      if (parts < 0) parts = min_parts(thresholds[mid]);
      if (parts <= k)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  Clustering witness(double t, int k) const {
    const Mask full = (n == 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
    std::vector<std::vector<int>> blocks;
    if (kind == CostKind::diameter) {
      std::vector<Mask> choice;
      clique_partition_dp(t, &choice);
      Mask mask = full;
      while (mask) {
        const Mask sub = choice[mask];
        std::vector<int> block;
        for (int p = 0; p < n; ++p)
          if (sub >> p & 1) block.push_back(p);
        blocks.push_back(std::move(block));
        mask ^= sub;
      }
    } else {
      std::vector<int> choice;
      ball_cover_dp(t, &choice);
      std::vector<int> centers;
      Mask mask = full;
      const auto balls = balls_at(t);
      while (mask) {
        const int c = choice[mask];
        centers.push_back(c);
        mask &= ~balls[c];
      }
      // Assign every point to its nearest chosen center, so for the discrete
      // radius each chosen center lands in its own block.
      std::vector<int> assign(n, -1);
      for (int p = 0; p < n; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : centers) {
          const double d = c < n ? space.dist(c, p) : space.candidate_dist(c - n, p);
          if (d < best - kTol) {
            best = d;
            assign[p] = c;
          }
        }
      }
      std::vector<std::vector<int>> groups;
      for (int c : centers) {
        std::vector<int> block;
        for (int p = 0; p < n; ++p)
          if (assign[p] == c) block.push_back(p);
        if (!block.empty()) groups.push_back(std::move(block));
      }
      blocks = std::move(groups);
    }
    (void)k;
    return Clustering::from_blocks(std::move(blocks), n);
  }
};

void check_limit(const FiniteMetricSpace& space, int k, int limit) {
  const int n = space.size();
  if (n > limit || n > 20) {
    throw SolverError("instance too large for the exact solver: n=" + std::to_string(n) +
                          " limit=" + std::to_string(limit),
                      n, limit);
  }
  if (k < 1 || k > n) {
    throw SolverError("level out of range: k=" + std::to_string(k), n, limit);
  }
}

}  // namespace

double optimal_cost(const FiniteMetricSpace& space, int k, CostKind kind, int limit) {
  check_limit(space, k, limit);
  ThresholdSolver solver(space, kind);
  std::vector<int> cache(solver.thresholds.size(), -1);
  return solver.thresholds[solver.optimal_threshold_index(k, &cache)];
}

Clustering optimal_clustering(const FiniteMetricSpace& space, int k, CostKind kind, int limit) {
  check_limit(space, k, limit);
  ThresholdSolver solver(space, kind);
  std::vector<int> cache(solver.thresholds.size(), -1);
  const int idx = solver.optimal_threshold_index(k, &cache);
  return solver.witness(solver.thresholds[idx], k);
}

OptimalProfile optimal_profile(const FiniteMetricSpace& space, CostKind kind, int limit) {
  check_limit(space, 1, limit);
  ThresholdSolver solver(space, kind);
  std::vector<int> cache(solver.thresholds.size(), -1);
  OptimalProfile profile;
  profile.kind = kind;
  profile.levels.resize(space.size());
  for (int k = 1; k <= space.size(); ++k) {
    const int idx = solver.optimal_threshold_index(k, &cache);
    auto& level = profile.levels[k - 1];
    level.k = k;
    level.cost = solver.thresholds[idx];
    level.witness = solver.witness(level.cost, k);
  }
  return profile;
}

int min_parts_at_threshold(const FiniteMetricSpace& space, double threshold, CostKind kind,
                           int limit) {
  check_limit(space, 1, limit);
  ThresholdSolver solver(space, kind);
  return solver.min_parts(threshold);
}

}  // namespace hiercluster
