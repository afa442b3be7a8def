#include "hiercluster/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hiercluster/exact_solver.hpp"

namespace hiercluster {

GonzalesOrdering gonzales_ordering(const FiniteMetricSpace& space, int start) {
  const int n = space.size();
  if (start < 0 || start >= n) {
    throw ClusterError(ClusterError::Code::index_out_of_range, "bad start index");
  }
  GonzalesOrdering out;
  out.order.reserve(n);
  out.r.reserve(n);
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  int cur = start;
  out.order.push_back(cur);
  out.r.push_back(std::numeric_limits<double>::infinity());
  chosen[cur] = 1;
  for (int k = 1; k < n; ++k) {
    int next = -1;
    double best = -1.0;
    for (int p = 0; p < n; ++p) {
      if (chosen[p]) continue;
      mind[p] = std::min(mind[p], space.dist(cur, p));
      if (mind[p] > best + kTol) {
        best = mind[p];
        next = p;
      }
    }
    out.order.push_back(next);
    out.r.push_back(best);
    chosen[next] = 1;
    cur = next;
  }
  return out;
}

Clustering gonzales_assignment(const FiniteMetricSpace& space, const GonzalesOrdering& ordering,
                               int k) {
  const int n = space.size();
  std::vector<int> assign(n, -1);
  for (int p = 0; p < n; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = space.dist(ordering.order[c], p);
      if (d < best - kTol) {
        best = d;
        assign[p] = ordering.order[c];
      }
    }
  }
  return Clustering::from_assignment(assign);
}

namespace {

// Binary merge list from a parent forest: level k cuts the parent edges of
// the first k ordered points, so walking i = n..2 re-adds the edge of x_i.
MergeHierarchy hierarchy_from_parent_edges(int n, const std::vector<int>& order,
                                           const std::vector<int>& parent_pos) {
  std::vector<int> live_id(n);
  std::iota(live_id.begin(), live_id.end(), 0);
  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<std::vector<int>> merges;
  int next_id = n;
  for (int i = n - 1; i >= 1; --i) {
    const int a = find(order[i]);
    const int b = find(order[parent_pos[i]]);
    std::vector<int> ev = {std::min(live_id[a], live_id[b]), std::max(live_id[a], live_id[b])};
    uf[a] = b;
    live_id[b] = next_id;
    merges.push_back(std::move(ev));
    ++next_id;
  }
  return MergeHierarchy(n, std::move(merges));
}

}  // namespace

MergeHierarchy farthest_first_hierarchy(const FiniteMetricSpace& space, int start) {
  const int n = space.size();
  if (n <= 1) return MergeHierarchy::trivial(n);
  const GonzalesOrdering g = gonzales_ordering(space, start);
  const double r_star = g.r[1];

  // Granularity band of each ordered point; bands halve (rounding base 2).
  std::vector<int> band(n, 0);
  for (int i = 1; i < n; ++i) {
    int j = 1;
    while (g.r[i] <= r_star / std::pow(2.0, j) + kTol) ++j;
    band[i] = j;
  }
  std::vector<int> parent_pos(n, -1);
  for (int i = 1; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n; ++m) {
      if (band[m] >= band[i]) continue;
      const double d = space.dist(g.order[m], g.order[i]);
      if (d < best - kTol) {
        best = d;
        parent_pos[i] = m;
      }
    }
  }
  return hierarchy_from_parent_edges(n, g.order, parent_pos);
}

MergeHierarchy complete_linkage(const FiniteMetricSpace& space, CostKind kind) {
  const int n = space.size();
  if (n <= 1) return MergeHierarchy::trivial(n);
  if (kind == CostKind::diameter) {
    // Max-linkage update: merged(A,B) diameter = max(diam A, diam B, D(A,B))
    // with D(A u B, C) = max(D(A,C), D(B,C)); row minima cached.
    std::vector<std::vector<double>> link(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) link[i][j] = space.dist(i, j);
    std::vector<double> diam(n, 0.0);
    std::vector<char> alive(n, 1);
    std::vector<int> live_id(n), key(n);
    std::iota(live_id.begin(), live_id.end(), 0);
    std::iota(key.begin(), key.end(), 0);  // smallest member, for tie order
    auto merged_cost = [&](int a, int b) {
      return std::max({diam[a], diam[b], link[a][b]});
    };
    std::vector<int> row_arg(n, -1);
    std::vector<double> row_min(n, std::numeric_limits<double>::infinity());
    auto rescan = [&](int a) {
      row_min[a] = std::numeric_limits<double>::infinity();
      row_arg[a] = -1;
      for (int b = 0; b < n; ++b) {
        if (!alive[b] || b == a) continue;
        const double c = merged_cost(a, b);
        if (c < row_min[a] - kTol) {
          row_min[a] = c;
          row_arg[a] = b;
        } else if (c <= row_min[a] + kTol && row_arg[a] >= 0) {
          // tie: smaller key pair wins
          const auto cand = std::minmax(key[a], key[b]);
          const auto have = std::minmax(key[a], key[row_arg[a]]);
          if (cand < have) row_arg[a] = b;
        }
      }
    };
    for (int a = 0; a < n; ++a) rescan(a);
    std::vector<std::vector<int>> merges;
    int next_id = n;
    for (int step = 0; step < n - 1; ++step) {
      int best_a = -1;
      double best_val = std::numeric_limits<double>::infinity();
      for (int a = 0; a < n; ++a) {
        if (!alive[a] || row_arg[a] < 0) continue;
        const double c = row_min[a];
        if (c < best_val - kTol) {
          best_val = c;
          best_a = a;
        } else if (c <= best_val + kTol && best_a >= 0) {
          const auto cand = std::minmax(key[a], key[row_arg[a]]);
          const auto have = std::minmax(key[best_a], key[row_arg[best_a]]);
          if (cand < have) best_a = a;
        }
      }
      int a = best_a, b = row_arg[best_a];
      if (key[b] < key[a]) std::swap(a, b);  // keep the smaller key slot
      merges.push_back({std::min(live_id[a], live_id[b]), std::max(live_id[a], live_id[b])});
      diam[a] = merged_cost(a, b);
      alive[b] = 0;
      live_id[a] = next_id++;
      for (int c = 0; c < n; ++c) {
        if (!alive[c] || c == a) continue;
        link[a][c] = link[c][a] = std::max(link[a][c], link[b][c]);
      }
      rescan(a);
      for (int c = 0; c < n; ++c) {
        if (!alive[c] || c == a) continue;
        if (row_arg[c] == a || row_arg[c] == b) rescan(c);
      }
    }
    return MergeHierarchy(n, std::move(merges));
  }

  // Generic objective path: recompute merged costs directly. Quadratic in
  // cluster count per step; intended for desk-scale instances.
  std::vector<std::vector<int>> members;
  std::vector<int> live_id;
  for (int i = 0; i < n; ++i) {
    members.push_back({i});
    live_id.push_back(i);
  }
  std::vector<std::vector<int>> merges;
  int next_id = n;
  while (members.size() > 1) {
    const int m = static_cast<int>(members.size());
    int best_a = -1, best_b = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        std::vector<int> u;
        u.reserve(members[a].size() + members[b].size());
        u.insert(u.end(), members[a].begin(), members[a].end());
        u.insert(u.end(), members[b].begin(), members[b].end());
        const double c = cluster_cost(space, u, kind);
        if (c < best_val - kTol) {
          best_val = c;
          best_a = a;
          best_b = b;
        }
        // blocks are kept canonical, so (a, b) in index order is already the
        // lexicographically smallest signature among ties
      }
    }
    auto& A = members[best_a];
    auto& B = members[best_b];
    merges.push_back(
        {std::min(live_id[best_a], live_id[best_b]), std::max(live_id[best_a], live_id[best_b])});
    A.insert(A.end(), B.begin(), B.end());
    std::sort(A.begin(), A.end());
    live_id[best_a] = next_id++;
    members.erase(members.begin() + best_b);
    live_id.erase(live_id.begin() + best_b);
    // restore canonical order by smallest member
    for (int a = static_cast<int>(members.size()) - 1; a > 0; --a) {
      if (members[a - 1].front() > members[a].front()) {
        std::swap(members[a - 1], members[a]);
        std::swap(live_id[a - 1], live_id[a]);
      } else {
        break;
      }
    }
    (void)best_val;
  }
  return MergeHierarchy(n, std::move(merges));
}

MondalResult mondal_hierarchy(const FiniteMetricSpace& space, int start, uint64_t tie_seed) {
  const int n = space.size();
  MondalResult result;
  if (n < 1) throw ClusterError(ClusterError::Code::index_out_of_range, "empty space");

  // Seeded tie priorities; zero seed means deterministic smallest-index.
  std::vector<uint64_t> prio(n, 0);
  if (tie_seed != 0) {
    std::mt19937_64 rng(tie_seed);
    for (auto& x : prio) x = rng();
  }

  // Farthest-first ordering with the tie rule applied to the argmax.
  GonzalesOrdering g;
  {
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    std::vector<char> chosen(n, 0);
    int cur = start;
    g.order.push_back(cur);
    g.r.push_back(std::numeric_limits<double>::infinity());
    chosen[cur] = 1;
    for (int k = 1; k < n; ++k) {
      int next = -1;
      double best = -1.0;
      for (int p = 0; p < n; ++p) {
        if (chosen[p]) continue;
        mind[p] = std::min(mind[p], space.dist(cur, p));
        const bool better = mind[p] > best + kTol;
        const bool tie = !better && mind[p] >= best - kTol && next >= 0;
        if (better || (tie && (tie_seed != 0 ? prio[p] < prio[next] : p < next))) {
          best = std::max(best, mind[p]);
          next = p;
        }
      }
      g.order.push_back(next);
      g.r.push_back(best);
      chosen[next] = 1;
      cur = next;
    }
  }

  // Parent of position i: nearest point y with R_i <= R_y / 2. Position 0
  // always qualifies since its R is infinite.
  std::vector<int> parent_pos(n, -1);
  for (int i = 1; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      if (!(g.r[i] <= g.r[m] / 2.0 + kTol)) continue;
      const double d = space.dist(g.order[m], g.order[i]);
      const bool better = d < best - kTol;
      const bool tie = !better && d <= best + kTol && parent_pos[i] >= 0;
      if (better ||
          (tie && (tie_seed != 0 ? prio[g.order[m]] < prio[g.order[parent_pos[i]]]
                                 : m < parent_pos[i]))) {
        best = std::min(best, d);
        parent_pos[i] = m;
      }
    }
  }

  result.hierarchy =
      n <= 1 ? MergeHierarchy::trivial(n) : hierarchy_from_parent_edges(n, g.order, parent_pos);
  result.ordering = std::move(g);
  result.parent = std::move(parent_pos);
  return result;
}

MondalSearchResult mondal_counterexample_search(int n, int trials, uint64_t seed) {
  std::mt19937_64 rng(seed);
  MondalSearchResult best;
  best.n = n;
  for (int t = 0; t < trials; ++t) {
    // Random connected weighted graph, metric = shortest-path closure.
    std::uniform_real_distribution<double> weight(1.0, 10.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 1e18));
    for (int i = 0; i < n; ++i) d[i][i] = 0.0;
    for (int i = 1; i < n; ++i) {
      // spanning chain keeps it connected
      const double w = std::floor(weight(rng) * 2.0) / 2.0;
      d[i - 1][i] = d[i][i - 1] = std::min(d[i - 1][i], std::max(0.5, w));
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng) < 0.3) {
          const double w = std::floor(weight(rng) * 2.0) / 2.0;
          d[i][j] = d[j][i] = std::min(d[i][j], std::max(0.5, w));
        }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

    FiniteMetricSpace space = FiniteMetricSpace::validated({}, d);
    const OptimalProfile profile = optimal_profile(space, CostKind::discrete_radius);
    const uint64_t tie = rng();
    const int start = static_cast<int>(rng() % n);
    const MondalResult run = mondal_hierarchy(space, start, tie);
    const ApproximationProfile ap =
        approximation_profile(run.hierarchy, profile, space, CostKind::discrete_radius);
    if (ap.max_ratio > best.worst_ratio) {
      best.worst_ratio = ap.max_ratio;
      best.seed = tie;
      best.start = start;
      best.matrix = d;
    }
  }
  return best;
}

}  // namespace hiercluster
