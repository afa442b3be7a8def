#include "hiercluster/hierarchy.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

namespace hiercluster {

MergeHierarchy::MergeHierarchy(int n, std::vector<std::vector<int>> merges)
    : n_(n), merges_(std::move(merges)) {
  validate();
}

MergeHierarchy MergeHierarchy::trivial(int n) {
  MergeHierarchy h;
  h.n_ = n;
  return h;
}

void MergeHierarchy::validate() const {
  if (n_ < 1) throw HierarchyError(HierarchyError::Code::invalid_merges, "empty hierarchy");
  const int total = n_ + static_cast<int>(merges_.size());
  std::vector<char> alive(total, 0);
  for (int i = 0; i < n_; ++i) alive[i] = 1;
  int blocks = n_;
  for (size_t j = 0; j < merges_.size(); ++j) {
    const auto& ids = merges_[j];
    if (ids.size() < 2) {
      throw HierarchyError(HierarchyError::Code::invalid_merges,
                           "merge event needs at least two cluster ids");
    }
    for (int id : ids) {
      if (id < 0 || id >= n_ + static_cast<int>(j) || !alive[id]) {
        throw HierarchyError(HierarchyError::Code::invalid_merges,
                             "merge names a dead or unknown cluster id " + std::to_string(id));
      }
      alive[id] = 0;
    }
    alive[n_ + static_cast<int>(j)] = 1;
    blocks -= static_cast<int>(ids.size()) - 1;
  }
  if (blocks != 1) {
    throw HierarchyError(HierarchyError::Code::invalid_merges,
                         "merge list does not reach a single block");
  }
}

namespace {

// Walks merge events, exposing block membership per state.
struct StateWalker {
  int n;
  const std::vector<std::vector<int>>& merges;
  std::vector<std::vector<int>> members;  // by cluster id; moved-from once merged
  std::vector<char> alive;
  int block_count;
  size_t next_event = 0;

  explicit StateWalker(const MergeHierarchy& h) : n(h.size()), merges(h.merges()) {
    members.resize(n + merges.size());
    alive.assign(n + merges.size(), 0);
    for (int i = 0; i < n; ++i) {
      members[i] = {i};
      alive[i] = 1;
    }
    block_count = n;
  }

  bool done() const { return next_event >= merges.size(); }

  void step() {
    const auto& ids = merges[next_event];
    std::vector<int> merged;
    for (int id : ids) {
      merged.insert(merged.end(), members[id].begin(), members[id].end());
      members[id].clear();
      members[id].shrink_to_fit();
      alive[id] = 0;
    }
    std::sort(merged.begin(), merged.end());
    const int new_id = n + static_cast<int>(next_event);
    members[new_id] = std::move(merged);
    alive[new_id] = 1;
    block_count -= static_cast<int>(ids.size()) - 1;
    ++next_event;
  }

  Clustering snapshot() const {
    std::vector<std::vector<int>> blocks;
    blocks.reserve(block_count);
    for (size_t id = 0; id < members.size(); ++id)
      if (alive[id]) blocks.push_back(members[id]);
    Clustering c;
    c.blocks = std::move(blocks);
    c.canonicalize();
    return c;
  }
};

}  // namespace

Clustering MergeHierarchy::level(int i) const {
  StateWalker walker(*this);
  while (walker.block_count > i && !walker.done()) walker.step();
  if (walker.block_count > i) {
    throw HierarchyError(HierarchyError::Code::invalid_merges,
                         "no state with at most " + std::to_string(i) + " blocks");
  }
  return walker.snapshot();
}

std::vector<Clustering> MergeHierarchy::states() const {
  StateWalker walker(*this);
  std::vector<Clustering> out;
  out.push_back(walker.snapshot());
  while (!walker.done()) {
    walker.step();
    out.push_back(walker.snapshot());
  }
  return out;
}

std::vector<int> MergeHierarchy::state_sizes() const {
  std::vector<int> sizes;
  int blocks = n_;
  sizes.push_back(blocks);
  for (const auto& ids : merges_) {
    blocks -= static_cast<int>(ids.size()) - 1;
    sizes.push_back(blocks);
  }
  return sizes;
}

bool check_compatibility(const Clustering& fine, const Clustering& coarse) {
  const int n = fine.ground_size();
  if (coarse.ground_size() != n) {
    throw HierarchyError(HierarchyError::Code::ground_set_mismatch,
                         "clusterings cover different ground sets");
  }
  std::vector<int> owner(n, -1);
  for (int b = 0; b < coarse.block_count(); ++b)
    for (int p : coarse.blocks[b]) {
      if (p < 0 || p >= n) {
        throw HierarchyError(HierarchyError::Code::ground_set_mismatch, "index out of range");
      }
      owner[p] = b;
    }
  for (const auto& block : fine.blocks) {
    const int first = owner[block.front()];
    for (int p : block)
      if (owner[p] != first) return false;
  }
  return true;
}

void HierarchicalSequence::validate(int n) const {
  if (clusterings.empty()) {
    throw HierarchyError(HierarchyError::Code::invalid_sequence, "empty sequence");
  }
  if (clusterings.front().block_count() != n) {
    throw HierarchyError(HierarchyError::Code::invalid_sequence,
                         "sequence must start with the all-singleton clustering");
  }
  if (clusterings.back().block_count() != 1) {
    throw HierarchyError(HierarchyError::Code::invalid_sequence,
                         "sequence must end with a single block");
  }
  for (size_t i = 0; i + 1 < clusterings.size(); ++i) {
    if (clusterings[i + 1].block_count() > clusterings[i].block_count() ||
        !check_compatibility(clusterings[i], clusterings[i + 1])) {
      throw HierarchyError(HierarchyError::Code::invalid_sequence,
                           "consecutive clusterings are not hierarchically compatible");
    }
  }
}

MergeHierarchy extend_sequence(const HierarchicalSequence& seq, const FiniteMetricSpace& space,
                               CostKind kind) {
  const int n = space.size();
  seq.validate(n);
  const int t = static_cast<int>(seq.clusterings.size());

  std::vector<double> cost(t);
  for (int m = 0; m < t; ++m) cost[m] = clustering_cost(space, seq.clusterings[m], kind);

  // assigned[i-1] = member index chosen for level i.
  std::vector<int> assigned(n);
  for (int i = 1; i <= n; ++i) {
    int best = -1;
    for (int m = 0; m < t; ++m) {
      if (seq.clusterings[m].block_count() > i) continue;
      if (best < 0) {
        best = m;
        continue;
      }
      const double db = cost[m] - cost[best];
      if (db < -kTol) {
        best = m;
      } else if (db <= kTol) {
        const int cb = seq.clusterings[m].block_count() - seq.clusterings[best].block_count();
        if (cb < 0 || (cb == 0 && m > best)) best = m;
      }
    }
    if (best < 0) {
      throw HierarchyError(HierarchyError::Code::invalid_sequence,
                           "no member with at most " + std::to_string(i) + " blocks");
    }
    assigned[i - 1] = best;
  }

  // Materialize merge events at each boundary where the assignment changes.
  std::vector<int> live_id(n);  // per point: current cluster id
  std::iota(live_id.begin(), live_id.end(), 0);
  std::vector<std::vector<int>> merges;
  int next_id = n;
  for (int i = n - 1; i >= 1; --i) {
    const Clustering& from = seq.clusterings[assigned[i]];
    const Clustering& to = seq.clusterings[assigned[i - 1]];
    if (assigned[i - 1] == assigned[i] || to == from) continue;
    for (const auto& target_block : to.blocks) {
      std::vector<int> ids;
      for (int p : target_block) ids.push_back(live_id[p]);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      if (ids.size() < 2) continue;
      for (int p : target_block) live_id[p] = next_id;
      merges.push_back(std::move(ids));
      ++next_id;
    }
  }
  return MergeHierarchy(n, std::move(merges));
}

namespace {

ApproximationProfile profile_against(const MergeHierarchy& hier,
                                     const std::vector<double>& opt_costs,
                                     const FiniteMetricSpace& space, CostKind kind) {
  const int n = space.size();
  ApproximationProfile out;
  out.kind = kind;
  out.rows.resize(n);

  // Per-block costs cached by cluster id; blocks persist across states.
  StateWalker walker(hier);
  std::vector<double> id_cost(n + hier.merges().size(), 0.0);
  std::vector<double> level_cost(n + 1, 0.0);
  // state cost = max over alive blocks; recomputed per state over alive ids.
  auto state_cost = [&]() {
    double worst = 0.0;
    for (size_t id = 0; id < walker.members.size(); ++id)
      if (walker.alive[id]) worst = std::max(worst, id_cost[id]);
    return worst;
  };
  for (int id = 0; id < n; ++id) id_cost[id] = 0.0;
  int covered = n + 1;
  {
    // Earliest state with <= i blocks serves level i.
    double c = state_cost();
    for (int i = covered - 1; i >= walker.block_count; --i) level_cost[i] = c;
    covered = walker.block_count;
  }
  while (!walker.done()) {
    walker.step();
    const int new_id = n + static_cast<int>(walker.next_event) - 1;
    id_cost[new_id] = cluster_cost(space, walker.members[new_id], kind);
    if (walker.block_count < covered) {
      const double c = state_cost();
      for (int i = covered - 1; i >= walker.block_count; --i)
        if (i >= 1 && i <= n) level_cost[i] = c;
      covered = walker.block_count;
    }
  }

  out.max_ratio = 0.0;
  for (int k = 1; k <= n; ++k) {
    auto& row = out.rows[k - 1];
    row.k = k;
    row.alg_cost = level_cost[k];
    row.opt_cost = opt_costs[k - 1];
    if (row.opt_cost > kTol) {
      row.ratio = row.alg_cost / row.opt_cost;
    } else {
      row.ratio = row.alg_cost <= kTol ? 1.0 : std::numeric_limits<double>::infinity();
    }
    if (row.ratio > out.max_ratio) {
      out.max_ratio = row.ratio;
      out.argmax_k = k;
    }
  }
  return out;
}

}  // namespace

ApproximationProfile approximation_profile(const MergeHierarchy& hier,
                                           const OptimalProfile& profile,
                                           const FiniteMetricSpace& space, CostKind kind) {
  if (profile.kind != kind) {
    throw HierarchyError(HierarchyError::Code::kind_mismatch,
                         "profile kind does not match requested kind");
  }
  if (static_cast<int>(profile.levels.size()) != space.size() || hier.size() != space.size()) {
    throw HierarchyError(HierarchyError::Code::size_mismatch,
                         "profile/hierarchy/space sizes differ");
  }
  std::vector<double> opt(space.size());
  for (int k = 1; k <= space.size(); ++k) opt[k - 1] = profile.at(k).cost;
  return profile_against(hier, opt, space, kind);
}

ApproximationProfile approximation_profile(const MergeHierarchy& hier,
                                           const FiniteMetricSpace& space, CostKind kind,
                                           int solver_limit) {
  return approximation_profile(hier, optimal_profile(space, kind, solver_limit), space, kind);
}

namespace {

struct PohSearch {
  const FiniteMetricSpace& space;
  CostKind kind;
  int n;
  std::vector<double> opt;               // opt[k-1]
  std::vector<double> mask_cost;         // cluster cost per point bitmask
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> best_merges;  // as block-index pairs per step
  std::vector<std::pair<int, int>> cur;

  PohSearch(const FiniteMetricSpace& s, CostKind kind, const OptimalProfile& profile)
      : space(s), kind(kind), n(s.size()) {
    opt.resize(n);
    for (int k = 1; k <= n; ++k) opt[k - 1] = profile.at(k).cost;
    mask_cost.assign(size_t{1} << n, 0.0);
    for (uint32_t mask = 1; mask < (uint32_t{1} << n); ++mask) {
      if ((mask & (mask - 1)) == 0) continue;
      std::vector<int> pts;
      for (int p = 0; p < n; ++p)
        if (mask >> p & 1) pts.push_back(p);
      mask_cost[mask] = cluster_cost(space, pts, kind);
    }
  }

  void dfs(std::vector<uint32_t>& blocks, double cost_so_far, double running_max) {
    const int m = static_cast<int>(blocks.size());
    if (m == 1) {
      if (running_max < best) {
        best = running_max;
        best_merges = cur;
      }
      return;
    }
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        const uint32_t merged = blocks[a] | blocks[b];
        const double cost = std::max(cost_so_far, mask_cost[merged]);
        const double ratio = opt[m - 2] > kTol
                                 ? cost / opt[m - 2]
                                 : (cost <= kTol ? 1.0 : std::numeric_limits<double>::infinity());
        const double next_max = std::max(running_max, ratio);
        if (next_max >= best) continue;  // the max ratio below can only grow
        std::vector<uint32_t> next;
        next.reserve(m - 1);
        for (int i = 0; i < m; ++i)
          if (i != a && i != b) next.push_back(blocks[i]);
        next.push_back(merged);
        cur.emplace_back(a, b);
        dfs(next, cost, next_max);
        cur.pop_back();
      }
    }
  }
};

}  // namespace

PriceOfHierarchy exhaustive_price_of_hierarchy(const FiniteMetricSpace& space, CostKind kind,
                                               int limit) {
  const int n = space.size();
  if (n > limit) {
    throw HierarchyError(HierarchyError::Code::instance_too_large,
                         "exhaustive enumeration limited to n <= " + std::to_string(limit));
  }
  PriceOfHierarchy result;
  if (n <= 1) {
    result.value = 1.0;
    result.witness = MergeHierarchy::trivial(n);
    return result;
  }
  const OptimalProfile profile = optimal_profile(space, kind);
  PohSearch search(space, kind, profile);
  std::vector<uint32_t> blocks;
  for (int p = 0; p < n; ++p) blocks.push_back(uint32_t{1} << p);
  search.dfs(blocks, 0.0, 1.0);  // level n has ratio 1 by the 0/0 convention
  result.value = search.best;

  // Replay the winning pair choices as merge events.
  std::vector<int> ids;
  for (int p = 0; p < n; ++p) ids.push_back(p);
  std::vector<std::vector<int>> merges;
  int next_id = n;
  for (auto [a, b] : search.best_merges) {
    std::vector<int> ev = {std::min(ids[a], ids[b]), std::max(ids[a], ids[b])};
    // mirror the dfs block bookkeeping: remove a and b, append the merge
    std::vector<int> next;
    for (int i = 0; i < static_cast<int>(ids.size()); ++i)
      if (i != a && i != b) next.push_back(ids[i]);
    next.push_back(next_id);
    ids = std::move(next);
    merges.push_back(std::move(ev));
    ++next_id;
  }
  result.witness = MergeHierarchy(n, std::move(merges));
  return result;
}

double price_of_hierarchy_multimerge(const FiniteMetricSpace& space, CostKind kind, int limit) {
  const int n = space.size();
  if (n > limit) {
    throw HierarchyError(HierarchyError::Code::instance_too_large,
                         "multi-merge oracle limited to n <= " + std::to_string(limit));
  }
  if (n <= 1) return 1.0;
  const OptimalProfile profile = optimal_profile(space, kind);
  std::vector<double> opt(n);
  for (int k = 1; k <= n; ++k) opt[k - 1] = profile.at(k).cost;

  // Enumerate all partitions of [n] as sorted block-mask lists.
  std::vector<std::vector<uint32_t>> partitions;
  std::vector<int> assign(n, 0);
  auto emit = [&](int groups) {
    std::vector<uint32_t> masks(groups, 0);
    for (int p = 0; p < n; ++p) masks[assign[p]] |= uint32_t{1} << p;
    partitions.push_back(std::move(masks));
  };
  // restricted growth strings
  auto rec = [&](auto&& self, int p, int maxg) -> void {
    if (p == n) {
      emit(maxg + 1);
      return;
    }
    for (int g = 0; g <= maxg + 1 && g < n; ++g) {
      assign[p] = g;
      self(self, p + 1, std::max(maxg, g));
    }
  };
  assign[0] = 0;
  rec(rec, 1, 0);

  std::map<std::vector<uint32_t>, int> index;
  for (int i = 0; i < static_cast<int>(partitions.size()); ++i) index[partitions[i]] = i;

  std::vector<double> part_cost(partitions.size());
  for (size_t i = 0; i < partitions.size(); ++i) {
    double worst = 0.0;
    for (uint32_t mask : partitions[i]) {
      std::vector<int> pts;
      for (int p = 0; p < n; ++p)
        if (mask >> p & 1) pts.push_back(p);
      worst = std::max(worst, cluster_cost(space, pts, kind));
    }
    part_cost[i] = worst;
  }

  // best[i] = min over strict-coarsening chains from partition i to the top
  // of the max over consecutive pairs (P -> Q) of cost(Q) / opt(|P|-1).
  std::vector<double> best(partitions.size(), -1.0);
  auto solve = [&](auto&& self, int i) -> double {
    if (best[i] >= 0.0) return best[i];
    const auto& masks = partitions[i];
    const int m = static_cast<int>(masks.size());
    if (m == 1) return best[i] = 0.0;
    double value = std::numeric_limits<double>::infinity();
    // strict coarsenings = nontrivial partitions of the block set
    std::vector<int> bassign(m, 0);
    auto inner = [&](auto&& in, int b, int maxg) -> void {
      if (b == m) {
        if (maxg + 1 == m) return;  // identity, not strict
        std::vector<uint32_t> coarse(maxg + 1, 0);
        for (int x = 0; x < m; ++x) coarse[bassign[x]] |= masks[x];
        std::sort(coarse.begin(), coarse.end(),
                  [](uint32_t a, uint32_t c) { return std::countr_zero(a) < std::countr_zero(c); });
        const int j = index.at(coarse);
        const double opt_here = opt[m - 2];
        const double r =
            opt_here > kTol
                ? part_cost[j] / opt_here
                : (part_cost[j] <= kTol ? 1.0 : std::numeric_limits<double>::infinity());
        value = std::min(value, std::max(r, self(self, j)));
        return;
      }
      for (int g = 0; g <= maxg + 1 && g < m; ++g) {
        bassign[b] = g;
        in(in, b + 1, std::max(maxg, g));
      }
    };
    bassign[0] = 0;
    inner(inner, 1, 0);
    return best[i] = value;
  };

  std::vector<uint32_t> singles;
  for (int p = 0; p < n; ++p) singles.push_back(uint32_t{1} << p);
  return std::max(1.0, solve(solve, index.at(singles)));
}

}  // namespace hiercluster
