#include "hiercluster/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

namespace hiercluster {

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::diameter: return "diam";
    case CostKind::radius: return "rad";
    case CostKind::discrete_radius: return "drad";
  }
  return "?";
}

CostKind cost_kind_from_string(std::string_view name) {
  if (name == "diam" || name == "diameter") return CostKind::diameter;
  if (name == "rad" || name == "radius") return CostKind::radius;
  if (name == "drad" || name == "discrete_radius") return CostKind::discrete_radius;
  throw std::invalid_argument("unknown cost kind: " + std::string(name));
}

namespace {

void check_triangle_triple(const std::vector<double>& d, int n, int i, int j, int k) {
  const double lhs = d[static_cast<size_t>(i) * n + k];
  const double rhs = d[static_cast<size_t>(i) * n + j] + d[static_cast<size_t>(j) * n + k];
  if (lhs > rhs + kTol) {
    throw MetricError(MetricError::Code::triangle_violation,
                      "triangle inequality violated: d(" + std::to_string(i) + "," +
                          std::to_string(k) + ") > d(" + std::to_string(i) + "," +
                          std::to_string(j) + ") + d(" + std::to_string(j) + "," +
                          std::to_string(k) + ")",
                      i, j, k);
  }
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::validated(std::vector<std::string> labels,
                                               std::vector<std::vector<double>> matrix,
                                               std::optional<Candidates> candidates) {
  const int n = static_cast<int>(matrix.size());
  std::vector<double> flat(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(matrix[i].size()) != n) {
      throw MetricError(MetricError::Code::not_square, "row " + std::to_string(i) +
                                                           " has wrong length");
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(matrix[i][j])) {
        throw MetricError(MetricError::Code::not_square, "non-finite entry", i, j);
      }
      flat[static_cast<size_t>(i) * n + j] = matrix[i][j];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(flat[static_cast<size_t>(i) * n + i]) > kTol) {
      throw MetricError(MetricError::Code::nonzero_diagonal,
                        "nonzero diagonal at " + std::to_string(i), i, i);
    }
    for (int j = i + 1; j < n; ++j) {
      const double dij = flat[static_cast<size_t>(i) * n + j];
      const double dji = flat[static_cast<size_t>(j) * n + i];
      if (std::abs(dij - dji) > kTol) {
        throw MetricError(MetricError::Code::asymmetric_matrix,
                          "asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")",
                          i, j);
      }
      if (dij <= kTol) {
        throw MetricError(MetricError::Code::nonpositive_off_diagonal,
                          "nonpositive off-diagonal at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")",
                          i, j);
      }
    }
  }

  if (n <= validation_exhaustive_limit()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (i != j && j != k) check_triangle_triple(flat, n, i, j, k);
  } else {
    // Deterministic sample; a full sweep is cubic and infeasible at scale.
    std::mt19937_64 rng(0x7261746964756d0ULL ^ static_cast<uint64_t>(n));
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int s = 0; s < 2'000'000; ++s) {
      const int i = pick(rng), j = pick(rng), k = pick(rng);
      if (i != j && j != k) check_triangle_triple(flat, n, i, j, k);
    }
  }

  if (candidates) {
    const int m = static_cast<int>(candidates->rows.size());
    for (int c = 0; c < m; ++c) {
      if (static_cast<int>(candidates->rows[c].size()) != n) {
        throw MetricError(MetricError::Code::bad_candidate_row,
                          "candidate row " + std::to_string(c) + " has wrong length", c);
      }
      for (int p = 0; p < n; ++p) {
        if (!std::isfinite(candidates->rows[c][p]) || candidates->rows[c][p] < -kTol) {
          throw MetricError(MetricError::Code::bad_candidate_row,
                            "candidate row " + std::to_string(c) + " has bad entry", c, p);
        }
      }
    }
    auto check_candidate_triple = [&](int c, int i, int j) {
      const double ci = candidates->rows[c][i];
      const double cj = candidates->rows[c][j];
      const double dij = flat[static_cast<size_t>(i) * n + j];
      if (ci > cj + dij + kTol || dij > ci + cj + kTol) {
        throw MetricError(MetricError::Code::bad_candidate_row,
                          "candidate row " + std::to_string(c) +
                              " breaks the triangle inequality with points (" +
                              std::to_string(i) + "," + std::to_string(j) + ")",
                          c, i, j);
      }
    };
    const long long total = static_cast<long long>(m) * n * n;
    if (total <= 8'000'000) {
      for (int c = 0; c < m; ++c)
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) check_candidate_triple(c, i, j);
    } else {
      std::mt19937_64 rng(0x63616e6469646174ULL ^ static_cast<uint64_t>(m));
      std::uniform_int_distribution<int> pick_c(0, m - 1), pick_p(0, n - 1);
      for (int s = 0; s < 2'000'000; ++s) {
        const int i = pick_p(rng), j = pick_p(rng);
        if (i != j) check_candidate_triple(pick_c(rng), i, j);
      }
    }
  }

  FiniteMetricSpace space;
  space.n_ = n;
  space.labels_ = std::move(labels);
  if (space.labels_.empty()) {
    space.labels_.reserve(n);
    for (int i = 0; i < n; ++i) space.labels_.push_back("p" + std::to_string(i));
  }
  space.dist_ = std::move(flat);
  if (candidates) {
    space.candidate_labels_ = std::move(candidates->labels);
    space.candidate_rows_ = std::move(candidates->rows);
    if (space.candidate_labels_.empty()) {
      for (size_t c = 0; c < space.candidate_rows_.size(); ++c)
        space.candidate_labels_.push_back("c" + std::to_string(c));
    }
  }
  return space;
}

FiniteMetricSpace FiniteMetricSpace::trusted(std::vector<std::string> labels,
                                             std::vector<double> flat_matrix,
                                             std::optional<Candidates> candidates) {
  FiniteMetricSpace space;
  const size_t nn = flat_matrix.size();
  int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
  if (static_cast<size_t>(n) * n != nn) {
    throw MetricError(MetricError::Code::not_square, "flat matrix is not square");
  }
  space.n_ = n;
  space.labels_ = std::move(labels);
  if (space.labels_.empty()) {
    for (int i = 0; i < n; ++i) space.labels_.push_back("p" + std::to_string(i));
  }
  space.dist_ = std::move(flat_matrix);
  if (candidates) {
    space.candidate_labels_ = std::move(candidates->labels);
    space.candidate_rows_ = std::move(candidates->rows);
  }
  return space;
}

double FiniteMetricSpace::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) best = std::min(best, dist(i, j));
  return best;
}

double FiniteMetricSpace::max_distance() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) best = std::max(best, dist(i, j));
  return best;
}

FiniteMetricSpace FiniteMetricSpace::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw MetricError(MetricError::Code::nonpositive_factor, "scale factor must be positive");
  }
  FiniteMetricSpace space = *this;
  for (double& d : space.dist_) d *= factor;
  for (auto& row : space.candidate_rows_)
    for (double& d : row) d *= factor;
  return space;
}

FiniteMetricSpace FiniteMetricSpace::with_point_candidates() const {
  FiniteMetricSpace space = *this;
  for (int i = 0; i < n_; ++i) {
    space.candidate_labels_.push_back(labels_[i]);
    std::vector<double> row(n_);
    for (int j = 0; j < n_; ++j) row[j] = dist(i, j);
    space.candidate_rows_.push_back(std::move(row));
  }
  return space;
}

Clustering Clustering::singletons(int n) {
  Clustering c;
  c.blocks.reserve(n);
  for (int i = 0; i < n; ++i) c.blocks.push_back({i});
  return c;
}

Clustering Clustering::from_blocks(std::vector<std::vector<int>> blocks, int n) {
  Clustering c;
  c.blocks = std::move(blocks);
  std::vector<char> seen(n, 0);
  size_t total = 0;
  for (auto& b : c.blocks) {
    if (b.empty()) {
      throw ClusterError(ClusterError::Code::invalid_partition, "empty block");
    }
    for (int p : b) {
      if (p < 0 || p >= n) {
        throw ClusterError(ClusterError::Code::index_out_of_range,
                           "point index out of range: " + std::to_string(p));
      }
      if (seen[p]) {
        throw ClusterError(ClusterError::Code::invalid_partition,
                           "point appears twice: " + std::to_string(p));
      }
      seen[p] = 1;
    }
    total += b.size();
  }
  if (total != static_cast<size_t>(n)) {
    throw ClusterError(ClusterError::Code::invalid_partition, "blocks do not cover [n]");
  }
  c.canonicalize();
  return c;
}

Clustering Clustering::from_assignment(const std::vector<int>& assignment) {
  std::unordered_map<int, std::vector<int>> groups;
  for (int p = 0; p < static_cast<int>(assignment.size()); ++p)
    groups[assignment[p]].push_back(p);
  Clustering c;
  c.blocks.reserve(groups.size());
  for (auto& [key, pts] : groups) c.blocks.push_back(std::move(pts));
  c.canonicalize();
  return c;
}

int Clustering::ground_size() const {
  size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  return static_cast<int>(total);
}

void Clustering::canonicalize() {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

double cluster_cost(const FiniteMetricSpace& space, const std::vector<int>& cluster,
                    CostKind kind) {
  if (cluster.empty()) {
    throw ClusterError(ClusterError::Code::empty_cluster, "cluster_cost on empty cluster");
  }
  for (int p : cluster) {
    if (p < 0 || p >= space.size()) {
      throw ClusterError(ClusterError::Code::index_out_of_range,
                         "cluster index out of range: " + std::to_string(p));
    }
  }
  switch (kind) {
    case CostKind::diameter: {
      double best = 0.0;
      for (size_t a = 0; a < cluster.size(); ++a)
        for (size_t b = a + 1; b < cluster.size(); ++b)
          best = std::max(best, space.dist(cluster[a], cluster[b]));
      return best;
    }
    case CostKind::discrete_radius: {
      double best = std::numeric_limits<double>::infinity();
      for (int c : cluster) {
        double ecc = 0.0;
        for (int p : cluster) ecc = std::max(ecc, space.dist(c, p));
        best = std::min(best, ecc);
      }
      return best;
    }
    case CostKind::radius: {
      double best = std::numeric_limits<double>::infinity();
      for (int c : cluster) {
        double ecc = 0.0;
        for (int p : cluster) ecc = std::max(ecc, space.dist(c, p));
        best = std::min(best, ecc);
      }
      for (int c = 0; c < space.candidate_count(); ++c) {
        double ecc = 0.0;
        for (int p : cluster) ecc = std::max(ecc, space.candidate_dist(c, p));
        best = std::min(best, ecc);
      }
      return best;
    }
  }
  return 0.0;
}

int best_discrete_center(const FiniteMetricSpace& space, const std::vector<int>& cluster) {
  if (cluster.empty()) {
    throw ClusterError(ClusterError::Code::empty_cluster, "center of empty cluster");
  }
  std::vector<double> ecc(cluster.size(), 0.0);
  double best = std::numeric_limits<double>::infinity();
  for (size_t a = 0; a < cluster.size(); ++a) {
    for (int p : cluster) ecc[a] = std::max(ecc[a], space.dist(cluster[a], p));
    best = std::min(best, ecc[a]);
  }
  int center = cluster.front();
  bool found = false;
  for (size_t a = 0; a < cluster.size(); ++a) {
    if (ecc[a] <= best + kTol && (!found || cluster[a] < center)) {
      center = cluster[a];
      found = true;
    }
  }
  return center;
}

Center best_radius_center(const FiniteMetricSpace& space, const std::vector<int>& cluster) {
  double best = std::numeric_limits<double>::infinity();
  Center result{false, best_discrete_center(space, cluster)};
  {
    double ecc = 0.0;
    for (int p : cluster) ecc = std::max(ecc, space.dist(result.index, p));
    best = ecc;
  }
  for (int c = 0; c < space.candidate_count(); ++c) {
    double ecc = 0.0;
    for (int p : cluster) ecc = std::max(ecc, space.candidate_dist(c, p));
    if (ecc < best - kTol) {
      best = ecc;
      result = Center{true, c};
    }
  }
  return result;
}

double clustering_cost(const FiniteMetricSpace& space, const Clustering& clustering,
                       CostKind kind) {
  double worst = 0.0;
  for (const auto& block : clustering.blocks)
    worst = std::max(worst, cluster_cost(space, block, kind));
  return worst;
}

}  // namespace hiercluster
