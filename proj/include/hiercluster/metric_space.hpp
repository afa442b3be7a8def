#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hiercluster {

// Absolute tolerance for all metric-axiom and cost comparisons.
inline constexpr double kTol = 1e-9;

enum class CostKind { diameter, radius, discrete_radius };

std::string_view to_string(CostKind kind);
CostKind cost_kind_from_string(std::string_view name);

struct MetricError : std::runtime_error {
  enum class Code {
    not_square,
    asymmetric_matrix,
    nonzero_diagonal,
    nonpositive_off_diagonal,
    triangle_violation,
    bad_candidate_row,
    nonpositive_factor,
  };
  Code code;
  int i = -1, j = -1, k = -1;  // witnessing indices where applicable

  MetricError(Code code, const std::string& what, int i = -1, int j = -1, int k = -1)
      : std::runtime_error(what), code(code), i(i), j(j), k(k) {}
};

struct ClusterError : std::runtime_error {
  enum class Code { empty_cluster, index_out_of_range, invalid_partition };
  Code code;
  ClusterError(Code code, const std::string& what) : std::runtime_error(what), code(code) {}
};

// A center for the radius objective: either a clusterable point or an
// external candidate.
struct Center {
  bool is_candidate = false;
  int index = -1;
};

// Validated finite metric over n clusterable points, plus an optional list
// of external center candidates, each carrying a distance row to all n
// points. Immutable after construction; safe to share across threads.
class FiniteMetricSpace {
 public:
  struct Candidates {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;  // rows[c][p] = d(candidate c, point p)
  };

  FiniteMetricSpace() = default;

  // Full axiom check: symmetry, zero diagonal, positivity, triangle
  // inequality (sampled above validation_exhaustive_limit() points), and the
  // joint triangle condition for every candidate row.
  static FiniteMetricSpace validated(std::vector<std::string> labels,
                                     std::vector<std::vector<double>> matrix,
                                     std::optional<Candidates> candidates = std::nullopt);

  // For matrices that are metrics by construction (shortest-path closures).
  // Only cheap shape checks are performed.
  static FiniteMetricSpace trusted(std::vector<std::string> labels,
                                   std::vector<double> flat_matrix,
                                   std::optional<Candidates> candidates = std::nullopt);

  static int validation_exhaustive_limit() { return 256; }

  int size() const { return n_; }
  double dist(int i, int j) const { return dist_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }

  int candidate_count() const { return static_cast<int>(candidate_rows_.size()); }
  bool has_candidates() const { return !candidate_rows_.empty(); }
  double candidate_dist(int c, int p) const { return candidate_rows_[c][p]; }
  const std::vector<std::string>& candidate_labels() const { return candidate_labels_; }
  const std::vector<std::vector<double>>& candidate_rows() const { return candidate_rows_; }

  double center_dist(const Center& c, int p) const {
    return c.is_candidate ? candidate_dist(c.index, p) : dist(c.index, p);
  }

  double min_positive_distance() const;
  double max_distance() const;

  // All distances (candidate rows included) multiplied by factor > 0.
  FiniteMetricSpace scaled(double factor) const;

  // Same points with the point set itself appended as center candidates,
  // so the radius objective may center anywhere in the space.
  FiniteMetricSpace with_point_candidates() const;

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;  // n x n row-major
  std::vector<std::string> candidate_labels_;
  std::vector<std::vector<double>> candidate_rows_;
};

// A partition of [n] into nonempty blocks, kept canonical: every block
// sorted ascending, blocks ordered by smallest element.
struct Clustering {
  std::vector<std::vector<int>> blocks;

  static Clustering singletons(int n);
  // Validates disjointness / coverage of [n] and canonicalizes.
  static Clustering from_blocks(std::vector<std::vector<int>> blocks, int n);
  // assignment[p] = arbitrary group key per point.
  static Clustering from_assignment(const std::vector<int>& assignment);

  int block_count() const { return static_cast<int>(blocks.size()); }
  int ground_size() const;
  void canonicalize();

  bool operator==(const Clustering& other) const { return blocks == other.blocks; }
};

double cluster_cost(const FiniteMetricSpace& space, const std::vector<int>& cluster,
                    CostKind kind);

// Lexicographically smallest optimal discrete center of the cluster.
int best_discrete_center(const FiniteMetricSpace& space, const std::vector<int>& cluster);

// Optimal radius center over cluster members plus external candidates
// (candidates win ties only when strictly better; members are scanned first).
Center best_radius_center(const FiniteMetricSpace& space, const std::vector<int>& cluster);

double clustering_cost(const FiniteMetricSpace& space, const Clustering& clustering,
                       CostKind kind);

}  // namespace hiercluster
