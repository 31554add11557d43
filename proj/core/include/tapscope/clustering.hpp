#pragma once

#include <cstddef>
#include <vector>

#include "tapscope/dataset.hpp"

namespace tapscope {

/// Sum of squared Euclidean distances from every row to `center`.
/// center.size() must equal m.n_cols.
double sse(const FeatureMatrix& m, const std::vector<double>& center);

struct TwoMeansResult {
  std::vector<int> assignment;            // 0 or 1 per row
  std::vector<std::vector<double>> centers;  // 2 x n_cols
};

/// Deterministic 2-means. Runs Lloyd iterations from a fixed candidate list of
/// initial center pairs and keeps the lowest-SSE result (ties: earliest
/// candidate). Candidates: (1) c1 = the row farthest from the centroid, c2 =
/// the row farthest from c1 (ties by lowest row index); (2) centroid +/- one
/// column standard deviation along each non-degenerate axis. Each run
/// alternates assignment (nearest center, ties to group 0) and mean update
/// until assignments are stable or max_iter. If a group empties, the row
/// farthest from the other group's center is moved into it. No randomness
/// anywhere: equal inputs give bitwise-equal results.
/// Throws std::invalid_argument when rows < 2 or all rows are identical.
TwoMeansResult two_means(const FeatureMatrix& m, int max_iter = 300);

struct ClusteringResult {
  int k = 0;
  std::vector<int> assignments;              // cluster id in [0, k) per row
  std::vector<std::vector<double>> centers;  // k x n_cols
  std::vector<double> cluster_sse;
  double total_sse = 0.0;

  struct Split {
    int parent;  // creation index of the cluster that was bisected
    int child_a;
    int child_b;
  };
  std::vector<Split> split_trace;
};

/// Bisecting k-means: start from one cluster holding every row and repeatedly
/// run two_means on the cluster with the largest SSE (ties by lowest creation
/// index; zero-SSE clusters are indivisible and never selected) until k
/// clusters exist. Final ids follow creation order. Fully deterministic.
/// Throws std::invalid_argument when k < 1 or k exceeds the number of
/// distinct rows.
ClusteringResult bisect_kmeans(const FeatureMatrix& m, int k, int max_iter = 300);

}
