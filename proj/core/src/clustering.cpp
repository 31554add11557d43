#include "tapscope/clustering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace tapscope {

namespace {

double sq_dist(const double* a, const double* b, std::size_t n) {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

std::vector<double> mean_of(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
  std::vector<double> c(m.n_cols, 0.0);
  for (std::size_t r : rows)
    for (std::size_t j = 0; j < m.n_cols; ++j) c[j] += m.at(r, j);
  for (double& v : c) v /= static_cast<double>(rows.size());
  return c;
}

double sse_of(const FeatureMatrix& m, const std::vector<std::size_t>& rows,
              const std::vector<double>& center) {
  double s = 0.0;
  for (std::size_t r : rows) s += sq_dist(m.row(r), center.data(), m.n_cols);
  return s;
}

bool rows_equal(const FeatureMatrix& m, std::size_t a, std::size_t b) {
  const double* ra = m.row(a);
  const double* rb = m.row(b);
  return std::equal(ra, ra + m.n_cols, rb);
}

FeatureMatrix submatrix(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  out.n_rows = rows.size();
  out.n_cols = m.n_cols;
  out.feature_subset = m.feature_subset;
  out.standardized = m.standardized;
  out.values.reserve(rows.size() * m.n_cols);
  for (std::size_t r : rows)
    out.values.insert(out.values.end(), m.row(r), m.row(r) + m.n_cols);
  return out;
}

}  // namespace

double sse(const FeatureMatrix& m, const std::vector<double>& center) {
  if (center.size() != m.n_cols)
    throw std::invalid_argument("sse: center dimension mismatch");
  double s = 0.0;
  for (std::size_t r = 0; r < m.n_rows; ++r)
    s += sq_dist(m.row(r), center.data(), m.n_cols);
  return s;
}

TwoMeansResult two_means(const FeatureMatrix& m, int max_iter) {
  if (m.n_rows < 2) throw std::invalid_argument("two_means needs >= 2 rows");
  if (max_iter < 1) throw std::invalid_argument("two_means: max_iter must be >= 1");
  bool all_same = true;
  for (std::size_t r = 1; r < m.n_rows && all_same; ++r)
    all_same = rows_equal(m, 0, r);
  if (all_same) throw std::invalid_argument("two_means: all rows identical");

  const auto farthest_from = [&](const double* point) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
      const double d = sq_dist(m.row(r), point, m.n_cols);
      if (d > best_d) {
        best_d = d;
        best = r;
      }
    }
    return best;
  };

  std::vector<std::size_t> all(m.n_rows);
  for (std::size_t r = 0; r < m.n_rows; ++r) all[r] = r;
  const std::vector<double> centroid = mean_of(m, all);

  // Candidate initial center pairs, all data-deterministic. The farthest-point
  // pair alone has a failure mode on standardized telemetry: a column of pure
  // measurement noise has the same unit variance as an informative column, and
  // Lloyd started from noise-dominated extremes can converge to a stable split
  // along the noise axis (a genuine local minimum of the SSE). One axis-aligned
  // candidate per non-degenerate column escapes it; the lowest-SSE result wins.
  std::vector<std::array<std::vector<double>, 2>> inits;
  {
    const std::size_t i1 = farthest_from(centroid.data());
    std::vector<double> c1(m.row(i1), m.row(i1) + m.n_cols);
    const std::size_t i2 = farthest_from(c1.data());
    std::vector<double> c2(m.row(i2), m.row(i2) + m.n_cols);
    inits.push_back({std::move(c1), std::move(c2)});
  }
  for (std::size_t j = 0; j < m.n_cols; ++j) {
    double var = 0.0;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
      const double d = m.at(r, j) - centroid[j];
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(m.n_rows));
    if (sd <= 0.0) continue;
    std::array<std::vector<double>, 2> axis = {centroid, centroid};
    axis[0][j] += sd;
    axis[1][j] -= sd;
    inits.push_back(std::move(axis));
  }

  const auto assign = [&](const std::vector<std::vector<double>>& centers,
                          std::vector<int>& out) {
    std::size_t n0 = 0;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
      const double d0 = sq_dist(m.row(r), centers[0].data(), m.n_cols);
      const double d1 = sq_dist(m.row(r), centers[1].data(), m.n_cols);
      out[r] = d0 <= d1 ? 0 : 1;
      n0 += out[r] == 0;
    }
    // Repair an empty group with the row farthest from the surviving center.
    if (n0 == 0 || n0 == m.n_rows) {
      const int full = n0 == 0 ? 1 : 0;
      std::size_t best = 0;
      double best_d = -1.0;
      for (std::size_t r = 0; r < m.n_rows; ++r) {
        const double d = sq_dist(m.row(r), centers[full].data(), m.n_cols);
        if (d > best_d) {
          best_d = d;
          best = r;
        }
      }
      out[best] = 1 - full;
    }
  };

  const auto update_centers = [&](const std::vector<int>& a,
                                  std::vector<std::vector<double>>& centers) {
    for (int g = 0; g < 2; ++g) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < m.n_rows; ++r)
        if (a[r] == g) rows.push_back(r);
      centers[g] = mean_of(m, rows);
    }
  };

  TwoMeansResult best;
  double best_sse = std::numeric_limits<double>::infinity();
  for (const auto& init : inits) {
    std::vector<std::vector<double>> centers = {init[0], init[1]};
    std::vector<int> assignment(m.n_rows), next(m.n_rows);
    assign(centers, assignment);
    for (int iter = 0; iter < max_iter; ++iter) {
      update_centers(assignment, centers);
      assign(centers, next);
      if (next == assignment) break;
      assignment = next;
    }
    update_centers(assignment, centers);

    double total = 0.0;
    for (std::size_t r = 0; r < m.n_rows; ++r)
      total += sq_dist(m.row(r), centers[assignment[r]].data(), m.n_cols);
    if (total < best_sse) {
      best_sse = total;
      best.assignment = std::move(assignment);
      best.centers = std::move(centers);
    }
  }
  return best;
}

ClusteringResult bisect_kmeans(const FeatureMatrix& m, int k, int max_iter) {
  if (m.n_rows == 0) throw std::invalid_argument("bisect_kmeans: empty matrix");
  if (k < 1) throw std::invalid_argument("bisect_kmeans: k must be >= 1");

  std::size_t distinct = 0;
  {
    std::set<std::vector<double>> seen;
    for (std::size_t r = 0; r < m.n_rows; ++r)
      seen.insert(std::vector<double>(m.row(r), m.row(r) + m.n_cols));
    distinct = seen.size();
  }
  if (static_cast<std::size_t>(k) > distinct)
    throw std::invalid_argument("bisect_kmeans: k exceeds the number of distinct rows");

  struct Node {
    int creation;
    std::vector<std::size_t> rows;
    std::vector<double> center;
    double sse;
    bool divisible;
  };
  const auto make_node = [&](int creation, std::vector<std::size_t> rows) {
    Node n;
    n.creation = creation;
    n.center = mean_of(m, rows);
    n.sse = sse_of(m, rows, n.center);
    n.divisible = false;
    for (std::size_t i = 1; i < rows.size() && !n.divisible; ++i)
      n.divisible = !rows_equal(m, rows[0], rows[i]);
    n.rows = std::move(rows);
    return n;
  };

  std::vector<Node> active;
  std::vector<std::size_t> all(m.n_rows);
  for (std::size_t r = 0; r < m.n_rows; ++r) all[r] = r;
  active.push_back(make_node(0, std::move(all)));
  int next_creation = 1;

  ClusteringResult result;
  while (active.size() < static_cast<std::size_t>(k)) {
    std::size_t pick = active.size();
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (!active[i].divisible) continue;
      if (pick == active.size() || active[i].sse > active[pick].sse ||
          (active[i].sse == active[pick].sse &&
           active[i].creation < active[pick].creation))
        pick = i;
    }
    // k <= distinct rows guarantees a divisible cluster exists here.
    Node parent = std::move(active[pick]);
    active.erase(active.begin() + pick);

    const FeatureMatrix sub = submatrix(m, parent.rows);
    const TwoMeansResult split = two_means(sub, max_iter);
    std::vector<std::size_t> rows_a, rows_b;
    for (std::size_t i = 0; i < parent.rows.size(); ++i)
      (split.assignment[i] == 0 ? rows_a : rows_b).push_back(parent.rows[i]);

    const int id_a = next_creation++;
    const int id_b = next_creation++;
    result.split_trace.push_back({parent.creation, id_a, id_b});
    active.push_back(make_node(id_a, std::move(rows_a)));
    active.push_back(make_node(id_b, std::move(rows_b)));
  }

  std::sort(active.begin(), active.end(),
            [](const Node& a, const Node& b) { return a.creation < b.creation; });

  result.k = k;
  result.assignments.assign(m.n_rows, -1);
  result.total_sse = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t r : active[i].rows) result.assignments[r] = static_cast<int>(i);
    result.centers.push_back(active[i].center);
    result.cluster_sse.push_back(active[i].sse);
    result.total_sse += active[i].sse;
  }
  return result;
}

}  // namespace tapscope
