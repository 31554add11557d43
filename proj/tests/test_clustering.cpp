#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "support.hpp"
#include "tapscope/clustering.hpp"
#include "tapscope/rng.hpp"

using namespace tapscope;
using doctest::Approx;
using tapsupport::matrix_of;

TEST_CASE("sse around an explicit center") {
  CHECK(sse(matrix_of({{1.0}, {1.0}}), {1.0}) == 0.0);
  CHECK(sse(matrix_of({{0.0}, {2.0}}), {1.0}) == Approx(2.0));
  CHECK(sse(matrix_of({{3.0, 4.0}}), {0.0, 0.0}) == Approx(25.0));
  CHECK_THROWS_AS(sse(matrix_of({{1.0, 2.0}}), {0.0}), std::invalid_argument);
}

TEST_CASE("two_means separates the textbook pairs") {
  const auto m = matrix_of({{0.0, 0.0}, {0.0, 0.1}, {10.0, 10.0}, {10.0, 10.1}});
  const auto r = two_means(m);
  CHECK(r.assignment[0] == r.assignment[1]);
  CHECK(r.assignment[2] == r.assignment[3]);
  CHECK(r.assignment[0] != r.assignment[2]);
  const int lo = r.assignment[0];
  CHECK(r.centers[lo][0] == Approx(0.0));
  CHECK(r.centers[lo][1] == Approx(0.05));
  CHECK(r.centers[1 - lo][0] == Approx(10.0));
  CHECK(r.centers[1 - lo][1] == Approx(10.05));
}

TEST_CASE("two_means on two points makes two singletons") {
  const auto r = two_means(matrix_of({{0.0}, {1.0}}));
  CHECK(r.assignment[0] != r.assignment[1]);
  const double total = sse(matrix_of({{0.0}}), r.centers[r.assignment[0]]) +
                       sse(matrix_of({{1.0}}), r.centers[r.assignment[1]]);
  CHECK(total == 0.0);
}

TEST_CASE("two_means rejects degenerate inputs") {
  CHECK_THROWS_AS(two_means(matrix_of({{1.0, 2.0}})), std::invalid_argument);
  CHECK_THROWS_AS(two_means(matrix_of({{1.0}, {1.0}, {1.0}})), std::invalid_argument);
}

TEST_CASE("two_means is bitwise deterministic") {
  RandomStream rng(3);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i)
    rows.push_back({rng.next_gaussian(0, 1), rng.next_gaussian(0, 1),
                    rng.next_gaussian(0, 1)});
  const auto m = matrix_of(rows);
  const auto a = two_means(m);
  const auto b = two_means(m);
  CHECK(a.assignment == b.assignment);
  CHECK(a.centers == b.centers);
}

TEST_CASE("two_means finds the optimal bipartition of separated blobs") {
  RandomStream rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 6; ++i)
      rows.push_back({rng.next_gaussian(0, 1), rng.next_gaussian(0, 1)});
    for (int i = 0; i < 6; ++i)
      rows.push_back({rng.next_gaussian(30, 1), rng.next_gaussian(-20, 1)});
    const auto m = matrix_of(rows);
    const auto r = two_means(m);
    double total = 0.0;
    for (std::size_t row = 0; row < m.n_rows; ++row) {
      const auto& c = r.centers[r.assignment[row]];
      for (std::size_t j = 0; j < m.n_cols; ++j) {
        const double d = m.at(row, j) - c[j];
        total += d * d;
      }
    }
    CHECK(total == Approx(tapsupport::best_two_partition_sse(m)).epsilon(1e-9));
    for (int i = 1; i < 6; ++i) CHECK(r.assignment[i] == r.assignment[0]);
    for (int i = 7; i < 12; ++i) CHECK(r.assignment[i] == r.assignment[6]);
  }
}

TEST_CASE("bisecting with k=1 is the global mean") {
  const auto m = matrix_of({{1.0, 0.0}, {3.0, 2.0}, {5.0, 4.0}});
  const auto r = bisect_kmeans(m, 1);
  CHECK(r.k == 1);
  CHECK(r.assignments == std::vector<int>{0, 0, 0});
  CHECK(r.centers[0][0] == Approx(3.0));
  CHECK(r.centers[0][1] == Approx(2.0));
  CHECK(r.total_sse == Approx(16.0));  // 8 in each column
  CHECK(r.split_trace.empty());
}

TEST_CASE("bisecting down to the distinct rows reaches zero SSE") {
  const auto m = matrix_of({{0.0}, {1.0}, {5.0}, {5.0}, {9.0}});
  const auto r = bisect_kmeans(m, 4);
  CHECK(r.total_sse == Approx(0.0));
  CHECK(r.assignments[2] == r.assignments[3]);
  std::set<int> ids(r.assignments.begin(), r.assignments.end());
  CHECK(ids.size() == 4);
}

TEST_CASE("bisecting rejects impossible k") {
  const auto m = matrix_of({{0.0}, {0.0}, {1.0}, {1.0}});
  CHECK_THROWS_AS(bisect_kmeans(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(bisect_kmeans(m, 3), std::invalid_argument);  // 2 distinct rows
  CHECK_NOTHROW(bisect_kmeans(m, 2));
  FeatureMatrix empty;
  CHECK_THROWS_AS(bisect_kmeans(empty, 1), std::invalid_argument);
}

TEST_CASE("split trace records a well-formed bisection history") {
  RandomStream rng(5);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 60; ++i)
    rows.push_back({rng.next_gaussian(0, 5), rng.next_gaussian(0, 5)});
  const auto m = matrix_of(rows);
  const int k = 6;
  const auto r = bisect_kmeans(m, k);
  REQUIRE(r.split_trace.size() == static_cast<std::size_t>(k - 1));
  CHECK(r.split_trace[0].parent == 0);
  std::set<int> splittable = {0};
  for (std::size_t i = 0; i < r.split_trace.size(); ++i) {
    const auto& s = r.split_trace[i];
    // ids are allocated in creation order, two per split
    CHECK(s.child_a == static_cast<int>(2 * i + 1));
    CHECK(s.child_b == static_cast<int>(2 * i + 2));
    CHECK(splittable.count(s.parent) == 1);  // parent existed and was live
    splittable.erase(s.parent);
    splittable.insert(s.child_a);
    splittable.insert(s.child_b);
  }
  CHECK(splittable.size() == static_cast<std::size_t>(k));
}

TEST_CASE("clusters are non-empty, centers are member means, sse adds up") {
  RandomStream rng(6);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 80; ++i)
    rows.push_back({rng.next_gaussian(0, 3), rng.next_gaussian(1, 2),
                    rng.next_gaussian(-1, 4)});
  const auto m = matrix_of(rows);
  for (int k : {1, 2, 3, 5, 8}) {
    const auto r = bisect_kmeans(m, k);
    REQUIRE(static_cast<int>(r.centers.size()) == k);
    std::vector<int> counts(k, 0);
    std::vector<std::vector<double>> sums(k, std::vector<double>(m.n_cols, 0.0));
    for (std::size_t row = 0; row < m.n_rows; ++row) {
      REQUIRE(r.assignments[row] >= 0);
      REQUIRE(r.assignments[row] < k);
      ++counts[r.assignments[row]];
      for (std::size_t c = 0; c < m.n_cols; ++c)
        sums[r.assignments[row]][c] += m.at(row, c);
    }
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      CHECK(counts[c] > 0);
      for (std::size_t j = 0; j < m.n_cols; ++j)
        CHECK(r.centers[c][j] == Approx(sums[c][j] / counts[c]).epsilon(1e-9));
      total += r.cluster_sse[c];
    }
    CHECK(r.total_sse == Approx(total).epsilon(1e-9));
    CHECK(r.total_sse ==
          Approx(tapsupport::sse_of_partition(m, r.assignments, k)).epsilon(1e-9));
  }
}

TEST_CASE("total SSE falls strictly with every added cluster on generic data") {
  RandomStream rng(7);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 50; ++i)
    rows.push_back({rng.next_gaussian(0, 2), rng.next_gaussian(0, 2)});
  const auto m = matrix_of(rows);
  double prev = bisect_kmeans(m, 1).total_sse;
  for (int k = 2; k <= 10; ++k) {
    const double cur = bisect_kmeans(m, k).total_sse;
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("row order does not change the discovered partition") {
  RandomStream rng(8);
  tapsupport::BlobInstance inst = tapsupport::make_blobs(3, 2, 15, 12.0, rng);
  const auto base = bisect_kmeans(inst.points, 3);

  // rotate the rows and re-cluster
  const std::size_t n = inst.points.n_rows, d = inst.points.n_cols;
  FeatureMatrix rot = inst.points;
  const std::size_t shift = 17;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c)
      rot.at(r, c) = inst.points.at((r + shift) % n, c);
  const auto moved = bisect_kmeans(rot, 3);

  std::vector<int> realigned(n);
  for (std::size_t r = 0; r < n; ++r) realigned[r] = moved.assignments[(n + r - shift) % n];
  CHECK(tapsupport::same_partition(base.assignments, realigned));
  CHECK(base.total_sse == Approx(moved.total_sse).epsilon(1e-12));
}

TEST_CASE("well-separated blobs are recovered exactly") {
  RandomStream rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 2 + trial % 3;
    const int dims = 2 + trial;
    const auto inst = tapsupport::make_blobs(k, dims, 20, 15.0, rng);
    const auto r = bisect_kmeans(inst.points, k);
    CHECK(tapsupport::same_partition(r.assignments, inst.truth));
  }
}

TEST_CASE("bisecting is bitwise deterministic") {
  RandomStream rng(10);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 70; ++i)
    rows.push_back({rng.next_gaussian(0, 1), rng.next_gaussian(0, 1)});
  const auto m = matrix_of(rows);
  const auto a = bisect_kmeans(m, 5);
  const auto b = bisect_kmeans(m, 5);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centers == b.centers);
  CHECK(a.total_sse == b.total_sse);
}

TEST_CASE("every row sits with its nearest center at convergence") {
  RandomStream rng(11);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 90; ++i)
    rows.push_back({rng.next_gaussian(0, 2), rng.next_gaussian(0, 2),
                    rng.next_gaussian(0, 2)});
  const auto m = matrix_of(rows);
  const auto r = bisect_kmeans(m, 2);  // single two_means pass, fully converged
  for (std::size_t row = 0; row < m.n_rows; ++row) {
    std::vector<double> dist(2, 0.0);
    for (int c = 0; c < 2; ++c)
      for (std::size_t j = 0; j < m.n_cols; ++j) {
        const double t = m.at(row, j) - r.centers[c][j];
        dist[c] += t * t;
      }
    const int mine = r.assignments[row];
    CHECK(dist[mine] <= dist[1 - mine] * (1.0 + 1e-12) + 1e-12);
  }
}
