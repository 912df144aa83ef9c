#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "privwave/metrics.hpp"
#include "privwave/rng.hpp"

using namespace privwave;

namespace {

// Exhaustive assignment minimum for small matrices.
double brute_min_cost(const std::vector<std::vector<double>>& cost) {
  int nr = static_cast<int>(cost.size());
  int nc = static_cast<int>(cost[0].size());
  bool transpose = nr > nc;
  int small = transpose ? nc : nr, large = transpose ? nr : nc;
  std::vector<int> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < small; ++i)
      total += transpose ? cost[perm[i]][i] : cost[i][perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

GridClustering make_clustering(int rows, int cols, std::vector<std::vector<int>> clusters) {
  GridClustering c;
  c.rows = rows;
  c.cols = cols;
  c.labels.assign(static_cast<std::size_t>(rows) * cols, 0);
  c.cluster_count = static_cast<int>(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (int flat : clusters[i]) c.labels[flat] = static_cast<int>(i) + 1;
  c.clusters = std::move(clusters);
  return c;
}

}  // namespace

TEST_CASE("hungarian matches exhaustive search on random matrices") {
  SeededRng rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    int nr = 1 + static_cast<int>(rng.below(6));
    int nc = 1 + static_cast<int>(rng.below(6));
    std::vector<std::vector<double>> cost(nr, std::vector<double>(nc));
    for (auto& row : cost)
      for (double& v : row) v = rng.uniform(-5.0, 10.0);

    Assignment asg = hungarian_min(cost);
    REQUIRE(asg.pairs.size() == static_cast<std::size_t>(std::min(nr, nc)));

    std::set<int> rows_used, cols_used;
    double recomputed = 0.0;
    for (const auto& [i, j] : asg.pairs) {
      CHECK(rows_used.insert(i).second);
      CHECK(cols_used.insert(j).second);
      recomputed += cost[i][j];
    }
    CHECK(asg.total_cost == doctest::Approx(recomputed));
    CHECK(asg.total_cost == doctest::Approx(brute_min_cost(cost)).epsilon(1e-9));
  }
}

TEST_CASE("hungarian rejects ragged input and handles empty input") {
  CHECK_THROWS_AS(hungarian_min({{1.0, 2.0}, {3.0}}), std::invalid_argument);
  CHECK(hungarian_min({}).pairs.empty());
}

TEST_CASE("cluster distance is the larger one-sided difference") {
  CHECK(cluster_distance({1, 2, 3, 5}, {2, 3, 7}) == 2);
  CHECK(cluster_distance({2, 3, 7}, {1, 2, 3, 5}) == 2);
  CHECK(cluster_distance({4, 9}, {4, 9}) == 0);
  CHECK(cluster_distance({}, {0, 1, 2}) == 3);
}

TEST_CASE("dsgc is zero on identical clusterings and counts leftovers whole") {
  GridClustering truth = make_clustering(1, 6, {{0, 1, 2}, {4, 5}});
  CHECK(dsgc(truth, truth) == doctest::Approx(0.0));

  // Second true cluster has no private partner: its full size lands on top.
  GridClustering half = make_clustering(1, 6, {{0, 1, 2}});
  CHECK(dsgc(truth, half) == doctest::Approx(2.0 / 5.0));
  // Swapped roles renormalize by the other side's significant cells.
  CHECK(dsgc(half, truth) == doctest::Approx(2.0 / 3.0));

  GridClustering eroded = make_clustering(1, 6, {{1, 2}, {4, 5}});
  CHECK(dsgc(truth, eroded) == doctest::Approx(1.0 / 5.0));

  GridClustering empty;
  CHECK_THROWS_AS(dsgc(empty, truth), std::invalid_argument);
}

TEST_CASE("ocm ignores label names and counts uncovered samples") {
  std::vector<int> a{0, 0, 1, 1, 2, 2};
  std::vector<int> renamed{5, 5, 7, 7, 0, 0};
  CHECK(ocm(a, renamed) == doctest::Approx(0.0));

  // One sample defects from the first class into the second.
  std::vector<int> t{0, 0, 0, 1, 1, 1};
  std::vector<int> p{0, 0, 1, 1, 1, 1};
  CHECK(ocm(t, p) == doctest::Approx(1.0 / 6.0));
  CHECK(ocm(p, t) == doctest::Approx(1.0 / 6.0));

  CHECK_THROWS_AS(ocm(std::vector<int>{1}, std::vector<int>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("tce equals the direct pairwise disagreement rate") {
  SeededRng rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng.below(199));
    std::vector<int> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<int>(rng.below(5));
      b[i] = static_cast<int>(rng.below(4));
    }
    long long disagree = 0, pairs = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        ++pairs;
        disagree += (a[i] == a[j]) != (b[i] == b[j]);
      }
    }
    CHECK(tce(a, b) ==
          doctest::Approx(static_cast<double>(disagree) / pairs).epsilon(1e-12));
  }
}

TEST_CASE("tce is zero up to renaming and one for opposite pairings") {
  std::vector<int> a{3, 3, 8, 8};
  std::vector<int> same{1, 1, 0, 0};
  CHECK(tce(a, same) == doctest::Approx(0.0));
  // Four of the six pairs change sides under the crossed labeling.
  std::vector<int> crossed{0, 1, 0, 1};
  CHECK(tce(a, crossed) == doctest::Approx(2.0 / 3.0));
  // A lone together-pair split apart disagrees completely.
  CHECK(tce(std::vector<int>{0, 0}, std::vector<int>{0, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tce(std::vector<int>{1}, std::vector<int>{1}),
                  std::invalid_argument);
}

TEST_CASE("fmeasure is one on identical clusterings and penalizes splits") {
  GridClustering truth = make_clustering(1, 4, {{0, 1, 2, 3}});
  CHECK(fmeasure(truth, truth) == doctest::Approx(1.0));

  // Halving the cluster: precision 1, recall 1/2, F1 = 2/3 for both halves.
  GridClustering split = make_clustering(1, 4, {{0, 1}, {2, 3}});
  CHECK(fmeasure(truth, split) == doctest::Approx(2.0 / 3.0));

  // Size weighting: a 6-cell cluster found exactly plus a lost 2-cell one.
  GridClustering two = make_clustering(1, 10, {{0, 1, 2, 3, 4, 5}, {8, 9}});
  GridClustering only_big = make_clustering(1, 10, {{0, 1, 2, 3, 4, 5}});
  CHECK(fmeasure(two, only_big) == doctest::Approx(6.0 / 8.0));

  GridClustering empty;
  CHECK_THROWS_AS(fmeasure(empty, truth), std::invalid_argument);
}
