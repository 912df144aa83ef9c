#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "privwave/classifier.hpp"
#include "privwave/grid.hpp"
#include "privwave/rng.hpp"

using namespace privwave;

namespace {

struct OracleSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double ratio = 0.0;
};

// Independent gain-ratio scan mirroring the documented selection rule:
// candidate thresholds are midpoints between consecutive distinct values,
// first candidate wins ties, improvements must exceed 1e-12.
OracleSplit oracle_best_split(const std::vector<TrainingSample>& rows) {
  const int n = static_cast<int>(rows.size());
  std::map<int, int> parent;
  for (const auto& r : rows) ++parent[r.label];
  auto entropy = [](const std::map<int, int>& counts, int total) {
    double h = 0.0;
    for (const auto& [cls, c] : counts) {
      if (c == 0) continue;
      double q = static_cast<double>(c) / total;
      h -= q * std::log2(q);
    }
    return h;
  };
  const double parent_h = entropy(parent, n);

  OracleSplit best;
  for (int f = 0; f < 2; ++f) {
    std::vector<std::pair<double, int>> vals(n);
    for (int i = 0; i < n; ++i)
      vals[i] = {f == 0 ? rows[i].x : rows[i].y, rows[i].label};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::map<int, int> left;
    for (int pos = 0; pos + 1 < n; ++pos) {
      ++left[vals[pos].second];
      if (vals[pos].first == vals[pos + 1].first) continue;
      int ln = pos + 1;
      std::map<int, int> right = parent;
      for (const auto& [cls, c] : left) right[cls] -= c;
      double wl = static_cast<double>(ln) / n;
      double wr = 1.0 - wl;
      double gain =
          parent_h - wl * entropy(left, ln) - wr * entropy(right, n - ln);
      if (gain <= 1e-12) continue;
      double split_info = -wl * std::log2(wl) - wr * std::log2(wr);
      double ratio = gain / split_info;
      if (!best.found || ratio > best.ratio + 1e-12) {
        best = OracleSplit{true, f, 0.5 * (vals[pos].first + vals[pos + 1].first), ratio};
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("four quadrant classes need exactly two levels") {
  std::vector<TrainingSample> samples;
  for (double dx : {-0.2, 0.0, 0.3}) {
    for (double dy : {-0.1, 0.25}) {
      samples.push_back({-1.0 + dx, -1.0 + dy, 0});
      samples.push_back({1.0 + dx, -1.0 + dy, 1});
      samples.push_back({-1.0 + dx, 1.0 + dy, 2});
      samples.push_back({1.0 + dx, 1.0 + dy, 3});
    }
  }
  DecisionTree tree = train_tree(samples);
  CHECK(tree.depth() == 2);
  for (const auto& s : samples) CHECK(tree.predict(s.x, s.y) == s.label);
}

TEST_CASE("a linearly separable set trains to a single split") {
  SeededRng rng(81);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 120; ++i) {
    double x = rng.uniform(0.0, 1.0);
    samples.push_back({x, rng.uniform(0.0, 1.0), x < 0.37 ? 0 : 1});
  }
  DecisionTree tree = train_tree(samples);
  CHECK(tree.depth() == 1);
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  for (const auto& s : samples) CHECK(tree.predict(s.x, s.y) == s.label);
}

TEST_CASE("a value equal to the threshold goes left") {
  std::vector<TrainingSample> samples{{0.0, 0.0, 4}, {2.0, 0.0, 9}};
  DecisionTree tree = train_tree(samples);
  REQUIRE(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(1.0));
  CHECK(tree.predict(1.0, 0.0) == 4);
  CHECK(tree.predict(1.0 + 1e-9, 0.0) == 9);
}

TEST_CASE("root split agrees with an independent gain-ratio scan") {
  SeededRng rng(82);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng.below(11));
    std::vector<TrainingSample> samples(n);
    for (auto& s : samples) {
      // Small integer lattice provokes ties in both values and ratios.
      s.x = static_cast<double>(rng.below(4));
      s.y = static_cast<double>(rng.below(4));
      s.label = static_cast<int>(rng.below(3));
    }
    OracleSplit expected = oracle_best_split(samples);
    DecisionTree tree = train_tree(samples, /*max_depth=*/1);
    const auto& root = tree.nodes()[0];
    if (!expected.found) {
      CHECK(root.feature == -1);
    } else {
      REQUIRE(root.feature == expected.feature);
      CHECK(root.threshold == doctest::Approx(expected.threshold).epsilon(1e-9));
    }
  }
}

TEST_CASE("serialized tree round-trips through json") {
  std::vector<TrainingSample> samples{{0.0, 0.5, 1}, {1.0, 0.5, 6}};
  DecisionTree tree = train_tree(samples);
  auto parsed = nlohmann::json::parse(tree.to_json());
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0]["feature"] == "x");
  CHECK(parsed[0]["threshold"].get<double>() == doctest::Approx(0.5));
  int li = parsed[0]["left"].get<int>();
  int ri = parsed[0]["right"].get<int>();
  CHECK(parsed[li]["class"].get<int>() == 1);
  CHECK(parsed[ri]["class"].get<int>() == 6);

  std::vector<TrainingSample> one{{0.3, 0.4, 2}};
  CHECK(train_tree(one).to_json() == "[{\"class\":2}]");
}

TEST_CASE("stopping rules cap growth and ties resolve to the smaller class") {
  std::vector<TrainingSample> samples{
      {0.0, 0.0, 5}, {1.0, 0.0, 2}, {2.0, 0.0, 5}, {3.0, 0.0, 2}};

  // Depth zero: a single majority leaf; counts tie 2-2, smaller id wins.
  DecisionTree stump = train_tree(samples, /*max_depth=*/0);
  REQUIRE(stump.nodes().size() == 1);
  CHECK(stump.nodes()[0].leaf_class == 2);

  // min_leaf larger than any useful partition forbids every split.
  DecisionTree blocked = train_tree(samples, 12, /*min_leaf=*/3);
  CHECK(blocked.depth() == 0);

  // Identical features leave nothing to split on.
  std::vector<TrainingSample> stuck{{1.0, 1.0, 7}, {1.0, 1.0, 3}, {1.0, 1.0, 7}};
  DecisionTree leaf = train_tree(stuck);
  REQUIRE(leaf.nodes().size() == 1);
  CHECK(leaf.nodes()[0].leaf_class == 7);

  CHECK_THROWS_AS(train_tree({}), std::invalid_argument);
  CHECK_THROWS_AS(train_tree(samples, -1), std::invalid_argument);
  CHECK_THROWS_AS(train_tree(samples, 12, 0), std::invalid_argument);
}

TEST_CASE("training set samples every cell center with its label") {
  Mask m;
  m.rows = 2;
  m.cols = 4;
  m.cells = {1, 1, 0, 0,
             0, 0, 0, 1};
  GridClustering clustering = connected_components(m);
  Bounds frame{0.0, 2.0, 0.0, 1.0};
  auto samples = make_training_set(clustering, frame);
  REQUIRE(samples.size() == 8);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto& s = samples[static_cast<std::size_t>(i) * 4 + j];
      CHECK(s.x == doctest::Approx((i + 0.5) * 1.0));
      CHECK(s.y == doctest::Approx((j + 0.5) * 0.25));
      CHECK(s.label == clustering.label_at(i, j));
    }
  }
  CHECK(samples[0].label == 1);
  CHECK(samples[7].label == 2);
  CHECK(samples[2].label == 0);

  CHECK_THROWS_AS(make_training_set(GridClustering{}, frame), std::invalid_argument);
}

TEST_CASE("train/test split is a seeded partition of the input") {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({i * 0.1, i * 0.05});
  PointSet data = PointSet::with_bounds(std::move(pts), Bounds{0, 1, 0, 1});

  SeededRng rng(83);
  auto [train, test] = split_train_test(data, 0.3, rng);
  CHECK(train.size() == 3);
  CHECK(test.size() == 7);
  CHECK(train.bounds.xmax == data.bounds.xmax);
  CHECK(test.bounds.ymax == data.bounds.ymax);

  // The two halves partition the original points exactly.
  std::multiset<double> seen, expected;
  for (const auto& p : data.points) expected.insert(p.x);
  for (const auto& p : train.points) seen.insert(p.x);
  for (const auto& p : test.points) seen.insert(p.x);
  CHECK(seen == expected);

  // Same seed, same shuffle.
  SeededRng rng2(83);
  auto [train2, test2] = split_train_test(data, 0.3, rng2);
  REQUIRE(train2.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i)
    CHECK(train.points[i].x == train2.points[i].x);

  SeededRng rng3(84);
  CHECK_THROWS_AS(split_train_test(data, 1.0, rng3), std::invalid_argument);
  CHECK_THROWS_AS(split_train_test(data, 0.04, rng3), std::invalid_argument);
  PointSet tiny = PointSet::with_bounds({Point{0.5, 0.5}}, Bounds{0, 1, 0, 1});
  CHECK_THROWS_AS(split_train_test(tiny, 0.5, rng3), std::invalid_argument);
}
