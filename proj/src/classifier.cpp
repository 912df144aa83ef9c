#include "privwave/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "privwave/grid.hpp"

namespace privwave {

namespace {

double entropy(const std::map<int, int>& counts, int total) {
  double h = 0.0;
  for (const auto& [cls, n] : counts) {
    if (n == 0) continue;
    double q = static_cast<double>(n) / total;
    h -= q * std::log2(q);
  }
  return h;
}

int majority_class(const std::map<int, int>& counts) {
  int best_cls = 0, best_n = -1;
  for (const auto& [cls, n] : counts) {  // map order breaks ties toward smaller id
    if (n > best_n) {
      best_n = n;
      best_cls = cls;
    }
  }
  return best_cls;
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain_ratio = 0.0;
};

double feature_of(const TrainingSample& s, int f) { return f == 0 ? s.x : s.y; }

SplitChoice best_split(const std::vector<TrainingSample>& rows, int min_leaf) {
  const int n = static_cast<int>(rows.size());
  std::map<int, int> parent_counts;
  for (const auto& r : rows) ++parent_counts[r.label];
  const double parent_h = entropy(parent_counts, n);

  SplitChoice best;
  std::vector<int> order(n);
  for (int f = 0; f < 2; ++f) {
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return feature_of(rows[a], f) < feature_of(rows[b], f);
    });

    std::map<int, int> left_counts;
    int left_n = 0;
    for (int pos = 0; pos + 1 < n; ++pos) {
      ++left_counts[rows[order[pos]].label];
      ++left_n;
      double v = feature_of(rows[order[pos]], f);
      double next = feature_of(rows[order[pos + 1]], f);
      if (v == next) continue;  // threshold only between distinct values
      if (left_n < min_leaf || n - left_n < min_leaf) continue;

      std::map<int, int> right_counts = parent_counts;
      for (const auto& [cls, cnt] : left_counts) right_counts[cls] -= cnt;
      double wl = static_cast<double>(left_n) / n;
      double wr = 1.0 - wl;
      double gain = parent_h - wl * entropy(left_counts, left_n) -
                    wr * entropy(right_counts, n - left_n);
      if (gain <= 1e-12) continue;
      double split_info = -wl * std::log2(wl) - wr * std::log2(wr);
      double ratio = gain / split_info;
      double threshold = 0.5 * (v + next);
      if (!best.found || ratio > best.gain_ratio + 1e-12) {
        best = SplitChoice{true, f, threshold, ratio};
      }
    }
  }
  return best;
}

}  // namespace

DecisionTree train_tree(std::span<const TrainingSample> samples, int max_depth,
                        int min_leaf) {
  if (samples.empty()) throw std::invalid_argument("train_tree: no samples");
  if (max_depth < 0 || min_leaf < 1)
    throw std::invalid_argument("train_tree: bad stopping parameters");

  DecisionTree tree;
  struct Job {
    std::vector<TrainingSample> rows;
    int node;
    int depth;
  };
  std::vector<Job> stack;
  tree.nodes_.emplace_back();
  stack.push_back(Job{{samples.begin(), samples.end()}, 0, 0});

  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();

    std::map<int, int> counts;
    for (const auto& r : job.rows) ++counts[r.label];

    auto make_leaf = [&]() {
      tree.nodes_[job.node].feature = -1;
      tree.nodes_[job.node].leaf_class = majority_class(counts);
    };

    if (counts.size() == 1 || job.depth >= max_depth) {
      make_leaf();
      continue;
    }
    SplitChoice split = best_split(job.rows, min_leaf);
    if (!split.found) {
      make_leaf();
      continue;
    }

    std::vector<TrainingSample> left, right;
    for (const auto& r : job.rows) {
      (feature_of(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }

    int li = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    int ri = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    tree.nodes_[job.node].feature = split.feature;
    tree.nodes_[job.node].threshold = split.threshold;
    tree.nodes_[job.node].left = li;
    tree.nodes_[job.node].right = ri;
    stack.push_back(Job{std::move(left), li, job.depth + 1});
    stack.push_back(Job{std::move(right), ri, job.depth + 1});
  }
  return tree;
}

int DecisionTree::predict(double x, double y) const {
  if (nodes_.empty()) throw std::logic_error("predict: tree not trained");
  int idx = 0;
  while (nodes_[idx].feature != -1) {
    double v = nodes_[idx].feature == 0 ? x : y;
    idx = v <= nodes_[idx].threshold ? nodes_[idx].left : nodes_[idx].right;
  }
  return nodes_[idx].leaf_class;
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  // Depth of the leaf furthest from the root.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int d = 0;
  while (!stack.empty()) {
    auto [idx, depth] = stack.back();
    stack.pop_back();
    if (nodes_[idx].feature == -1) {
      d = std::max(d, depth);
    } else {
      stack.push_back({nodes_[idx].left, depth + 1});
      stack.push_back({nodes_[idx].right, depth + 1});
    }
  }
  return d;
}

std::string DecisionTree::to_json() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (i) out << ",";
    if (n.feature == -1) {
      out << "{\"class\":" << n.leaf_class << "}";
    } else {
      out << "{\"feature\":\"" << (n.feature == 0 ? "x" : "y")
          << "\",\"threshold\":" << n.threshold << ",\"left\":" << n.left
          << ",\"right\":" << n.right << "}";
    }
  }
  out << "]";
  return out.str();
}

std::vector<int> predict_labels(const DecisionTree& tree, const PointSet& data) {
  std::vector<int> out(data.points.size());
  for (std::size_t i = 0; i < data.points.size(); ++i)
    out[i] = tree.predict(data.points[i].x, data.points[i].y);
  return out;
}

std::vector<TrainingSample> make_training_set(const GridClustering& clustering,
                                              const Bounds& bounds) {
  if (clustering.rows < 1 || clustering.cols < 1)
    throw std::invalid_argument("make_training_set: empty clustering lattice");
  std::vector<TrainingSample> out;
  out.reserve(clustering.labels.size());
  for (int i = 0; i < clustering.rows; ++i) {
    for (int j = 0; j < clustering.cols; ++j) {
      Point c = cell_center(clustering.rows, clustering.cols, bounds, i, j);
      out.push_back(TrainingSample{c.x, c.y, clustering.label_at(i, j)});
    }
  }
  return out;
}

std::pair<PointSet, PointSet> split_train_test(const PointSet& data,
                                               double fraction, SeededRng& rng) {
  const std::size_t n = data.points.size();
  if (n < 2) throw std::invalid_argument("split_train_test: need at least two points");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split_train_test: fraction must lie strictly between 0 and 1");
  std::size_t train_n = static_cast<std::size_t>(std::llround(fraction * n));
  if (train_n == 0 || train_n == n)
    throw std::invalid_argument("split_train_test: split leaves one side empty");

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = rng.below(i + 1);
    std::swap(idx[i], idx[j]);
  }
  std::vector<Point> train, test;
  train.reserve(train_n);
  test.reserve(n - train_n);
  for (std::size_t i = 0; i < n; ++i)
    (i < train_n ? train : test).push_back(data.points[idx[i]]);
  // Both halves keep the parent frame so grids line up between them.
  return {PointSet::with_bounds(std::move(train), data.bounds),
          PointSet::with_bounds(std::move(test), data.bounds)};
}

}  // namespace privwave
