#pragma once

#include <span>
#include <string>
#include <vector>

#include "privwave/rng.hpp"
#include "privwave/wavecluster.hpp"

namespace privwave {

struct TrainingSample {
  double x = 0.0;
  double y = 0.0;
  int label = 0;
};

// Binary decision tree over (x, y) with axis-aligned threshold splits chosen
// by information gain ratio; midpoints between consecutive distinct feature
// values are the candidate thresholds. Values equal to a threshold follow
// the left (<=) branch. Leaves predict the majority class, breaking ties
// toward the smaller class id.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // 0 = x, 1 = y, -1 = leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = 0;
  };

  int predict(double x, double y) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;
  std::string to_json() const;

 private:
  friend DecisionTree train_tree(std::span<const TrainingSample>, int, int);
  std::vector<Node> nodes_;
};

DecisionTree train_tree(std::span<const TrainingSample> samples,
                        int max_depth = 12, int min_leaf = 1);

std::vector<int> predict_labels(const DecisionTree& tree, const PointSet& data);

// One sample per subband cell at the cell center; significant cells carry
// their cluster id, all others the noise class 0, so the tree learns to
// predict noise over empty regions.
std::vector<TrainingSample> make_training_set(const GridClustering& clustering,
                                              const Bounds& bounds);

// Seeded uniform split without replacement; |train| = round(fraction * N).
// Splits that leave either side empty are rejected.
std::pair<PointSet, PointSet> split_train_test(const PointSet& data,
                                               double fraction, SeededRng& rng);

}  // namespace privwave
