#pragma once

#include <span>
#include <vector>

#include "privwave/wavecluster.hpp"

namespace privwave {

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (row, col) of matched real entries
  double total_cost = 0.0;
};

// Minimum-cost assignment of min(rows, cols) pairs; rectangular inputs are
// padded internally. O(n^3) shortest augmenting paths with potentials.
Assignment hungarian_min(const std::vector<std::vector<double>>& cost);

// Dissimilarity of two grid-cell sets: max(|A \ B|, |B \ A|). Inputs are
// sorted flat-index lists as stored in GridClustering::clusters.
int cluster_distance(const std::vector<int>& a, const std::vector<int>& b);

// Clustering dissimilarity: optimally pair true and private clusters under
// cluster_distance, add the sizes of unpaired clusters on either side, and
// normalize by the number of significant grids in the true clustering.
// 0 means the clusterings are identical.
double dsgc(const GridClustering& truth, const GridClustering& priv);

// Fraction of samples left uncovered by the best one-to-one matching of
// class labels (noise participates as an ordinary class). 0 when the
// labelings agree up to renaming.
double ocm(std::span<const int> truth_labels, std::span<const int> priv_labels);

// Pairwise disagreement rate: the share of sample pairs placed together by
// exactly one of the two labelings. Computed in closed form from the
// contingency table.
double tce(std::span<const int> truth_labels, std::span<const int> priv_labels);

// Size-weighted best-match F1 of true clusters against private clusters,
// over significant grid cells.
double fmeasure(const GridClustering& truth, const GridClustering& priv);

}  // namespace privwave
