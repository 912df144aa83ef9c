#pragma once

#include <cstdint>
#include <vector>

#include "privwave/wavelet.hpp"

namespace privwave {

// Density cut for a subband: keep the top k of the positive values, where
// k = floor((1 - p) * |L|) clamped to at least 1, and d is the k-th largest
// positive value. Cells tied with d are kept.
struct DensityThreshold {
  int k = 0;
  double d = 0.0;
  double p = 0.0;
};

struct Mask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;  // row-major, 1 = significant

  bool at(int i, int j) const { return cells[static_cast<std::size_t>(i) * cols + j] != 0; }
};

// Labeling of subband cells into 4-connected components of significant cells.
// Label 0 is noise; clusters are numbered 1..cluster_count in scan order of
// their smallest row-major index.
struct GridClustering {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;                 // row-major, 0 = noise
  int cluster_count = 0;
  std::vector<std::vector<int>> clusters;  // sorted flat indices per cluster

  int label_at(int i, int j) const { return labels[static_cast<std::size_t>(i) * cols + j]; }
  int significant_cells() const;
};

DensityThreshold significant_threshold(const Subband& s, double p);

Mask significant_grids(const Subband& s, double d);

GridClustering connected_components(const Mask& mask);

struct WaveClusterResult {
  Subband subband;
  DensityThreshold threshold;
  GridClustering clustering;
  std::vector<int> point_labels;  // per input point, 0 = noise
};

// Full non-private pipeline: quantize, level-1 Haar average subband,
// significance cut, component labeling; points inherit the label of the
// subband cell covering them.
WaveClusterResult run_wavecluster(const PointSet& data, const GridSpec& g, double p);

// Label of each point under an existing clustering of the subband lattice.
std::vector<int> label_points(const PointSet& data, const GridSpec& g,
                              const GridClustering& clustering);

}  // namespace privwave
