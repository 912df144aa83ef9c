#include "privwave/wavecluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privwave {

int GridClustering::significant_cells() const {
  int n = 0;
  for (int l : labels) n += l != 0;
  return n;
}

DensityThreshold significant_threshold(const Subband& s, double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("significant_threshold: p must lie in [0, 1)");
  const auto& l = s.positives_sorted;
  if (l.empty())
    throw std::invalid_argument("significant_threshold: subband has no positive values");
  int m = static_cast<int>(l.size());
  int k = static_cast<int>(std::floor((1.0 - p) * m));
  k = std::max(k, 1);
  return DensityThreshold{k, l[m - k], p};
}

Mask significant_grids(const Subband& s, double d) {
  Mask mask;
  mask.rows = s.rows;
  mask.cols = s.cols;
  mask.cells.resize(s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i)
    mask.cells[i] = s.values[i] >= d ? 1 : 0;
  return mask;
}

GridClustering connected_components(const Mask& mask) {
  GridClustering out;
  out.rows = mask.rows;
  out.cols = mask.cols;
  out.labels.assign(mask.cells.size(), 0);

  std::vector<int> stack;
  for (std::size_t start = 0; start < mask.cells.size(); ++start) {
    if (!mask.cells[start] || out.labels[start] != 0) continue;
    int id = ++out.cluster_count;
    std::vector<int> members;
    stack.push_back(static_cast<int>(start));
    out.labels[start] = id;
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      members.push_back(idx);
      int i = idx / mask.cols;
      int j = idx % mask.cols;
      const int ni[4] = {i - 1, i + 1, i, i};
      const int nj[4] = {j, j, j - 1, j + 1};
      for (int t = 0; t < 4; ++t) {
        if (ni[t] < 0 || ni[t] >= mask.rows || nj[t] < 0 || nj[t] >= mask.cols) continue;
        int nidx = ni[t] * mask.cols + nj[t];
        if (mask.cells[nidx] && out.labels[nidx] == 0) {
          out.labels[nidx] = id;
          stack.push_back(nidx);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.clusters.push_back(std::move(members));
  }
  // Seeds are visited in scan order, so clusters are already canonical:
  // cluster i+1 has the i-th smallest leading index.
  return out;
}

std::vector<int> label_points(const PointSet& data, const GridSpec& g,
                              const GridClustering& clustering) {
  if (clustering.rows != g.g1 / 2 || clustering.cols != g.g2 / 2)
    throw std::invalid_argument("label_points: clustering does not match the grid");
  std::vector<int> labels(data.points.size(), 0);
  if (data.points.empty()) return labels;
  const Bounds& b = data.bounds;
  for (std::size_t n = 0; n < data.points.size(); ++n) {
    const Point& pt = data.points[n];
    int i = static_cast<int>(std::floor((pt.x - b.xmin) / b.width() * g.g1));
    int j = static_cast<int>(std::floor((pt.y - b.ymin) / b.height() * g.g2));
    i = std::clamp(i, 0, g.g1 - 1);
    j = std::clamp(j, 0, g.g2 - 1);
    labels[n] = clustering.label_at(i / 2, j / 2);
  }
  return labels;
}

WaveClusterResult run_wavecluster(const PointSet& data, const GridSpec& g, double p) {
  WaveClusterResult r;
  r.subband = haar_average_subband(quantize(data, g));
  r.threshold = significant_threshold(r.subband, p);
  r.clustering = connected_components(significant_grids(r.subband, r.threshold.d));
  r.point_labels = label_points(data, g, r.clustering);
  return r;
}

}  // namespace privwave
