#pragma once

#include <vector>

#include "privwave/geometry.hpp"

namespace privwave {

// Grid resolution. Both extents must be even (level-1 Haar pairs adjacent
// rows/columns into 2x2 quads) and at least 2.
struct GridSpec {
  int g1 = 0;  // cells along x
  int g2 = 0;  // cells along y

  GridSpec() = default;
  GridSpec(int gx, int gy);
  explicit GridSpec(int g) : GridSpec(g, g) {}
};

// Per-cell totals over a grid; real-valued so the same container carries
// both exact counts and noisy counts (which may be negative).
struct CountMatrix {
  int rows = 0;  // x cells
  int cols = 0;  // y cells
  std::vector<double> cells;  // row-major: (i, j) -> i * cols + j

  CountMatrix() = default;
  CountMatrix(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return cells[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return cells[static_cast<std::size_t>(i) * cols + j]; }
  double total() const;
};

// Histogram of the point set over the g1 x g2 lattice spanning its bounds.
// Points on the closing edge land in the last cell. Every point must lie
// inside the bounds; degenerate bounds with points present are an error.
CountMatrix quantize(const PointSet& data, const GridSpec& g);

// Center coordinates of cell (i, j) over an arbitrary lattice resolution.
Point cell_center(int n1, int n2, const Bounds& bounds, int i, int j);
Point cell_center(const GridSpec& g, const Bounds& bounds, int i, int j);

}  // namespace privwave
