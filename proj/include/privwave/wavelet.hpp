#pragma once

#include <vector>

#include "privwave/grid.hpp"

namespace privwave {

// Level-1 average subband of a count matrix. Each value is the sum of one
// 2x2 quad divided by 2, so a quad holding a single point contributes 0.5
// and the smallest possible positive value is 0.5.
struct Subband {
  int rows = 0;  // g1 / 2
  int cols = 0;  // g2 / 2
  std::vector<double> values;            // row-major
  std::vector<double> positives_sorted;  // L: strictly positive values, ascending
  int zcount = 0;                        // |Z|: values <= 0

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

// Sensitivity facts for the transform, used when budgeting noise:
// one extra point changes exactly one subband value by 1/quad_divisor,
// and can change the non-positive count by at most one.
struct TransformProfile {
  double quad_divisor = 2.0;
  double zcount_sensitivity = 1.0;
  double quality_sensitivity = 1.0;
};

TransformProfile haar_profile();

// Both matrix extents must be even.
Subband haar_average_subband(const CountMatrix& m);

// Rebuilds the positive list / non-positive count for externally assembled
// value arrays (test fixtures, noisy subbands).
Subband make_subband(int rows, int cols, std::vector<double> values);

}  // namespace privwave
