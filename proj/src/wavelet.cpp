#include "privwave/wavelet.hpp"

#include <algorithm>
#include <stdexcept>

namespace privwave {

TransformProfile haar_profile() { return TransformProfile{}; }

Subband make_subband(int rows, int cols, std::vector<double> values) {
  if (rows < 1 || cols < 1 ||
      values.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("subband: value array does not match dimensions");
  Subband s;
  s.rows = rows;
  s.cols = cols;
  s.values = std::move(values);
  for (double v : s.values) {
    if (v > 0.0)
      s.positives_sorted.push_back(v);
    else
      ++s.zcount;
  }
  std::sort(s.positives_sorted.begin(), s.positives_sorted.end());
  return s;
}

Subband haar_average_subband(const CountMatrix& m) {
  if (m.rows < 2 || m.cols < 2 || m.rows % 2 != 0 || m.cols % 2 != 0)
    throw std::invalid_argument(
        "haar: matrix extents must be even to pair cells into 2x2 quads");
  int rows = m.rows / 2;
  int cols = m.cols / 2;
  std::vector<double> values(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double quad = m.at(2 * i, 2 * j) + m.at(2 * i, 2 * j + 1) +
                    m.at(2 * i + 1, 2 * j) + m.at(2 * i + 1, 2 * j + 1);
      values[static_cast<std::size_t>(i) * cols + j] = quad / 2.0;
    }
  }
  return make_subband(rows, cols, std::move(values));
}

}  // namespace privwave
