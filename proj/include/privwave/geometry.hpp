#pragma once

#include <stdexcept>
#include <vector>

namespace privwave {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned frame the grid is laid over. Width/height may be zero only
// for an empty point set.
struct Bounds {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(const Point& pt) const {
    return pt.x >= xmin && pt.x <= xmax && pt.y >= ymin && pt.y <= ymax;
  }
};

// A 2-d dataset together with the frame used for quantization. Every point
// lies inside the bounds; the frame has positive extent whenever points exist.
struct PointSet {
  std::vector<Point> points;
  Bounds bounds;

  static PointSet from_points(std::vector<Point> pts);
  static PointSet with_bounds(std::vector<Point> pts, Bounds frame);

  std::size_t size() const { return points.size(); }
};

}  // namespace privwave
