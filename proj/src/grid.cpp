#include "privwave/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace privwave {

PointSet PointSet::from_points(std::vector<Point> pts) {
  Bounds b;
  if (!pts.empty()) {
    b = Bounds{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
    for (const Point& pt : pts) {
      b.xmin = std::min(b.xmin, pt.x);
      b.xmax = std::max(b.xmax, pt.x);
      b.ymin = std::min(b.ymin, pt.y);
      b.ymax = std::max(b.ymax, pt.y);
    }
  }
  return PointSet{std::move(pts), b};
}

PointSet PointSet::with_bounds(std::vector<Point> pts, Bounds frame) {
  if (frame.width() < 0 || frame.height() < 0)
    throw std::invalid_argument("bounds: inverted frame");
  for (const Point& pt : pts) {
    if (!frame.contains(pt))
      throw std::invalid_argument("bounds: point outside the stated frame");
  }
  return PointSet{std::move(pts), frame};
}

GridSpec::GridSpec(int gx, int gy) : g1(gx), g2(gy) {
  if (g1 < 2 || g2 < 2)
    throw std::invalid_argument("grid: extents must be at least 2");
  if (g1 % 2 != 0 || g2 % 2 != 0)
    throw std::invalid_argument(
        "grid: extents must be even so level-1 Haar can pair cells into 2x2 quads");
}

double CountMatrix::total() const {
  return std::accumulate(cells.begin(), cells.end(), 0.0);
}

namespace {

int bin_index(double v, double lo, double span, int n) {
  int i = static_cast<int>(std::floor((v - lo) / span * n));
  if (i < 0) i = 0;
  if (i >= n) i = n - 1;  // closing edge belongs to the last cell
  return i;
}

}  // namespace

CountMatrix quantize(const PointSet& data, const GridSpec& g) {
  CountMatrix m(g.g1, g.g2);
  if (data.points.empty()) return m;
  const Bounds& b = data.bounds;
  if (b.width() <= 0 || b.height() <= 0)
    throw std::invalid_argument("quantize: degenerate bounds with points present");
  for (const Point& pt : data.points) {
    if (!b.contains(pt))
      throw std::invalid_argument("quantize: point outside bounds");
    m.at(bin_index(pt.x, b.xmin, b.width(), g.g1),
         bin_index(pt.y, b.ymin, b.height(), g.g2)) += 1.0;
  }
  return m;
}

Point cell_center(int n1, int n2, const Bounds& bounds, int i, int j) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("cell_center: empty lattice");
  if (i < 0 || i >= n1 || j < 0 || j >= n2)
    throw std::invalid_argument("cell_center: index (" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside lattice");
  double wx = bounds.width() / n1;
  double wy = bounds.height() / n2;
  return Point{bounds.xmin + (i + 0.5) * wx, bounds.ymin + (j + 0.5) * wy};
}

Point cell_center(const GridSpec& g, const Bounds& bounds, int i, int j) {
  return cell_center(g.g1, g.g2, bounds, i, j);
}

}  // namespace privwave
