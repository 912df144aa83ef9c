#include "privwave/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace privwave {

namespace {

constexpr Bounds kUnitFrame{0.0, 1.0, 0.0, 1.0};

double gauss(SeededRng& rng) {
  // Box-Muller; both uniforms are strictly inside (0,1).
  double u = rng.uniform01();
  double v = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Point truncated_blob_sample(SeededRng& rng, Point center, double sigma,
                            double truncate) {
  for (;;) {
    double dx = gauss(rng) * sigma;
    double dy = gauss(rng) * sigma;
    if (dx * dx + dy * dy > truncate * truncate * sigma * sigma) continue;
    Point pt{center.x + dx, center.y + dy};
    if (kUnitFrame.contains(pt)) return pt;
  }
}

}  // namespace

PointSet gen_gaussians(const GaussiansSpec& spec) {
  if (spec.components < 1 || spec.n_points < spec.components)
    throw std::invalid_argument("gen_gaussians: need at least one point per component");
  if (!(spec.sigma > 0.0) || !(spec.truncate > 0.0))
    throw std::invalid_argument("gen_gaussians: sigma and truncate must be positive");
  SeededRng rng(spec.seed);

  int side = static_cast<int>(std::ceil(std::sqrt(spec.components)));
  double spacing = 0.8 / side;
  std::vector<Point> centers;
  std::vector<double> sigmas;
  for (int c = 0; c < spec.components; ++c) {
    int row = c / side, col = c % side;
    centers.push_back(Point{0.1 + (col + 0.5) * spacing +
                                rng.uniform(-spec.jitter, spec.jitter),
                            0.1 + (row + 0.5) * spacing +
                                rng.uniform(-spec.jitter, spec.jitter)});
    sigmas.push_back(spec.sigma *
                     rng.uniform(1.0 - spec.sigma_spread, 1.0 + spec.sigma_spread));
  }

  std::vector<Point> pts;
  pts.reserve(spec.n_points);
  long base = spec.n_points / spec.components;
  long extra = spec.n_points % spec.components;
  for (int c = 0; c < spec.components; ++c) {
    long share = base + (c < extra ? 1 : 0);
    for (long i = 0; i < share; ++i)
      pts.push_back(truncated_blob_sample(rng, centers[c], sigmas[c], spec.truncate));
  }
  return PointSet::with_bounds(std::move(pts), kUnitFrame);
}

PointSet gen_spirals(const SpiralsSpec& spec) {
  if (spec.arms < 1 || spec.n_points < spec.arms)
    throw std::invalid_argument("gen_spirals: need at least one point per arm");
  if (!(spec.r1 > spec.r0 && spec.r0 > 0.0))
    throw std::invalid_argument("gen_spirals: need 0 < r0 < r1");
  if (spec.ramp < 0.0) throw std::invalid_argument("gen_spirals: ramp must be >= 0");
  if (!(spec.truncate > 0.0))
    throw std::invalid_argument("gen_spirals: truncate must be > 0");
  SeededRng rng(spec.seed);
  double cut2 = spec.truncate * spec.truncate * spec.jitter * spec.jitter;

  std::vector<Point> pts;
  pts.reserve(spec.n_points);
  long base = spec.n_points / spec.arms;
  long extra = spec.n_points % spec.arms;
  for (int a = 0; a < spec.arms; ++a) {
    double phase = 2.0 * std::numbers::pi * a / spec.arms;
    long share = base + (a < extra ? 1 : 0);
    for (long i = 0; i < share; ++i) {
      for (;;) {
        // Density along the arm ~ t^ramp, so occupancy tapers from the dense
        // head to a thin tail and grid-cell totals spread evenly instead of
        // piling up at a single plateau value.
        double t = std::pow(rng.uniform01(), 1.0 / (1.0 + spec.ramp));
        double r = spec.r0 + (spec.r1 - spec.r0) * t;
        double theta = phase + spec.sweep * t;
        // Truncated jitter keeps the arm crisp instead of surrounding it
        // with a faint halo of near-empty cells.
        double dx, dy;
        do {
          dx = gauss(rng) * spec.jitter;
          dy = gauss(rng) * spec.jitter;
        } while (spec.jitter > 0.0 && dx * dx + dy * dy > cut2);
        Point pt{0.5 + r * std::cos(theta) + dx, 0.5 + r * std::sin(theta) + dy};
        if (kUnitFrame.contains(pt)) {
          pts.push_back(pt);
          break;
        }
      }
    }
  }
  return PointSet::with_bounds(std::move(pts), kUnitFrame);
}

namespace {

Point rect_sample(SeededRng& rng, double x0, double x1, double y0, double y1) {
  return Point{rng.uniform(x0, x1), rng.uniform(y0, y1)};
}

Point disc_sample(SeededRng& rng, Point c, double radius) {
  double r = radius * std::sqrt(rng.uniform01());
  double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return Point{c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

Point arc_sample(SeededRng& rng, Point c, double rin, double rout, double a0,
                 double a1) {
  double r = std::sqrt(rng.uniform(rin * rin, rout * rout));
  double a = rng.uniform(a0, a1);
  return Point{c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

}  // namespace

PointSet gen_shapes(const ShapesSpec& spec) {
  if (spec.n_points < 100) throw std::invalid_argument("gen_shapes: too few points");
  if (spec.bridge_density < 0.0 || spec.bridge_density > 0.5)
    throw std::invalid_argument("gen_shapes: bridge_density must lie in [0, 0.5]");
  SeededRng rng(spec.seed);

  std::vector<Point> pts;
  pts.reserve(spec.n_points);
  const long n = spec.n_points;
  // Shares: arc 22%, rectangle 22%, disc 16%, dumbbells 20% each.
  long n_arc = n * 22 / 100;
  long n_rect = n * 22 / 100;
  long n_disc = n * 16 / 100;
  long n_db1 = n * 20 / 100;
  long n_db2 = n - n_arc - n_rect - n_disc - n_db1;

  for (long i = 0; i < n_arc; ++i)
    pts.push_back(arc_sample(rng, Point{0.24, 0.74}, 0.09, 0.16, 0.35,
                             2.0 * std::numbers::pi - 0.35));
  for (long i = 0; i < n_rect; ++i)
    pts.push_back(rect_sample(rng, 0.56, 0.93, 0.70, 0.88));
  for (long i = 0; i < n_disc; ++i)
    pts.push_back(disc_sample(rng, Point{0.80, 0.13}, 0.085));

  auto dumbbell = [&](long count, Point a, Point b, double blob_r) {
    long bridge = static_cast<long>(std::llround(spec.bridge_density * count));
    long halves = count - bridge;
    for (long i = 0; i < halves; ++i)
      pts.push_back(disc_sample(rng, (i % 2 == 0) ? a : b, blob_r));
    // Bridge points cover only the exposed gap between the blob edges, so
    // the connecting cells stay dense enough to survive the significance cut.
    double dist = std::hypot(b.x - a.x, b.y - a.y);
    double t0 = blob_r / dist, t1 = 1.0 - blob_r / dist;
    for (long i = 0; i < bridge; ++i) {
      double t = rng.uniform(t0, t1);
      Point on{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
      double ux = -(b.y - a.y), uy = b.x - a.x;
      double off = rng.uniform(-spec.bridge_halfwidth, spec.bridge_halfwidth);
      pts.push_back(Point{on.x + off * ux / dist, on.y + off * uy / dist});
    }
  };
  dumbbell(n_db1, Point{0.14, 0.305}, Point{0.34, 0.305}, 0.065);
  dumbbell(n_db2, Point{0.583, 0.35}, Point{0.583, 0.17}, 0.055);

  for (Point& pt : pts) {
    pt.x = std::clamp(pt.x, 0.0, 1.0);
    pt.y = std::clamp(pt.y, 0.0, 1.0);
  }
  return PointSet::with_bounds(std::move(pts), kUnitFrame);
}

PointSet ingest_csv(const std::string& path, std::optional<long> sample_n,
                    SeededRng& rng) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("ingest_csv: '" + path + "' is empty");
  auto strip = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  if (strip(line) != "x,y")
    throw std::runtime_error("ingest_csv: expected header 'x,y', got '" + strip(line) + "'");

  std::vector<Point> pts;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) continue;
    std::istringstream row(s);
    double x, y;
    char comma;
    if (!(row >> x >> comma >> y) || comma != ',')
      throw std::runtime_error("ingest_csv: malformed row at line " +
                               std::to_string(lineno));
    pts.push_back(Point{x, y});
  }

  if (sample_n) {
    long want = *sample_n;
    if (want < 0 || want > static_cast<long>(pts.size()))
      throw std::runtime_error("ingest_csv: sample_n " + std::to_string(want) +
                               " exceeds available rows (" +
                               std::to_string(pts.size()) + ")");
    for (long i = 0; i < want; ++i) {
      long j = i + static_cast<long>(rng.below(pts.size() - i));
      std::swap(pts[i], pts[j]);
    }
    pts.resize(want);
  }
  return PointSet::from_points(std::move(pts));
}

}  // namespace privwave
