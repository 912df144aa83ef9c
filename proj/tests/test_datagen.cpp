#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "privwave/datagen.hpp"
#include "privwave/wavecluster.hpp"

using namespace privwave;

namespace {

std::filesystem::path write_temp_csv(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

bool same_points(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.points[i].x != b.points[i].x || a.points[i].y != b.points[i].y)
      return false;
  return true;
}

}  // namespace

TEST_CASE("generators emit the requested point counts inside the unit frame") {
  GaussiansSpec gs;
  gs.components = 4;
  gs.n_points = 1003;
  PointSet g = gen_gaussians(gs);
  CHECK(g.size() == 1003);
  CHECK(g.bounds.xmin == 0.0);
  CHECK(g.bounds.xmax == 1.0);
  for (const auto& p : g.points) CHECK(g.bounds.contains(p));

  SpiralsSpec ss;
  ss.n_points = 100;
  PointSet s = gen_spirals(ss);
  CHECK(s.size() == 100);
  for (const auto& p : s.points) CHECK(s.bounds.contains(p));

  ShapesSpec hs;
  hs.n_points = 1000;
  PointSet h = gen_shapes(hs);
  CHECK(h.size() == 1000);
  for (const auto& p : h.points) CHECK(h.bounds.contains(p));
}

TEST_CASE("generation is a pure function of the spec") {
  GaussiansSpec gs;
  gs.n_points = 800;
  CHECK(same_points(gen_gaussians(gs), gen_gaussians(gs)));
  GaussiansSpec other = gs;
  other.seed = 9;
  CHECK(!same_points(gen_gaussians(gs), gen_gaussians(other)));

  SpiralsSpec ss;
  ss.n_points = 800;
  CHECK(same_points(gen_spirals(ss), gen_spirals(ss)));

  ShapesSpec hs;
  hs.n_points = 800;
  CHECK(same_points(gen_shapes(hs), gen_shapes(hs)));
}

TEST_CASE("default layouts cluster to their documented counts") {
  PointSet g = gen_gaussians(GaussiansSpec{});
  CHECK(run_wavecluster(g, GridSpec(64), 0.58).clustering.cluster_count == 15);

  PointSet s = gen_spirals(SpiralsSpec{});
  CHECK(run_wavecluster(s, GridSpec(40), 0.10).clustering.cluster_count == 3);

  PointSet h = gen_shapes(ShapesSpec{});
  CHECK(run_wavecluster(h, GridSpec(36), 0.23).clustering.cluster_count == 5);

  // Without their bridges the two dumbbells fall apart into four halves.
  ShapesSpec cut;
  cut.bridge_density = 0.0;
  PointSet h7 = gen_shapes(cut);
  CHECK(run_wavecluster(h7, GridSpec(36), 0.23).clustering.cluster_count == 7);
}

TEST_CASE("generator parameter validation") {
  GaussiansSpec gs;
  gs.components = 0;
  CHECK_THROWS_AS(gen_gaussians(gs), std::invalid_argument);
  gs = GaussiansSpec{};
  gs.n_points = 10;
  gs.components = 11;
  CHECK_THROWS_AS(gen_gaussians(gs), std::invalid_argument);
  gs = GaussiansSpec{};
  gs.sigma = 0.0;
  CHECK_THROWS_AS(gen_gaussians(gs), std::invalid_argument);
  gs = GaussiansSpec{};
  gs.truncate = 0.0;
  CHECK_THROWS_AS(gen_gaussians(gs), std::invalid_argument);

  SpiralsSpec ss;
  ss.arms = 0;
  CHECK_THROWS_AS(gen_spirals(ss), std::invalid_argument);
  ss = SpiralsSpec{};
  ss.r0 = 0.0;
  CHECK_THROWS_AS(gen_spirals(ss), std::invalid_argument);
  ss = SpiralsSpec{};
  ss.r1 = ss.r0;
  CHECK_THROWS_AS(gen_spirals(ss), std::invalid_argument);
  ss = SpiralsSpec{};
  ss.ramp = -1.0;
  CHECK_THROWS_AS(gen_spirals(ss), std::invalid_argument);
  ss = SpiralsSpec{};
  ss.truncate = 0.0;
  CHECK_THROWS_AS(gen_spirals(ss), std::invalid_argument);

  ShapesSpec hs;
  hs.n_points = 99;
  CHECK_THROWS_AS(gen_shapes(hs), std::invalid_argument);
  hs = ShapesSpec{};
  hs.bridge_density = -0.1;
  CHECK_THROWS_AS(gen_shapes(hs), std::invalid_argument);
  hs = ShapesSpec{};
  hs.bridge_density = 0.6;
  CHECK_THROWS_AS(gen_shapes(hs), std::invalid_argument);
}

TEST_CASE("csv ingestion parses, samples, and reports bad rows") {
  auto good = write_temp_csv("privwave_ok.csv",
                             "x,y\n0.25, 0.75\n 0.5,0.5 \n\n1.0,0.0\n");
  SeededRng rng(91);
  PointSet data = ingest_csv(good.string(), std::nullopt, rng);
  REQUIRE(data.size() == 3);
  CHECK(data.points[0].x == doctest::Approx(0.25));
  CHECK(data.points[0].y == doctest::Approx(0.75));
  CHECK(data.points[2].x == doctest::Approx(1.0));
  // Frame is the tight bounding box of the rows.
  CHECK(data.bounds.xmin == doctest::Approx(0.25));
  CHECK(data.bounds.xmax == doctest::Approx(1.0));
  CHECK(data.bounds.ymin == doctest::Approx(0.0));
  CHECK(data.bounds.ymax == doctest::Approx(0.75));

  auto bad = write_temp_csv("privwave_bad.csv", "x,y\n0.1,0.2\n0.3,0.4\n0.5;0.6\n");
  CHECK_THROWS_WITH_AS(ingest_csv(bad.string(), std::nullopt, rng),
                       doctest::Contains("line 4"), std::runtime_error);

  auto headerless = write_temp_csv("privwave_nohdr.csv", "0.1,0.2\n");
  CHECK_THROWS_AS(ingest_csv(headerless.string(), std::nullopt, rng),
                  std::runtime_error);
  CHECK_THROWS_AS(ingest_csv("/nonexistent/privwave.csv", std::nullopt, rng),
                  std::runtime_error);

  // Dyadic coordinates survive the decimal round trip bit-exactly.
  std::string rows = "x,y\n";
  for (int i = 0; i < 10; ++i)
    rows += std::to_string(i * 0.125) + "," + std::to_string(i * 0.0625) + "\n";
  auto big = write_temp_csv("privwave_sample.csv", rows);
  SeededRng rsamp(92);
  PointSet sampled = ingest_csv(big.string(), 4, rsamp);
  REQUIRE(sampled.size() == 4);
  std::set<double> originals;
  for (int i = 0; i < 10; ++i) originals.insert(i * 0.125);
  std::set<double> picked;
  for (const auto& p : sampled.points) {
    CHECK(originals.count(p.x) == 1);
    picked.insert(p.x);
  }
  CHECK(picked.size() == 4);  // without replacement

  SeededRng rsamp2(92);
  PointSet sampled2 = ingest_csv(big.string(), 4, rsamp2);
  CHECK(same_points(sampled, sampled2));

  SeededRng rover(93);
  CHECK_THROWS_AS(ingest_csv(big.string(), 11, rover), std::runtime_error);
  CHECK(ingest_csv(big.string(), 0, rover).size() == 0);
}
