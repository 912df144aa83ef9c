#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "privwave/geometry.hpp"
#include "privwave/rng.hpp"

namespace privwave {

// Isotropic Gaussian blobs centered on a jittered square lattice inside the
// unit frame; per-component spread varies so neighboring blobs overlap to
// different degrees. Samples outside the truncation radius or the frame are
// redrawn. Defaults reproduce a 15-cluster layout on a 64x64 grid.
struct GaussiansSpec {
  int components = 15;
  long n_points = 30000;
  std::uint64_t seed = 1001;
  double sigma = 0.05;
  double sigma_spread = 0.25;  // per-component factor in [1-s, 1+s]
  double jitter = 0.012;       // lattice center displacement
  double truncate = 1.0;       // radius cut in sigmas
};

// Interleaved Archimedean spiral arms around the frame center with small
// isotropic jitter, truncated so the arm edges stay crisp. Defaults
// reproduce a 3-cluster layout on a 40x40 grid.
struct SpiralsSpec {
  int arms = 3;
  long n_points = 31200;
  std::uint64_t seed = 2002;
  double r0 = 0.12;       // arm start radius
  double r1 = 0.46;       // arm end radius
  double sweep = 3.12;    // radians traversed per arm
  double jitter = 0.03;   // point displacement sigma
  double truncate = 1.3;  // jitter radius cut in sigmas
  double ramp = 0.0;      // density along the arm grows as t^ramp; 0 = uniform
};

// Five dense shapes: an annulus arc (concave), a rectangle, a disc, and two
// dumbbells whose halves are joined by a thin bridge. With bridge_density 0
// the dumbbells fall apart and the layout yields seven clusters. Defaults
// reproduce a 5-cluster layout on a 36x36 grid.
struct ShapesSpec {
  long n_points = 31520;
  std::uint64_t seed = 3003;
  double bridge_density = 0.035;  // share of each dumbbell's points on its bridge
  double bridge_halfwidth = 0.008;
};

PointSet gen_gaussians(const GaussiansSpec& spec);
PointSet gen_spirals(const SpiralsSpec& spec);
PointSet gen_shapes(const ShapesSpec& spec);

// Reads "x,y"-headed CSV. With sample_n set, keeps a seeded uniform sample
// without replacement (sample_n must not exceed the row count). Parse
// failures report the offending line number.
PointSet ingest_csv(const std::string& path, std::optional<long> sample_n,
                    SeededRng& rng);

}  // namespace privwave
