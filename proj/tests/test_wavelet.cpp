#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "privwave/rng.hpp"
#include "privwave/wavelet.hpp"

using namespace privwave;

namespace {

CountMatrix random_counts(SeededRng& rng, int rows, int cols, int cap) {
  CountMatrix m(rows, cols);
  for (double& c : m.cells) c = static_cast<double>(rng.below(cap));
  return m;
}

}  // namespace

TEST_CASE("level-1 average subband of a worked 4x4 matrix") {
  CountMatrix m(4, 4);
  // Quad (0,0) holds 1+2+3+4 = 10; quad (1,1) a single point; the others empty.
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 3;
  m.at(1, 1) = 4;
  m.at(2, 2) = 1;

  Subband w = haar_average_subband(m);
  CHECK(w.rows == 2);
  CHECK(w.cols == 2);
  CHECK(w.at(0, 0) == doctest::Approx(5.0));
  CHECK(w.at(0, 1) == doctest::Approx(0.0));
  CHECK(w.at(1, 0) == doctest::Approx(0.0));
  CHECK(w.at(1, 1) == doctest::Approx(0.5));
  CHECK(w.zcount == 2);
  CHECK(w.positives_sorted == std::vector<double>{0.5, 5.0});
}

TEST_CASE("mass relation: twice the subband total equals the matrix total") {
  SeededRng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    CountMatrix m = random_counts(rng, 8, 6, 7);
    Subband w = haar_average_subband(m);
    double wsum = std::accumulate(w.values.begin(), w.values.end(), 0.0);
    CHECK(2.0 * wsum == doctest::Approx(m.total()));
  }
}

TEST_CASE("single count increment moves exactly one subband value by one half") {
  SeededRng rng(22);
  CountMatrix m = random_counts(rng, 6, 8, 5);
  Subband base = haar_average_subband(m);
  for (int i = 0; i < m.rows; i += 3) {
    for (int j = 0; j < m.cols; j += 3) {
      CountMatrix bumped = m;
      bumped.at(i, j) += 1.0;
      Subband w = haar_average_subband(bumped);
      int changed = 0;
      for (std::size_t c = 0; c < w.values.size(); ++c) {
        if (w.values[c] != base.values[c]) {
          ++changed;
          CHECK(w.values[c] - base.values[c] == doctest::Approx(0.5));
        }
      }
      CHECK(changed == 1);
    }
  }
}

TEST_CASE("zcount counts exactly the all-zero quads of a count matrix") {
  SeededRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    CountMatrix m = random_counts(rng, 10, 10, 2);
    Subband w = haar_average_subband(m);
    int zero_quads = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        double s = m.at(2 * i, 2 * j) + m.at(2 * i + 1, 2 * j) +
                   m.at(2 * i, 2 * j + 1) + m.at(2 * i + 1, 2 * j + 1);
        zero_quads += s == 0.0;
      }
    CHECK(w.zcount == zero_quads);
    CHECK(w.zcount + static_cast<int>(w.positives_sorted.size()) == 25);
  }
}

TEST_CASE("negative noisy values count as non-positive") {
  Subband w = make_subband(2, 2, {-1.5, 0.0, 0.25, 3.0});
  CHECK(w.zcount == 2);
  CHECK(w.positives_sorted == std::vector<double>{0.25, 3.0});
  CHECK(w.at(0, 0) == doctest::Approx(-1.5));
}

TEST_CASE("positive list is ascending") {
  SeededRng rng(24);
  CountMatrix m = random_counts(rng, 12, 12, 9);
  Subband w = haar_average_subband(m);
  CHECK(std::is_sorted(w.positives_sorted.begin(), w.positives_sorted.end()));
  for (double v : w.positives_sorted) CHECK(v > 0.0);
}

TEST_CASE("odd matrix extents are rejected") {
  CHECK_THROWS_AS(haar_average_subband(CountMatrix(5, 4)), std::invalid_argument);
  CHECK_THROWS_AS(haar_average_subband(CountMatrix(4, 7)), std::invalid_argument);
  CHECK_THROWS_AS(make_subband(2, 2, {1.0}), std::invalid_argument);  // size mismatch
}

TEST_CASE("transform profile records the divisor-2 sensitivities") {
  TransformProfile prof = haar_profile();
  CHECK(prof.quad_divisor == doctest::Approx(2.0));
  CHECK(prof.zcount_sensitivity == doctest::Approx(1.0));
  CHECK(prof.quality_sensitivity == doctest::Approx(1.0));
}
