#pragma once

#include <cstdint>

#include "privwave/private_wavecluster.hpp"

namespace privwave {

// Inputs shared by the k' range calculators: exact subband profile, budget
// split, failure probability omega, and the expected count of positives lost
// to noise (theta, a Monte-Carlo plug-in).
struct BoundInputs {
  int l_size = 0;   // |L|
  int zcount = 0;   // |Z|
  int k = 0;        // exact significance rank
  double p = 0.0;
  double omega = 0.05;
  double eps1 = 1.0;  // count-publication budget
  double eps2 = 1.0;  // threshold-stage budget (unused by the plain variant)
  double w_k = 0.0;   // k-th largest positive value
  double w_max = 0.0;
  double theta = 0.0;
};

struct RankBounds {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double gamma = 0.0;  // high-probability cap on any single value's noise
  double beta = 0.0;   // trim-count slack; zero for variants without one
  double k_min = 0.0;
  double k_max = 0.0;
};

// k' range when both k' and d' come from the noisy positive list; holds with
// probability at least (1 - omega)^2.
RankBounds privqt_rank_bounds(const BoundInputs& b);

// k' range when the noisy positive list is first trimmed by half the
// protected non-positive count; holds with probability at least (1 - omega)^3.
RankBounds privthr_rank_bounds(const BoundInputs& b);

// k' range for the rank-based exponential mechanism on the exact list; holds
// with probability at least (1 - omega)^2. Requires w_max > w_k.
RankBounds privthr_em_rank_bounds(const BoundInputs& b);

struct ZeroFlipSummary {
  double mean = 0.0;
  double variance = 0.0;        // sample variance across repetitions
  double chi_square_stat = 0.0;
  double chi_square_pvalue = 1.0;  // GOF against Binomial(zcount, 1/2)
  double binomial_pvalue = 1.0;    // two-sided test on the pooled flip total
  double max_cdf_deviation = 0.0;
  int reps = 0;
};

// Simulates the noisy values of `zcount` empty quads (sum of 4 Laplace(1/eps)
// draws over 2) and counts how many turn positive per repetition. The count
// is Binomial(zcount, 1/2) regardless of eps.
ZeroFlipSummary validate_zero_flips(int zcount, double eps, int reps, SeededRng& rng);

// Monte-Carlo estimate of how many positive subband values the count noise
// pushes non-positive: a positive value W flips when W + (sum of 4
// Laplace(1/eps) draws) drops to zero or below. Needs reps >= 100.
double estimate_theta(const Subband& s, double eps, int reps, SeededRng& rng);

// Closed-form flip probability P(sum of 4 Laplace(0,1) <= -x) for x >= 0.
double laplace4_tail(double x);

struct CoverageReport {
  Mechanism mechanism = Mechanism::privqt;
  RankBounds bounds;
  BoundInputs inputs;
  double required_coverage = 0.0;
  double empirical_coverage = 0.0;
  int reps = 0;
};

// Empirically checks a k' range claim: replays the mechanism's threshold
// stage `reps` times and reports the fraction of draws inside the range.
CoverageReport validate_k_coverage(Mechanism mech, const PointSet& data,
                                   const GridSpec& g, double p, double epsilon,
                                   double alpha, double omega, int reps,
                                   std::uint64_t seed, int theta_reps = 400);

}  // namespace privwave
