#include "privwave/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace privwave {

namespace {

void check_common(const BoundInputs& b) {
  if (b.l_size < 1) throw std::invalid_argument("rank bounds: |L| must be positive");
  if (b.zcount < 0) throw std::invalid_argument("rank bounds: |Z| cannot be negative");
  if (b.k < 1 || b.k > b.l_size)
    throw std::invalid_argument("rank bounds: k must lie in [1, |L|]");
  if (!(b.omega > 0.0 && b.omega < 1.0))
    throw std::invalid_argument("rank bounds: omega must lie strictly between 0 and 1");
  if (!(b.p >= 0.0 && b.p < 1.0))
    throw std::invalid_argument("rank bounds: p must lie in [0, 1)");
  if (!(b.eps1 > 0.0)) throw std::invalid_argument("rank bounds: eps1 must be positive");
}

// Two-sided deviation of a Binomial(n, 1/2) count around n/2 at level omega.
std::pair<double, double> flip_count_band(int zcount, double omega) {
  double half = zcount / 2.0;
  double dev = std::sqrt(zcount * std::log(1.0 / omega) / 2.0);
  return {half - dev, half + dev};
}

double value_noise_cap(int l_size, int zcount, double eps, double omega) {
  return (8.0 / eps) * std::log(4.0 * (l_size + zcount) / omega);
}

}  // namespace

RankBounds privqt_rank_bounds(const BoundInputs& b) {
  check_common(b);
  RankBounds r;
  std::tie(r.eta1, r.eta2) = flip_count_band(b.zcount, b.omega);
  r.gamma = value_noise_cap(b.l_size, b.zcount, b.eps1, b.omega);
  r.k_min = b.k + (1.0 - b.p) * (r.eta1 - b.theta);
  r.k_max = b.k + (1.0 - b.p) * (r.eta2 - b.theta);
  return r;
}

RankBounds privthr_rank_bounds(const BoundInputs& b) {
  check_common(b);
  if (!(b.eps2 > 0.0))
    throw std::invalid_argument("rank bounds: eps2 must be positive");
  RankBounds r;
  std::tie(r.eta1, r.eta2) = flip_count_band(b.zcount, b.omega);
  r.gamma = value_noise_cap(b.l_size, b.zcount, b.eps1, b.omega);
  r.beta = (2.0 / b.eps2) * std::log(1.0 / b.omega);
  double half = b.zcount / 2.0;
  r.k_min = b.k + (1.0 - b.p) * (r.eta1 - b.theta - half - r.beta);
  r.k_max = b.k + (1.0 - b.p) * (r.eta2 - b.theta - half + r.beta);
  return r;
}

RankBounds privthr_em_rank_bounds(const BoundInputs& b) {
  check_common(b);
  if (!(b.eps2 > 0.0))
    throw std::invalid_argument("rank bounds: eps2 must be positive");
  if (!(b.w_k > 0.0) || !(b.w_max > 0.0))
    throw std::invalid_argument("rank bounds: subband values must be positive");
  double gap = std::abs(b.w_max - b.w_k);
  if (gap == 0.0)
    throw std::invalid_argument(
        "rank bounds: degenerate value spread (largest equals the k-th largest)");
  RankBounds r;
  r.gamma = value_noise_cap(b.l_size, b.zcount, b.eps1, b.omega);
  r.eta1 = b.l_size - b.k - 1 +
           (2.0 / b.eps2) * std::log(gap / (std::abs(b.w_k) * b.omega));
  r.eta2 = b.k - 2 + (2.0 / b.eps2) * std::log(std::abs(b.w_k) / (gap * b.omega));
  r.k_min = b.k - r.eta1;
  r.k_max = b.k + r.eta2;
  return r;
}

ZeroFlipSummary validate_zero_flips(int zcount, double eps, int reps, SeededRng& rng) {
  if (zcount < 0) throw std::invalid_argument("validate_zero_flips: negative count");
  if (reps < 1) throw std::invalid_argument("validate_zero_flips: reps must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("validate_zero_flips: eps must be positive");

  ZeroFlipSummary out;
  out.reps = reps;
  if (zcount == 0) return out;

  double b = 1.0 / eps;
  std::vector<int> counts(reps);
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    int flips = 0;
    for (int z = 0; z < zcount; ++z) {
      double noise = laplace(rng, b) + laplace(rng, b) + laplace(rng, b) + laplace(rng, b);
      flips += (noise / 2.0) > 0.0;
    }
    counts[r] = flips;
    sum += flips;
  }
  out.mean = sum / reps;
  double ss = 0.0;
  for (int c : counts) ss += (c - out.mean) * (c - out.mean);
  out.variance = reps > 1 ? ss / (reps - 1) : 0.0;

  boost::math::binomial_distribution<double> model(zcount, 0.5);

  // Chi-square GOF with tail bins merged so every expected count is >= 5.
  std::map<int, int> hist;
  for (int c : counts) ++hist[c];
  int lo = 0, hi = zcount;
  while (lo < hi && reps * boost::math::pdf(model, lo) < 5.0) ++lo;
  while (hi > lo && reps * boost::math::pdf(model, hi) < 5.0) --hi;
  double stat = 0.0;
  int bins = 0;
  auto accumulate_bin = [&](double observed, double expected) {
    if (expected <= 0.0) return;
    stat += (observed - expected) * (observed - expected) / expected;
    ++bins;
  };
  double obs_lo = 0.0, obs_hi = 0.0;
  for (const auto& [value, n] : hist) {
    if (value < lo) obs_lo += n;
    else if (value > hi) obs_hi += n;
  }
  accumulate_bin(obs_lo, reps * boost::math::cdf(model, lo - 1));
  for (int v = lo; v <= hi; ++v) {
    auto it = hist.find(v);
    accumulate_bin(it == hist.end() ? 0.0 : it->second, reps * boost::math::pdf(model, v));
  }
  accumulate_bin(obs_hi, reps * (1.0 - boost::math::cdf(model, hi)));
  out.chi_square_stat = stat;
  if (bins > 1) {
    boost::math::chi_squared_distribution<double> chi(bins - 1);
    out.chi_square_pvalue = 1.0 - boost::math::cdf(chi, stat);
  }

  // Pooled two-sided binomial test across all simulated quads.
  long long trials = static_cast<long long>(reps) * zcount;
  long long successes = static_cast<long long>(std::llround(sum));
  boost::math::binomial_distribution<double> pooled(static_cast<double>(trials), 0.5);
  double cdf_at = boost::math::cdf(pooled, static_cast<double>(successes));
  double cdf_below = successes > 0
                         ? boost::math::cdf(pooled, static_cast<double>(successes - 1))
                         : 0.0;
  out.binomial_pvalue = std::min(1.0, 2.0 * std::min(cdf_at, 1.0 - cdf_below));

  // Largest gap between the empirical per-rep CDF and the model CDF.
  std::vector<int> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < reps; ++i) {
    double emp = static_cast<double>(i + 1) / reps;
    double mod = boost::math::cdf(model, sorted[i]);
    out.max_cdf_deviation = std::max(out.max_cdf_deviation, std::abs(emp - mod));
  }
  return out;
}

double estimate_theta(const Subband& s, double eps, int reps, SeededRng& rng) {
  if (reps < 100) throw std::invalid_argument("estimate_theta: needs at least 100 reps");
  if (!(eps > 0.0)) throw std::invalid_argument("estimate_theta: eps must be positive");
  double b = 1.0 / eps;
  long long flips = 0;
  for (int r = 0; r < reps; ++r) {
    for (double w : s.positives_sorted) {
      double noise = laplace(rng, b) + laplace(rng, b) + laplace(rng, b) + laplace(rng, b);
      flips += (w + noise) <= 0.0;
    }
  }
  return static_cast<double>(flips) / reps;
}

double laplace4_tail(double x) {
  if (x < 0.0) throw std::invalid_argument("laplace4_tail: x must be non-negative");
  return std::exp(-x) * (x * x * x + 9.0 * x * x + 33.0 * x + 48.0) / 96.0;
}

CoverageReport validate_k_coverage(Mechanism mech, const PointSet& data,
                                   const GridSpec& g, double p, double epsilon,
                                   double alpha, double omega, int reps,
                                   std::uint64_t seed, int theta_reps) {
  if (reps < 1) throw std::invalid_argument("validate_k_coverage: reps must be positive");
  if (mech == Mechanism::baseline)
    throw std::invalid_argument("validate_k_coverage: no k' range claim for baseline");
  if (alpha < 0.0) alpha = default_alpha(mech);

  CountMatrix counts = quantize(data, g);
  Subband exact = haar_average_subband(counts);
  DensityThreshold cut = significant_threshold(exact, p);

  BoundInputs in;
  in.l_size = static_cast<int>(exact.positives_sorted.size());
  in.zcount = exact.zcount;
  in.k = cut.k;
  in.p = p;
  in.omega = omega;
  in.w_k = cut.d;
  in.w_max = exact.positives_sorted.back();
  if (mech == Mechanism::privqt) {
    in.eps1 = epsilon;
    in.eps2 = epsilon;
  } else {
    in.eps1 = alpha * epsilon;
    in.eps2 = (1.0 - alpha) * epsilon;
  }
  {
    SeededRng theta_rng(derive_seed(seed, "theta"));
    in.theta = estimate_theta(exact, in.eps1, theta_reps, theta_rng);
  }

  CoverageReport report;
  report.mechanism = mech;
  report.inputs = in;
  report.reps = reps;
  switch (mech) {
    case Mechanism::privqt:
      report.bounds = privqt_rank_bounds(in);
      report.required_coverage = (1.0 - omega) * (1.0 - omega);
      break;
    case Mechanism::privthr:
      report.bounds = privthr_rank_bounds(in);
      report.required_coverage = (1.0 - omega) * (1.0 - omega) * (1.0 - omega);
      break;
    case Mechanism::privthr_em:
      report.bounds = privthr_em_rank_bounds(in);
      report.required_coverage = (1.0 - omega) * (1.0 - omega);
      break;
    default:
      break;
  }

  int inside = 0;
  for (int r = 0; r < reps; ++r) {
    SeededRng rng(derive_seed(seed, "coverage", static_cast<std::uint64_t>(r)));
    ThresholdSelection sel =
        sample_threshold(mech, counts, exact, p, epsilon, alpha, rng);
    if (!sel.degenerate && sel.k_prime >= report.bounds.k_min &&
        sel.k_prime <= report.bounds.k_max)
      ++inside;
  }
  report.empirical_coverage = static_cast<double>(inside) / reps;
  return report;
}

}  // namespace privwave
