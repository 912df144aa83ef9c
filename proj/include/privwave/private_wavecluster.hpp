#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "privwave/dp.hpp"
#include "privwave/wavecluster.hpp"

namespace privwave {

enum class Mechanism { baseline, privqt, privthr, privthr_em };

std::string mechanism_name(Mechanism m);
Mechanism mechanism_from_name(const std::string& name);

// Budget share spent on count publication; the remainder protects the
// threshold stage. Mechanisms without a second stage use the whole budget.
double default_alpha(Mechanism m);

struct PrivateRunConfig {
  Mechanism mechanism = Mechanism::privqt;
  double epsilon = 1.0;
  double alpha = -1.0;  // negative = mechanism default
  GridSpec grid;
  double p = 0.0;
  std::uint64_t seed = 0;
};

struct ThresholdSelection {
  int k_prime = 0;
  double d_prime = 0.0;
  int list_size = 0;        // values available when the threshold was chosen
  bool degenerate = false;  // no positive values survived; nothing significant
};

struct PrivateRunResult {
  Mechanism mechanism = Mechanism::privqt;
  double epsilon = 0.0;
  double alpha = 1.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  int k_true = 0;
  ThresholdSelection selection;
  GridClustering clustering;
  Subband noisy_subband;  // subband the significance mask was applied to
  std::vector<std::pair<std::string, double>> budget_records;
  double budget_epsilon_spent = 0.0;
};

// Top-k cut over an ascending positive list: k' = floor((1-p)*m) clamped to
// at least 1, d' = k'-th largest. An empty list yields a degenerate cut.
ThresholdSelection select_topk(const std::vector<double>& ascending, double p);

// Values removed for an estimated count of spurious positives: half the
// noisy non-positive count, rounded, clamped to [0, available].
int removal_count(double noisy_zcount, int available);

// Full private pipelines. All randomness comes from the run seed; noise is
// drawn cell by cell in row-major order, then any threshold-stage draws.
//
// baseline:   publish noisy counts (clamp negatives, round), resample points
//             uniformly inside their cells, then cluster non-privately.
// privqt:     cluster directly on the noisy subband; k' and d' both come
//             from the noisy positive list.
// privthr:    splits the budget; the non-positive count of the exact subband
//             is Laplace-protected and half of it is trimmed from the noisy
//             positive list before the cut.
// privthr_em: splits the budget; (k', d') are drawn from the exact positive
//             list by the rank-based exponential mechanism, then applied to
//             the noisy subband.
PrivateRunResult run_private(const PointSet& data, const PrivateRunConfig& cfg);

PrivateRunResult run_baseline(const PointSet& data, const PrivateRunConfig& cfg);
PrivateRunResult run_privqt(const PointSet& data, const PrivateRunConfig& cfg);
PrivateRunResult run_privthr(const PointSet& data, const PrivateRunConfig& cfg);
PrivateRunResult run_privthr_em(const PointSet& data, const PrivateRunConfig& cfg);

// Threshold stage only, for distributional validation of k': replays the
// same selection math as the full pipelines without the component labeling.
ThresholdSelection sample_threshold(Mechanism mech, const CountMatrix& exact_counts,
                                    const Subband& exact_subband, double p,
                                    double epsilon, double alpha, SeededRng& rng);

}  // namespace privwave
