#include "privwave/private_wavecluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privwave {

std::string mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::baseline: return "baseline";
    case Mechanism::privqt: return "privqt";
    case Mechanism::privthr: return "privthr";
    case Mechanism::privthr_em: return "privthr_em";
  }
  throw std::logic_error("mechanism_name: unknown mechanism");
}

Mechanism mechanism_from_name(const std::string& name) {
  if (name == "baseline") return Mechanism::baseline;
  if (name == "privqt") return Mechanism::privqt;
  if (name == "privthr") return Mechanism::privthr;
  if (name == "privthr_em") return Mechanism::privthr_em;
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

double default_alpha(Mechanism m) {
  switch (m) {
    // The per-cell count noise caps the value distortion gamma, whose
    // constant grows much faster with shrinking budget than the trim slack
    // beta does, so privthr leans its budget heavily toward quantization.
    // privthr_em's rank selection is likewise cheap relative to the counts.
    case Mechanism::privthr: return 0.9;
    case Mechanism::privthr_em: return 0.7;
    default: return 1.0;
  }
}

ThresholdSelection select_topk(const std::vector<double>& ascending, double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("select_topk: p must lie in [0, 1)");
  ThresholdSelection sel;
  sel.list_size = static_cast<int>(ascending.size());
  if (ascending.empty()) {
    sel.degenerate = true;
    return sel;
  }
  int m = sel.list_size;
  sel.k_prime = std::max(1, static_cast<int>(std::floor((1.0 - p) * m)));
  sel.d_prime = ascending[m - sel.k_prime];
  return sel;
}

int removal_count(double noisy_zcount, int available) {
  int r = static_cast<int>(std::llround(noisy_zcount / 2.0));
  return std::clamp(r, 0, available);
}

namespace {

struct Prepared {
  CountMatrix counts;
  Subband exact;
  int k_true;
};

Prepared prepare(const PointSet& data, const PrivateRunConfig& cfg) {
  Prepared pr{quantize(data, cfg.grid), {}, 0};
  pr.exact = haar_average_subband(pr.counts);
  pr.k_true = significant_threshold(pr.exact, cfg.p).k;  // throws if nothing positive
  return pr;
}

double resolve_alpha(const PrivateRunConfig& cfg) {
  double a = cfg.alpha < 0.0 ? default_alpha(cfg.mechanism) : cfg.alpha;
  bool needs_split =
      cfg.mechanism == Mechanism::privthr || cfg.mechanism == Mechanism::privthr_em;
  if (needs_split && !(a > 0.0 && a < 1.0))
    throw std::invalid_argument("alpha must lie strictly between 0 and 1");
  return a;
}

PrivateRunResult shell(const PrivateRunConfig& cfg, double alpha, int k_true) {
  PrivateRunResult r;
  r.mechanism = cfg.mechanism;
  r.epsilon = cfg.epsilon;
  r.alpha = alpha;
  r.p = cfg.p;
  r.seed = cfg.seed;
  r.k_true = k_true;
  return r;
}

void finish_from_subband(PrivateRunResult& r, Subband noisy,
                         const ThresholdSelection& sel) {
  r.selection = sel;
  r.noisy_subband = std::move(noisy);
  if (sel.degenerate) {
    r.clustering.rows = r.noisy_subband.rows;
    r.clustering.cols = r.noisy_subband.cols;
    r.clustering.labels.assign(r.noisy_subband.values.size(), 0);
  } else {
    r.clustering =
        connected_components(significant_grids(r.noisy_subband, sel.d_prime));
  }
}

void record_budget(PrivateRunResult& r, const Budget& budget) {
  r.budget_records = budget.records();
  r.budget_epsilon_spent = budget.spent_epsilon();
}

}  // namespace

PrivateRunResult run_baseline(const PointSet& data, const PrivateRunConfig& cfg) {
  Prepared pr = prepare(data, cfg);
  Budget budget(cfg.epsilon);
  budget.charge("count-publication", 1.0);
  SeededRng rng(cfg.seed);

  CountMatrix noisy = perturb_counts(pr.counts, cfg.epsilon, rng);

  // Publishable histogram: negatives clamped away, counts integral.
  const Bounds& b = data.bounds;
  double wx = b.width() / cfg.grid.g1;
  double wy = b.height() / cfg.grid.g2;
  std::vector<Point> synthesized;
  for (int i = 0; i < noisy.rows; ++i) {
    for (int j = 0; j < noisy.cols; ++j) {
      long long n = std::llround(std::max(noisy.at(i, j), 0.0));
      for (long long t = 0; t < n; ++t) {
        synthesized.push_back(Point{b.xmin + (i + rng.uniform01()) * wx,
                                    b.ymin + (j + rng.uniform01()) * wy});
      }
    }
  }

  PrivateRunResult r = shell(cfg, 1.0, pr.k_true);
  record_budget(r, budget);
  if (synthesized.empty()) {
    ThresholdSelection sel;
    sel.degenerate = true;
    finish_from_subband(r, haar_average_subband(CountMatrix(cfg.grid.g1, cfg.grid.g2)),
                        sel);
    return r;
  }
  PointSet published = PointSet::with_bounds(std::move(synthesized), b);
  Subband w = haar_average_subband(quantize(published, cfg.grid));
  ThresholdSelection sel = select_topk(w.positives_sorted, cfg.p);
  finish_from_subband(r, std::move(w), sel);
  return r;
}

PrivateRunResult run_privqt(const PointSet& data, const PrivateRunConfig& cfg) {
  Prepared pr = prepare(data, cfg);
  Budget budget(cfg.epsilon);
  budget.charge("count-publication", 1.0);
  SeededRng rng(cfg.seed);

  Subband noisy = haar_average_subband(perturb_counts(pr.counts, cfg.epsilon, rng));
  ThresholdSelection sel = select_topk(noisy.positives_sorted, cfg.p);

  PrivateRunResult r = shell(cfg, 1.0, pr.k_true);
  record_budget(r, budget);
  finish_from_subband(r, std::move(noisy), sel);
  return r;
}

PrivateRunResult run_privthr(const PointSet& data, const PrivateRunConfig& cfg) {
  Prepared pr = prepare(data, cfg);
  double alpha = resolve_alpha(cfg);
  Budget budget(cfg.epsilon);
  auto [e1, e2] = budget_split(budget, alpha, "count-publication", "sparsity-protection");
  SeededRng rng(cfg.seed);

  Subband noisy = haar_average_subband(perturb_counts(pr.counts, e1, rng));

  // The exact non-positive count is the sensitive statistic here; about half
  // of those cells turn positive under the count noise, so that many of the
  // smallest noisy positives are trimmed before the cut.
  double zc_noisy = pr.exact.zcount +
                    laplace(rng, haar_profile().zcount_sensitivity / e2);
  int r_trim = removal_count(zc_noisy, static_cast<int>(noisy.positives_sorted.size()));
  std::vector<double> trimmed(noisy.positives_sorted.begin() + r_trim,
                              noisy.positives_sorted.end());
  ThresholdSelection sel = select_topk(trimmed, cfg.p);

  PrivateRunResult r = shell(cfg, alpha, pr.k_true);
  record_budget(r, budget);
  finish_from_subband(r, std::move(noisy), sel);
  return r;
}

PrivateRunResult run_privthr_em(const PointSet& data, const PrivateRunConfig& cfg) {
  Prepared pr = prepare(data, cfg);
  double alpha = resolve_alpha(cfg);
  Budget budget(cfg.epsilon);
  auto [e1, e2] = budget_split(budget, alpha, "count-publication", "threshold-selection");
  SeededRng rng(cfg.seed);

  Subband noisy = haar_average_subband(perturb_counts(pr.counts, e1, rng));

  int k = significant_threshold(pr.exact, cfg.p).k;
  RankDraw draw = exp_mech_rank(pr.exact.positives_sorted, k, e2, rng);
  ThresholdSelection sel;
  sel.k_prime = draw.rank;
  sel.d_prime = draw.value;
  sel.list_size = static_cast<int>(pr.exact.positives_sorted.size());

  PrivateRunResult r = shell(cfg, alpha, pr.k_true);
  record_budget(r, budget);
  finish_from_subband(r, std::move(noisy), sel);
  return r;
}

PrivateRunResult run_private(const PointSet& data, const PrivateRunConfig& cfg) {
  switch (cfg.mechanism) {
    case Mechanism::baseline: return run_baseline(data, cfg);
    case Mechanism::privqt: return run_privqt(data, cfg);
    case Mechanism::privthr: return run_privthr(data, cfg);
    case Mechanism::privthr_em: return run_privthr_em(data, cfg);
  }
  throw std::logic_error("run_private: unknown mechanism");
}

ThresholdSelection sample_threshold(Mechanism mech, const CountMatrix& exact_counts,
                                    const Subband& exact_subband, double p,
                                    double epsilon, double alpha, SeededRng& rng) {
  switch (mech) {
    case Mechanism::privqt: {
      Subband noisy = haar_average_subband(perturb_counts(exact_counts, epsilon, rng));
      return select_topk(noisy.positives_sorted, p);
    }
    case Mechanism::privthr: {
      double e1 = alpha * epsilon;
      double e2 = (1.0 - alpha) * epsilon;
      Subband noisy = haar_average_subband(perturb_counts(exact_counts, e1, rng));
      double zc = exact_subband.zcount +
                  laplace(rng, haar_profile().zcount_sensitivity / e2);
      int r = removal_count(zc, static_cast<int>(noisy.positives_sorted.size()));
      std::vector<double> trimmed(noisy.positives_sorted.begin() + r,
                                  noisy.positives_sorted.end());
      return select_topk(trimmed, p);
    }
    case Mechanism::privthr_em: {
      double e2 = (1.0 - alpha) * epsilon;
      int k = significant_threshold(exact_subband, p).k;
      RankDraw draw = exp_mech_rank(exact_subband.positives_sorted, k, e2, rng);
      ThresholdSelection sel;
      sel.k_prime = draw.rank;
      sel.d_prime = draw.value;
      sel.list_size = static_cast<int>(exact_subband.positives_sorted.size());
      return sel;
    }
    case Mechanism::baseline:
      throw std::invalid_argument(
          "sample_threshold: baseline has no standalone threshold stage");
  }
  throw std::logic_error("sample_threshold: unknown mechanism");
}

}  // namespace privwave
