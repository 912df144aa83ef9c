#include "privwave/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privwave {

double laplace(SeededRng& rng, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("laplace: scale must be positive");
  double u = rng.uniform01() - 0.5;  // (-1/2, 1/2), endpoints excluded
  double sgn = u < 0.0 ? -1.0 : 1.0;
  return -b * sgn * std::log(1.0 - 2.0 * std::fabs(u));
}

CountMatrix perturb_counts(const CountMatrix& m, double eps, SeededRng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("perturb_counts: eps must be positive");
  CountMatrix out = m;
  double b = 1.0 / eps;
  for (double& c : out.cells) c += laplace(rng, b);
  return out;
}

RankDraw exp_mech_rank(std::span<const double> positives_ascending,
                       int target_rank, double eps, SeededRng& rng) {
  const int m = static_cast<int>(positives_ascending.size());
  if (m == 0) throw std::invalid_argument("exp_mech_rank: empty value list");
  if (!(eps > 0.0)) throw std::invalid_argument("exp_mech_rank: eps must be positive");
  if (target_rank < 1 || target_rank > m)
    throw std::invalid_argument("exp_mech_rank: target rank outside [1, m]");
  for (int i = 0; i + 1 < m; ++i) {
    if (positives_ascending[i] > positives_ascending[i + 1])
      throw std::invalid_argument("exp_mech_rank: values must be ascending");
  }
  if (!(positives_ascending[0] > 0.0))
    throw std::invalid_argument("exp_mech_rank: values must be strictly positive");

  // Rank i (1-based from the largest) owns (lower_i, x_i] where lower_i is the
  // next value down, or 0 for the smallest rank.
  auto value_at_rank = [&](int rank) { return positives_ascending[m - rank]; };
  auto lower_at_rank = [&](int rank) {
    return rank == m ? 0.0 : positives_ascending[m - rank - 1];
  };

  std::vector<double> logw(m);
  double maxlog = -std::numeric_limits<double>::infinity();
  for (int rank = 1; rank <= m; ++rank) {
    double width = value_at_rank(rank) - lower_at_rank(rank);
    double lw = width > 0.0
                    ? std::log(width) - 0.5 * eps * std::abs(rank - target_rank)
                    : -std::numeric_limits<double>::infinity();
    logw[rank - 1] = lw;
    maxlog = std::max(maxlog, lw);
  }

  double total = 0.0;
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    w[i] = std::isinf(logw[i]) ? 0.0 : std::exp(logw[i] - maxlog);
    total += w[i];
  }

  double u = rng.uniform01() * total;
  int chosen = m;  // fall through to the last positive-width rank
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    acc += w[i];
    if (u <= acc && w[i] > 0.0) {
      chosen = i + 1;
      break;
    }
  }
  while (chosen > 1 && w[chosen - 1] == 0.0) --chosen;

  double hi = value_at_rank(chosen);
  double lo = lower_at_rank(chosen);
  // Uniform on (lo, hi]: complement of uniform01 leaves the top end closed.
  double value = hi - rng.uniform01() * (hi - lo);
  return RankDraw{chosen, value};
}

Budget::Budget(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("budget: epsilon must be positive");
}

double Budget::spent_fraction() const {
  double s = 0.0;
  for (const auto& [label, f] : records_) s += f;
  return s;
}

double Budget::charge(const std::string& label, double fraction) {
  if (!(fraction > 0.0))
    throw std::invalid_argument("budget: stage '" + label + "' must charge a positive fraction");
  constexpr double kSlack = 1e-12;
  if (spent_fraction() + fraction > 1.0 + kSlack)
    throw std::runtime_error("budget: stage '" + label + "' overspends the privacy budget");
  records_.emplace_back(label, fraction);
  return fraction * epsilon_;
}

std::pair<double, double> budget_split(Budget& budget, double alpha,
                                       const std::string& first_label,
                                       const std::string& second_label) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("budget_split: alpha must lie strictly between 0 and 1");
  double e1 = budget.charge(first_label, alpha);
  double e2 = budget.charge(second_label, 1.0 - alpha);
  return {e1, e2};
}

}  // namespace privwave
