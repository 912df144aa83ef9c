#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privwave/grid.hpp"
#include "privwave/rng.hpp"

namespace privwave {

// One Laplace(0, b) draw via inverse CDF: u uniform on (-1/2, 1/2),
// x = -b * sgn(u) * ln(1 - 2|u|).
double laplace(SeededRng& rng, double b);

// Adds independent Laplace(1/eps) noise to every cell. Counts have unit
// sensitivity per cell, so this publishes the whole histogram at budget eps.
// Output is real-valued and may be negative; downstream stages consume the
// signed values as-is.
CountMatrix perturb_counts(const CountMatrix& m, double eps, SeededRng& rng);

struct RankDraw {
  int rank = 0;      // 1-based; 1 = largest value
  double value = 0;  // uniform draw from the chosen partition
};

// Exponential mechanism over the rank partitions of (0, max]. The distinct
// descending values x1 >= ... >= xm split the range into Pt_i = (x_{i+1}, x_i]
// (Pt_m = (0, x_m]); rank i is sampled with probability proportional to
// width(Pt_i) * exp(-(eps/2) * |i - target_rank|), then the returned value is
// uniform in the chosen partition. Duplicated values collapse their partition
// to width zero and can never be sampled. Weights are combined in log space.
RankDraw exp_mech_rank(std::span<const double> positives_ascending,
                       int target_rank, double eps, SeededRng& rng);

// Tracks fractions of a fixed epsilon spent by pipeline stages. Sequential
// charges accumulate; spending past the whole budget throws, naming the
// offending stage.
class Budget {
 public:
  explicit Budget(double epsilon);

  // `fraction` is the share of the total epsilon consumed by this stage.
  double charge(const std::string& label, double fraction);

  double epsilon() const { return epsilon_; }
  double spent_fraction() const;
  double spent_epsilon() const { return spent_fraction() * epsilon_; }
  const std::vector<std::pair<std::string, double>>& records() const { return records_; }

 private:
  double epsilon_;
  std::vector<std::pair<std::string, double>> records_;
};

// Splits the remaining budget into alpha / (1 - alpha) shares, recording both
// charges, and returns the two epsilon values.
std::pair<double, double> budget_split(Budget& budget, double alpha,
                                       const std::string& first_label,
                                       const std::string& second_label);

}  // namespace privwave
