#include "privwave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace privwave {

Assignment hungarian_min(const std::vector<std::vector<double>>& cost) {
  const int nr = static_cast<int>(cost.size());
  const int nc = nr == 0 ? 0 : static_cast<int>(cost[0].size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != nc)
      throw std::invalid_argument("hungarian: ragged cost matrix");
  }
  Assignment result;
  if (nr == 0 || nc == 0) return result;

  // Pad to square; dummy entries cost 0 so they never distort real pairs.
  const int n = std::max(nr, nc);
  auto at = [&](int i, int j) -> double {
    return (i < nr && j < nc) ? cost[i][j] : 0.0;
  };

  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[j] = row assigned to column j (1-based)
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = match[j0], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  for (int j = 1; j <= n; ++j) {
    int i = match[j];
    if (i >= 1 && i <= nr && j <= nc) {
      result.pairs.emplace_back(i - 1, j - 1);
      result.total_cost += cost[i - 1][j - 1];
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

int cluster_distance(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t ia = 0, ib = 0, common = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++common;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  std::size_t only_a = a.size() - common;
  std::size_t only_b = b.size() - common;
  return static_cast<int>(std::max(only_a, only_b));
}

double dsgc(const GridClustering& truth, const GridClustering& priv) {
  const int total = truth.significant_cells();
  if (total == 0)
    throw std::invalid_argument("dsgc: true clustering has no significant grids");
  const auto& tc = truth.clusters;
  const auto& pc = priv.clusters;

  double m_cost = 0.0;
  std::vector<char> t_matched(tc.size(), false), p_matched(pc.size(), false);
  if (!tc.empty() && !pc.empty()) {
    std::vector<std::vector<double>> cost(tc.size(), std::vector<double>(pc.size()));
    for (std::size_t i = 0; i < tc.size(); ++i)
      for (std::size_t j = 0; j < pc.size(); ++j)
        cost[i][j] = cluster_distance(tc[i], pc[j]);
    Assignment asg = hungarian_min(cost);
    for (const auto& [i, j] : asg.pairs) {
      t_matched[i] = p_matched[j] = true;
    }
    m_cost += asg.total_cost;
  }
  // Clusters without a partner count whole, on both sides.
  for (std::size_t i = 0; i < tc.size(); ++i)
    if (!t_matched[i]) m_cost += static_cast<double>(tc[i].size());
  for (std::size_t j = 0; j < pc.size(); ++j)
    if (!p_matched[j]) m_cost += static_cast<double>(pc[j].size());

  return m_cost / total;
}

namespace {

struct Contingency {
  std::vector<long long> row_margin, col_margin;
  std::vector<std::vector<long long>> joint;
  long long n = 0;
};

Contingency build_contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("metrics: label arrays differ in length");
  if (a.empty()) throw std::invalid_argument("metrics: empty label arrays");
  std::map<int, int> ra, rb;
  for (int v : a) ra.emplace(v, 0);
  for (int v : b) rb.emplace(v, 0);
  int ia = 0, ib = 0;
  for (auto& [k, idx] : ra) idx = ia++;
  for (auto& [k, idx] : rb) idx = ib++;
  Contingency c;
  c.n = static_cast<long long>(a.size());
  c.row_margin.assign(ra.size(), 0);
  c.col_margin.assign(rb.size(), 0);
  c.joint.assign(ra.size(), std::vector<long long>(rb.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    int r = ra[a[i]], cl = rb[b[i]];
    ++c.joint[r][cl];
    ++c.row_margin[r];
    ++c.col_margin[cl];
  }
  return c;
}

double pairs2(long long n) { return 0.5 * static_cast<double>(n) * (n - 1); }

}  // namespace

double ocm(std::span<const int> truth_labels, std::span<const int> priv_labels) {
  Contingency c = build_contingency(truth_labels, priv_labels);
  // Maximize matched overlap = minimize negated intersections.
  std::vector<std::vector<double>> cost(c.joint.size(),
                                        std::vector<double>(c.joint[0].size()));
  for (std::size_t i = 0; i < c.joint.size(); ++i)
    for (std::size_t j = 0; j < c.joint[0].size(); ++j)
      cost[i][j] = -static_cast<double>(c.joint[i][j]);
  Assignment asg = hungarian_min(cost);
  double covered = -asg.total_cost;
  return 1.0 - covered / static_cast<double>(c.n);
}

double tce(std::span<const int> truth_labels, std::span<const int> priv_labels) {
  Contingency c = build_contingency(truth_labels, priv_labels);
  if (c.n < 2) throw std::invalid_argument("tce: needs at least two samples");
  double same_truth = 0.0, same_priv = 0.0, same_both = 0.0;
  for (long long m : c.row_margin) same_truth += pairs2(m);
  for (long long m : c.col_margin) same_priv += pairs2(m);
  for (const auto& row : c.joint)
    for (long long m : row) same_both += pairs2(m);
  return (same_truth + same_priv - 2.0 * same_both) / pairs2(c.n);
}

double fmeasure(const GridClustering& truth, const GridClustering& priv) {
  if (truth.clusters.empty() || priv.clusters.empty())
    throw std::invalid_argument("fmeasure: both clusterings need at least one cluster");
  double total = 0.0;
  for (const auto& cl : truth.clusters) total += static_cast<double>(cl.size());

  double f = 0.0;
  std::vector<int> overlap;
  for (const auto& ci : truth.clusters) {
    double best = 0.0;
    for (const auto& kj : priv.clusters) {
      overlap.clear();
      std::set_intersection(ci.begin(), ci.end(), kj.begin(), kj.end(),
                            std::back_inserter(overlap));
      if (overlap.empty()) continue;
      double inter = static_cast<double>(overlap.size());
      double prec = inter / static_cast<double>(kj.size());
      double rec = inter / static_cast<double>(ci.size());
      best = std::max(best, 2.0 * prec * rec / (prec + rec));
    }
    f += (static_cast<double>(ci.size()) / total) * best;
  }
  return f;
}

}  // namespace privwave
