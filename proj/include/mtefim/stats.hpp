#pragma once

// Small statistics toolkit: average-rank ranking, Spearman rank correlation,
// and the two-sample Wilcoxon rank-sum (Mann-Whitney) test with the normal
// approximation and tie correction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace mtefim {

// Ranks of `values` in ascending order, 1-based; exact-value ties receive
// the average of the positions they occupy.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end < n && values[order[end]] == values[order[pos]]) ++end;
    const double avg = (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t t = pos; t < end; ++t) ranks[order[t]] = avg;
    pos = end;
  }
  return ranks;
}

// Spearman rank correlation with average-rank tie handling: the Pearson
// correlation of the two rank vectors.  Returns NaN when either input is
// constant (the coefficient is undefined there).
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("spearman: inputs must have equal length");
  if (x.size() < 2)
    throw std::invalid_argument("spearman: need at least two observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const std::size_t n = rx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

// Standard normal survival helpers for the rank-sum test.
inline double normal_two_sided_p(double z) {
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

struct WilcoxonResult {
  double u_statistic = 0.0; // U of the first sample
  double z = 0.0;
  double p_value = 1.0;
  // '+' : first sample significantly greater, '-' : significantly smaller,
  // '=' : no significant difference at the given alpha.
  char verdict = '=';
};

// Two-sample Wilcoxon rank-sum test (Mann-Whitney U) via the normal
// approximation with tie correction and no continuity correction.  The
// verdict is reported from the first sample's perspective.
inline WilcoxonResult wilcoxon_rank_sum(std::span<const double> a,
                                        std::span<const double> b,
                                        double alpha = 0.05) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("wilcoxon: samples must be non-empty");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("wilcoxon: alpha must lie in (0, 1)");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
  WilcoxonResult res;
  res.u_statistic =
      rank_sum_a - static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;

  // Tie correction: sum of (t^3 - t) over groups of tied values.
  std::vector<double> sorted(pooled);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos;
    while (end < n && sorted[end] == sorted[pos]) ++end;
    const auto t = static_cast<double>(end - pos);
    tie_term += t * t * t - t;
    pos = end;
  }

  const double mean_u = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
  const double nn = static_cast<double>(n);
  const double var_u = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var_u <= 0.0) {
    // Every pooled value identical: the samples cannot differ.
    res.z = 0.0;
    res.p_value = 1.0;
    res.verdict = '=';
    return res;
  }
  res.z = (res.u_statistic - mean_u) / std::sqrt(var_u);
  res.p_value = normal_two_sided_p(res.z);
  if (res.p_value < alpha)
    res.verdict = res.u_statistic > mean_u ? '+' : '-';
  return res;
}

} // namespace mtefim
