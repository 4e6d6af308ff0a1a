#include "lotus/bench/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace lotus::bench {

namespace {

// Midranks of |d| (1-based). Also accumulates sum of (t^3 - t) over tie groups.
std::vector<double> midranks(const std::vector<double>& abs_d, double* tie_term) {
  const std::size_t n = abs_d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return abs_d[a] < abs_d[b]; });

  std::vector<double> rank(n, 0.0);
  *tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    const double t = static_cast<double>(j - i + 1);
    *tie_term += t * t * t - t;
    i = j + 1;
  }
  return rank;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences) {
  std::vector<double> d;
  for (double v : differences)
    if (v != 0.0) d.push_back(v);
  if (d.empty()) throw AllZeroDifferences();

  const std::size_t n = d.size();
  std::vector<double> abs_d(n);
  for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::fabs(d[i]);

  double tie_term = 0.0;
  const std::vector<double> rank = midranks(abs_d, &tie_term);

  double w_plus = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank[i];
    if (d[i] > 0.0) w_plus += rank[i];
  }
  const double w_minus = total - w_plus;
  const double w = std::min(w_plus, w_minus);

  WilcoxonResult res;
  res.statistic = w;
  res.n_used = static_cast<int>(n);

  if (n < 10) {
    // Exact: enumerate every sign assignment over the observed rank multiset.
    res.exact = true;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::uint64_t count = 0;
    const double eps = 1e-9;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      double wp = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) wp += rank[i];
      if (std::min(wp, total - wp) <= w + eps) ++count;
    }
    res.p_value = static_cast<double>(count) / static_cast<double>(patterns);
  } else {
    res.exact = false;
    const double dn = static_cast<double>(n);
    const double mean = dn * (dn + 1.0) / 4.0;
    const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (w - mean + 0.5) / std::sqrt(var);
    res.p_value = std::min(1.0, 2.0 * normal_cdf(z));
  }
  return res;
}

}  // namespace lotus::bench
