#pragma once

#include <stdexcept>
#include <vector>

namespace lotus::bench {

class AllZeroDifferences : public std::runtime_error {
 public:
  AllZeroDifferences() : std::runtime_error("all differences are zero") {}
};

struct WilcoxonResult {
  double statistic = 0.0;  // W = min(W+, W-)
  double p_value = 1.0;    // two-sided
  int n_used = 0;          // nonzero differences
  bool exact = false;      // exact sign-pattern enumeration vs normal approximation
};

// Wilcoxon signed-rank test. Zero differences are dropped, |d| ranked with
// midranks for ties. Exact enumeration of all 2^n sign patterns for n < 10,
// normal approximation with tie-corrected variance and continuity
// correction otherwise.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences);

}  // namespace lotus::bench
