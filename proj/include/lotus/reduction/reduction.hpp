#pragma once

#include <iosfwd>
#include <vector>

#include "lotus/smip/problem.hpp"

namespace lotus::reduction {

class EmptyScenarioSet : public std::runtime_error {
 public:
  EmptyScenarioSet() : std::runtime_error("empty scenario set") {}
};

class InvalidTargetSize : public std::runtime_error {
 public:
  explicit InvalidTargetSize(const std::string& what) : std::runtime_error(what) {}
};

struct ReductionResult {
  std::vector<int> selected;              // S', in selection order
  std::vector<int> mapping;               // rho: original index -> original index of its representative
  std::vector<double> aggregated_prob;    // p' per selected scenario (selection order)
  std::vector<double> greedy_distances;   // aggregated distance after each greedy pick
};

// LP value of scenario s solved individually (non-anticipativity ignored,
// integrality relaxed).
double compute_lp_proxy(const smip::TwoStageProblem& p, int s);

// Per-scenario feature vectors: z-scored xi coordinates followed by the
// z-scored LP proxy scaled by omega. Population std; zero-variance
// coordinates map to 0.
std::vector<std::vector<double>> build_features(const std::vector<std::vector<double>>& xi,
                                                const std::vector<double>& proxies, double omega);

// Greedy fast forward selection of m representatives minimizing the
// probability-weighted distance of discarded scenarios to the selected set.
// Ties break toward the lowest scenario index.
ReductionResult fast_forward_select(const std::vector<std::vector<double>>& features,
                                    const std::vector<double>& probabilities, int m);

// Full Step-2 pipeline: proxies, features, selection, and the reduced
// problem with aggregated probabilities. omega <= 0 selects the default
// (the xi dimension).
std::pair<smip::TwoStageProblem, ReductionResult> reduce(const smip::TwoStageProblem& p,
                                                         double fraction, double omega = -1.0);

void serialize_reduction(const ReductionResult& r, std::ostream& os);
ReductionResult parse_reduction(std::istream& is);

}  // namespace lotus::reduction
