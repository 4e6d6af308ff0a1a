#include "lotus/reduction/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "lotus/mip/simplex.hpp"

namespace lotus::reduction {
namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

}  // namespace

double compute_lp_proxy(const smip::TwoStageProblem& p, int s) {
  std::vector<double> zero(p.n(), 0.0);
  auto sub = smip::build_subproblem(p, s, zero);
  auto sol = mip::solve_lp(mip::relax_integrality(sub));
  if (sol.status != mip::LpStatus::Optimal)
    throw std::runtime_error("scenario LP proxy solve failed (scenario " + std::to_string(s) + ")");
  return sol.objective;
}

std::vector<std::vector<double>> build_features(const std::vector<std::vector<double>>& xi,
                                                const std::vector<double>& proxies, double omega) {
  const size_t S = xi.size();
  if (S == 0) throw EmptyScenarioSet();
  if (proxies.size() != S) throw std::invalid_argument("xi/proxy length mismatch");
  const size_t D = xi[0].size();
  for (const auto& v : xi)
    if (v.size() != D) throw std::invalid_argument("xi dimensionality differs across scenarios");

  auto zscore = [&](auto get) {
    double mean = 0.0;
    for (size_t s = 0; s < S; ++s) mean += get(s);
    mean /= static_cast<double>(S);
    double var = 0.0;
    for (size_t s = 0; s < S; ++s) {
      double d = get(s) - mean;
      var += d * d;
    }
    var /= static_cast<double>(S);  // population variance
    double sd = std::sqrt(var);
    std::vector<double> out(S, 0.0);
    if (sd > 0.0)
      for (size_t s = 0; s < S; ++s) out[s] = (get(s) - mean) / sd;
    return out;
  };

  std::vector<std::vector<double>> features(S, std::vector<double>(D + 1, 0.0));
  for (size_t d = 0; d < D; ++d) {
    auto col = zscore([&](size_t s) { return xi[s][d]; });
    for (size_t s = 0; s < S; ++s) features[s][d] = col[s];
  }
  auto cost = zscore([&](size_t s) { return proxies[s]; });
  for (size_t s = 0; s < S; ++s) features[s][D] = omega * cost[s];
  return features;
}

ReductionResult fast_forward_select(const std::vector<std::vector<double>>& features,
                                    const std::vector<double>& probabilities, int m) {
  const int S = static_cast<int>(features.size());
  if (S == 0) throw EmptyScenarioSet();
  if (m < 1 || m > S) throw InvalidTargetSize("target size must be in [1, |S|]");

  // pairwise distances
  std::vector<std::vector<double>> dist(S, std::vector<double>(S, 0.0));
  for (int i = 0; i < S; ++i)
    for (int j = i + 1; j < S; ++j) dist[i][j] = dist[j][i] = std::sqrt(sq_dist(features[i], features[j]));

  ReductionResult res;
  std::vector<char> selected(S, 0);
  // min distance from each scenario to the selected set
  std::vector<double> min_dist(S, std::numeric_limits<double>::infinity());

  for (int step = 0; step < m; ++step) {
    int best_u = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int u = 0; u < S; ++u) {
      if (selected[u]) continue;
      double val = 0.0;
      for (int k = 0; k < S; ++k) {
        if (selected[k] || k == u) continue;
        val += probabilities[k] * std::min(min_dist[k], dist[k][u]);
      }
      if (val < best_val) {  // strict improvement only: lowest index wins ties
        best_val = val;
        best_u = u;
      }
    }
    selected[best_u] = 1;
    res.selected.push_back(best_u);
    res.greedy_distances.push_back(best_val);
    for (int k = 0; k < S; ++k) min_dist[k] = std::min(min_dist[k], dist[k][best_u]);
  }

  // re-partition: nearest selected representative, lowest index on ties
  res.mapping.assign(S, -1);
  res.aggregated_prob.assign(res.selected.size(), 0.0);
  std::vector<int> sorted_sel = res.selected;
  std::sort(sorted_sel.begin(), sorted_sel.end());
  for (int i = 0; i < S; ++i) {
    if (selected[i]) {
      res.mapping[i] = i;
      continue;
    }
    int rep = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int s : sorted_sel) {
      if (dist[i][s] < best) {
        best = dist[i][s];
        rep = s;
      }
    }
    res.mapping[i] = rep;
  }
  for (int i = 0; i < S; ++i) {
    int rep = res.mapping[i];
    for (size_t j = 0; j < res.selected.size(); ++j)
      if (res.selected[j] == rep) {
        res.aggregated_prob[j] += probabilities[i];
        break;
      }
  }
  return res;
}

std::pair<smip::TwoStageProblem, ReductionResult> reduce(const smip::TwoStageProblem& p,
                                                         double fraction, double omega) {
  p.validate();
  if (!(fraction > 0.0) || fraction > 1.0)
    throw InvalidTargetSize("fraction must be in (0, 1]");
  const int S = p.num_scenarios();
  const int m = std::max(1, static_cast<int>(std::lround(fraction * S)));

  std::vector<std::vector<double>> xi(S);
  std::vector<double> prob(S), proxies(S);
  for (int s = 0; s < S; ++s) {
    xi[s] = p.scenarios[s].xi;
    prob[s] = p.scenarios[s].probability;
    proxies[s] = compute_lp_proxy(p, s);
  }
  if (omega <= 0.0) omega = static_cast<double>(std::max<size_t>(1, xi[0].size()));

  auto features = build_features(xi, proxies, omega);
  auto res = fast_forward_select(features, prob, m);

  smip::TwoStageProblem reduced = p;
  reduced.scenarios.clear();
  for (size_t j = 0; j < res.selected.size(); ++j) {
    smip::ScenarioData sc = p.scenarios[res.selected[j]];
    sc.probability = res.aggregated_prob[j];
    reduced.scenarios.push_back(std::move(sc));
  }
  reduced.validate();
  return {std::move(reduced), std::move(res)};
}

void serialize_reduction(const ReductionResult& r, std::ostream& os) {
  char buf[64];
  auto fmt = [&](double v) { std::snprintf(buf, sizeof buf, "%.17g", v); return std::string(buf); };
  os << "reduction v1 " << r.mapping.size() << " " << r.selected.size() << "\n";
  os << "selected";
  for (int s : r.selected) os << " " << s;
  os << "\nmapping";
  for (int s : r.mapping) os << " " << s;
  os << "\nprob";
  for (double v : r.aggregated_prob) os << " " << fmt(v);
  os << "\ndist";
  for (double v : r.greedy_distances) os << " " << fmt(v);
  os << "\nend\n";
}

ReductionResult parse_reduction(std::istream& is) {
  std::string magic, version, tag;
  size_t S, M;
  if (!(is >> magic >> version >> S >> M) || magic != "reduction" || version != "v1")
    throw std::runtime_error("not a reduction file");
  ReductionResult r;
  is >> tag;
  if (tag != "selected") throw std::runtime_error("expected 'selected'");
  r.selected.resize(M);
  for (auto& s : r.selected) is >> s;
  is >> tag;
  if (tag != "mapping") throw std::runtime_error("expected 'mapping'");
  r.mapping.resize(S);
  for (auto& s : r.mapping) is >> s;
  is >> tag;
  if (tag != "prob") throw std::runtime_error("expected 'prob'");
  r.aggregated_prob.resize(M);
  for (auto& v : r.aggregated_prob) is >> v;
  is >> tag;
  if (tag != "dist") throw std::runtime_error("expected 'dist'");
  r.greedy_distances.resize(M);
  for (auto& v : r.greedy_distances) is >> v;
  is >> tag;
  if (!is || tag != "end") throw std::runtime_error("missing trailer");
  return r;
}

}  // namespace lotus::reduction
