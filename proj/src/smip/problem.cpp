#include "lotus/smip/problem.hpp"

#include <algorithm>
#include <cmath>

namespace lotus::smip {

using mip::LinearConstraint;
using mip::MipModel;
using mip::RowSense;
using mip::VariableSpec;

void TwoStageProblem::validate() const {
  if (first_stage_cost.size() != first_stage_vars.size())
    throw DimensionMismatch("first-stage cost/variable length mismatch");
  if (scenarios.empty()) throw DimensionMismatch("no scenarios");
  double mass = 0.0;
  for (const auto& sc : scenarios) {
    if (sc.probability <= 0.0) throw DimensionMismatch("scenario probability must be > 0");
    mass += sc.probability;
    if (sc.recourse_cost.size() != second_stage_vars.size())
      throw DimensionMismatch("recourse cost length != second-stage variable count");
    if (sc.row_sense.size() != sc.rhs.size())
      throw DimensionMismatch("scenario row sense/rhs length mismatch");
    const int rows = static_cast<int>(sc.rhs.size());
    for (const auto& e : sc.tech)
      if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= n())
        throw DimensionMismatch("technology entry out of range");
    for (const auto& e : sc.recourse)
      if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= k())
        throw DimensionMismatch("recourse entry out of range");
    if (coupling == Coupling::InequalityNac && !sc.tech.empty())
      throw DimensionMismatch("inequality coupling stores coupling implicitly; T_s must be empty");
  }
  if (std::abs(mass - 1.0) > 1e-9) throw DimensionMismatch("scenario probabilities must sum to 1");
  if (coupling == Coupling::InequalityNac && k() < n())
    throw DimensionMismatch("inequality coupling needs a local first-stage copy block");
  for (const auto& v : first_stage_vars)
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      throw DimensionMismatch("first-stage bounds must be finite");
  for (const auto& v : second_stage_vars)
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
      throw DimensionMismatch("second-stage bounds must be finite");
}

MipModel build_dep(const TwoStageProblem& p) {
  p.validate();
  const int n = p.n(), k = p.k(), S = p.num_scenarios();
  MipModel m;
  m.sense = p.sense;
  m.variables = p.first_stage_vars;
  m.objective = p.first_stage_cost;
  for (int s = 0; s < S; ++s) {
    const auto& sc = p.scenarios[s];
    m.variables.insert(m.variables.end(), p.second_stage_vars.begin(), p.second_stage_vars.end());
    for (int j = 0; j < k; ++j) m.objective.push_back(sc.probability * sc.recourse_cost[j]);
  }
  m.constraints = p.first_stage_cons;
  for (int s = 0; s < S; ++s) {
    const auto& sc = p.scenarios[s];
    const int off = dep_block_offset(p, s);
    std::vector<LinearConstraint> rows(sc.rhs.size());
    for (size_t r = 0; r < sc.rhs.size(); ++r) {
      rows[r].sense = sc.row_sense[r];
      rows[r].rhs = sc.rhs[r];
    }
    for (const auto& e : sc.tech) rows[e.row].coefficients[e.col] += e.value;
    for (const auto& e : sc.recourse) rows[e.row].coefficients[off + e.col] += e.value;
    for (auto& row : rows)
      if (!row.coefficients.empty()) m.constraints.push_back(std::move(row));
    if (p.coupling == Coupling::InequalityNac) {
      for (int j = 0; j < n; ++j) {
        LinearConstraint nac;
        nac.coefficients[off + j] = 1.0;
        nac.coefficients[j] = -1.0;
        nac.sense = RowSense::LessEqual;
        nac.rhs = 0.0;
        m.constraints.push_back(std::move(nac));
      }
    }
  }
  return m;
}

MipModel build_master(const TwoStageProblem& p, const std::vector<std::vector<double>>& lambda) {
  const int n = p.n();
  if (lambda.size() != p.scenarios.size())
    throw DimensionMismatch("one multiplier vector per scenario required");
  MipModel m;
  m.sense = p.sense;
  m.variables = p.first_stage_vars;
  m.objective = p.first_stage_cost;
  for (const auto& ls : lambda) {
    if (static_cast<int>(ls.size()) != n)
      throw DimensionMismatch("multiplier length != first-stage dimension");
    for (int j = 0; j < n; ++j) m.objective[j] -= ls[j];
  }
  m.constraints = p.first_stage_cons;
  return m;
}

MipModel build_subproblem(const TwoStageProblem& p, int s, const std::vector<double>& lambda_s) {
  const int n = p.n(), k = p.k();
  if (s < 0 || s >= p.num_scenarios()) throw DimensionMismatch("scenario index out of range");
  if (static_cast<int>(lambda_s.size()) != n)
    throw DimensionMismatch("multiplier length != first-stage dimension");
  const auto& sc = p.scenarios[s];
  MipModel m;
  m.sense = p.sense;

  if (p.coupling == Coupling::EqualityNac) {
    // variables: [x_s copy | y_s]
    m.variables = p.first_stage_vars;
    m.objective = lambda_s;
    m.variables.insert(m.variables.end(), p.second_stage_vars.begin(), p.second_stage_vars.end());
    for (int j = 0; j < k; ++j) m.objective.push_back(sc.probability * sc.recourse_cost[j]);
    m.constraints = p.first_stage_cons;
    std::vector<LinearConstraint> rows(sc.rhs.size());
    for (size_t r = 0; r < sc.rhs.size(); ++r) {
      rows[r].sense = sc.row_sense[r];
      rows[r].rhs = sc.rhs[r];
    }
    for (const auto& e : sc.tech) rows[e.row].coefficients[e.col] += e.value;
    for (const auto& e : sc.recourse) rows[e.row].coefficients[n + e.col] += e.value;
    for (auto& row : rows)
      if (!row.coefficients.empty()) m.constraints.push_back(std::move(row));
  } else {
    // variables: second-stage block only; copies are its leading n coordinates
    m.variables = p.second_stage_vars;
    m.objective.resize(k);
    for (int j = 0; j < k; ++j) m.objective[j] = sc.probability * sc.recourse_cost[j];
    for (int j = 0; j < n; ++j) m.objective[j] += lambda_s[j];
    std::vector<LinearConstraint> rows(sc.rhs.size());
    for (size_t r = 0; r < sc.rhs.size(); ++r) {
      rows[r].sense = sc.row_sense[r];
      rows[r].rhs = sc.rhs[r];
    }
    for (const auto& e : sc.recourse) rows[e.row].coefficients[e.col] += e.value;
    for (auto& row : rows)
      if (!row.coefficients.empty()) m.constraints.push_back(std::move(row));
  }
  return m;
}

MipModel build_restricted_dep(const TwoStageProblem& p, const std::vector<double>& x_tilde,
                              double eps) {
  if (static_cast<int>(x_tilde.size()) != p.n())
    throw DimensionMismatch("x_tilde length != first-stage dimension");
  if (eps < 0.0) throw DimensionMismatch("eps must be >= 0");
  MipModel m = build_dep(p);
  for (int j = 0; j < p.n(); ++j) {
    double lo = std::min((1.0 - eps) * x_tilde[j], (1.0 + eps) * x_tilde[j]);
    double hi = std::max((1.0 - eps) * x_tilde[j], (1.0 + eps) * x_tilde[j]);
    auto& v = m.variables[j];
    v.lower = std::max(v.lower, lo);
    v.upper = std::min(v.upper, hi);
    if (v.is_integral()) {
      v.lower = std::ceil(v.lower - 1e-9);
      v.upper = std::floor(v.upper + 1e-9);
    }
  }
  return m;
}

std::vector<double> subproblem_first_stage(const TwoStageProblem& p,
                                           const std::vector<double>& values) {
  return std::vector<double>(values.begin(), values.begin() + p.n());
}

}  // namespace lotus::smip
