#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lotus::mip {

enum class VarKind { Continuous, Integer, Binary };
enum class Sense { Minimize, Maximize };
enum class RowSense { GreaterEqual, LessEqual, Equal };

struct Tolerances {
  double feasibility = 1e-6;
  double integrality = 1e-6;
  double pivot = 1e-9;
};

struct VariableSpec {
  double lower = 0.0;
  double upper = 0.0;
  VarKind kind = VarKind::Continuous;

  static VariableSpec continuous(double lo, double hi) { return {lo, hi, VarKind::Continuous}; }
  static VariableSpec integer(double lo, double hi) { return {lo, hi, VarKind::Integer}; }
  static VariableSpec binary() { return {0.0, 1.0, VarKind::Binary}; }

  bool is_integral() const { return kind != VarKind::Continuous; }
};

struct LinearConstraint {
  // sparse row: variable index -> coefficient, no duplicates
  std::map<int, double> coefficients;
  RowSense sense = RowSense::GreaterEqual;
  double rhs = 0.0;
};

class MalformedModel : public std::runtime_error {
 public:
  explicit MalformedModel(const std::string& what) : std::runtime_error(what) {}
};

class NumericalBreakdown : public std::runtime_error {
 public:
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

struct MipModel {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<VariableSpec> variables;
  std::vector<LinearConstraint> constraints;

  int num_vars() const { return static_cast<int>(variables.size()); }

  void validate() const {
    if (objective.size() != variables.size())
      throw MalformedModel("objective length != variable count");
    for (const auto& v : variables) {
      if (!(v.lower <= v.upper)) throw MalformedModel("variable has lower > upper");
      if (!std::isfinite(v.lower) || !std::isfinite(v.upper))
        throw MalformedModel("variable bound not finite");
      if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0))
        throw MalformedModel("binary variable bounds must lie within [0,1]");
    }
    for (const auto& c : constraints) {
      if (c.coefficients.empty()) throw MalformedModel("constraint without coefficients");
      for (const auto& [j, a] : c.coefficients) {
        (void)a;
        if (j < 0 || j >= num_vars()) throw MalformedModel("constraint index out of range");
      }
    }
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class MipStatus { Optimal, Feasible, Infeasible, BudgetExhausted };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
};

struct MipSolution {
  MipStatus status = MipStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  double bound = 0.0;  // best tree bound, in the model's own sense
  long nodes_explored = 0;
};

struct SolveBudget {
  double time_limit_s = 1e18;
  long node_limit = 1000000000L;
  double rel_gap = 1e-6;
};

// every variable kind set to continuous, bounds unchanged
MipModel relax_integrality(const MipModel& model);

// residual of a row at point x: positive means satisfied with slack
double row_activity(const LinearConstraint& row, const std::vector<double>& x);

inline bool empty_domain(const MipModel& model) {
  for (const auto& v : model.variables)
    if (v.lower > v.upper) return true;
  return false;
}
bool point_feasible(const MipModel& model, const std::vector<double>& x, double tol);

// debug dump, one variable / constraint per line
void dump_model(const MipModel& model, const std::string& path);

}  // namespace lotus::mip
