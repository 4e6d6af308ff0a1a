#include "lotus/mip/model.hpp"

#include <cstdio>
#include <fstream>

namespace lotus::mip {

MipModel relax_integrality(const MipModel& model) {
  MipModel relaxed = model;
  for (auto& v : relaxed.variables) v.kind = VarKind::Continuous;
  return relaxed;
}

double row_activity(const LinearConstraint& row, const std::vector<double>& x) {
  double a = 0.0;
  for (const auto& [j, v] : row.coefficients) a += v * x[static_cast<size_t>(j)];
  return a;
}

bool point_feasible(const MipModel& model, const std::vector<double>& x, double tol) {
  if (x.size() != model.variables.size()) return false;
  for (size_t j = 0; j < x.size(); ++j) {
    const auto& v = model.variables[j];
    if (x[j] < v.lower - tol || x[j] > v.upper + tol) return false;
    if (v.is_integral() && std::abs(x[j] - std::round(x[j])) > tol) return false;
  }
  for (const auto& c : model.constraints) {
    double a = row_activity(c, x);
    switch (c.sense) {
      case RowSense::GreaterEqual: if (a < c.rhs - tol) return false; break;
      case RowSense::LessEqual: if (a > c.rhs + tol) return false; break;
      case RowSense::Equal: if (std::abs(a - c.rhs) > tol) return false; break;
    }
  }
  return true;
}

void dump_model(const MipModel& model, const std::string& path) {
  std::ofstream os(path);
  os << "mipmodel v1 " << (model.sense == Sense::Minimize ? "min" : "max") << " "
     << model.num_vars() << " " << model.constraints.size() << "\n";
  char buf[64];
  auto fmt = [&](double v) { std::snprintf(buf, sizeof buf, "%.17g", v); return std::string(buf); };
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.variables[j];
    const char* kind = v.kind == VarKind::Continuous ? "c" : (v.kind == VarKind::Integer ? "i" : "b");
    os << "var " << j << " " << fmt(v.lower) << " " << fmt(v.upper) << " " << kind << " "
       << fmt(model.objective[j]) << "\n";
  }
  for (const auto& c : model.constraints) {
    os << "con";
    for (const auto& [j, a] : c.coefficients) os << " " << j << ":" << fmt(a);
    const char* s = c.sense == RowSense::GreaterEqual ? ">=" : (c.sense == RowSense::LessEqual ? "<=" : "=");
    os << " " << s << " " << fmt(c.rhs) << "\n";
  }
}

}  // namespace lotus::mip
