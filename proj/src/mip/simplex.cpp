#include "lotus/mip/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lotus::mip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Computational form: min c'z  s.t.  G z = rhs,  lb <= z <= ub,
// z = [structural | slack | artificial].  Every model row is brought to
// a >= row first ('=' expands into >= and <=), then a'x - s = rhs, s >= 0.
struct Standardized {
  int n_struct = 0;
  int n_slack = 0;   // == rows
  int m = 0;         // rows
  std::vector<std::vector<std::pair<int, double>>> cols;  // sparse columns of G
  std::vector<double> rhs;
  std::vector<double> lb, ub;
  std::vector<double> cost;  // phase-2 cost (structural only nonzero)
  double sign = 1.0;         // +1 min, -1 if original was maximize
};

struct Eta {
  int row;
  std::vector<std::pair<int, double>> col;  // sparse w
  double pivot;
};

class Basis {
 public:
  void refactor(const Standardized& sf, const std::vector<int>& basic) {
    const int m = sf.m;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < m; ++i)
      for (const auto& [r, v] : sf.cols[basic[i]]) trips.emplace_back(r, i, v);
    Eigen::SparseMatrix<double> B(m, m);
    B.setFromTriplets(trips.begin(), trips.end());
    lu_.compute(B);
    ok_ = (lu_.info() == Eigen::Success);
    etas_.clear();
  }

  bool ok() const { return ok_; }
  size_t eta_count() const { return etas_.size(); }

  void push_eta(int row, const Eigen::VectorXd& w, double piv) {
    Eta e;
    e.row = row;
    e.pivot = piv;
    for (int i = 0; i < w.size(); ++i)
      if (i != row && std::abs(w[i]) > 1e-14) e.col.emplace_back(i, w[i]);
    etas_.push_back(std::move(e));
  }

  // solve B z = a
  void ftran(Eigen::VectorXd& v) {
    v = lu_.solve(v);
    for (const auto& e : etas_) {
      double zr = v[e.row] / e.pivot;
      if (zr != 0.0)
        for (const auto& [i, w] : e.col) v[i] -= w * zr;
      v[e.row] = zr;
    }
  }

  // solve B' y = c
  void btran(Eigen::VectorXd& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->row];
      for (const auto& [i, w] : it->col) acc -= w * v[i];
      v[it->row] = acc / it->pivot;
    }
    v = lu_.adjoint().solve(v);
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  std::vector<Eta> etas_;
  bool ok_ = false;
};

Standardized standardize(const MipModel& model) {
  Standardized sf;
  sf.n_struct = model.num_vars();
  sf.sign = (model.sense == Sense::Maximize) ? -1.0 : 1.0;

  // expand '=' into >= / <=, then flip <= rows
  std::vector<std::pair<const LinearConstraint*, double>> rows;  // (row, flip)
  for (const auto& c : model.constraints) {
    switch (c.sense) {
      case RowSense::GreaterEqual: rows.emplace_back(&c, 1.0); break;
      case RowSense::LessEqual: rows.emplace_back(&c, -1.0); break;
      case RowSense::Equal:
        rows.emplace_back(&c, 1.0);
        rows.emplace_back(&c, -1.0);
        break;
    }
  }
  sf.m = static_cast<int>(rows.size());
  sf.n_slack = sf.m;

  sf.cols.assign(sf.n_struct + sf.n_slack, {});
  sf.rhs.resize(sf.m);
  for (int i = 0; i < sf.m; ++i) {
    const auto& [row, flip] = rows[i];
    for (const auto& [j, a] : row->coefficients) sf.cols[j].emplace_back(i, flip * a);
    sf.rhs[i] = flip * row->rhs;
    sf.cols[sf.n_struct + i].emplace_back(i, -1.0);  // a'x - s = rhs, s >= 0
  }

  sf.lb.resize(sf.n_struct + sf.n_slack);
  sf.ub.resize(sf.n_struct + sf.n_slack);
  sf.cost.assign(sf.n_struct + sf.n_slack, 0.0);
  for (int j = 0; j < sf.n_struct; ++j) {
    sf.lb[j] = model.variables[j].lower;
    sf.ub[j] = model.variables[j].upper;
    sf.cost[j] = sf.sign * model.objective[j];
  }
  for (int j = sf.n_struct; j < sf.n_struct + sf.n_slack; ++j) {
    sf.lb[j] = 0.0;
    sf.ub[j] = kInf;
  }
  return sf;
}

enum class NbStatus : char { AtLower, AtUpper };

struct SimplexCore {
  const Standardized& sf;
  const Tolerances& tol;
  int n_total;  // including artificials
  std::vector<int> basic;                // size m
  std::vector<int> basic_pos;            // var -> basis row, -1 if nonbasic
  std::vector<NbStatus> nb_status;       // per var, valid when nonbasic
  std::vector<double> x;                 // all vars
  Basis basis;
  long degenerate_pivots = 0;
  bool bland = false;

  explicit SimplexCore(const Standardized& s, const Tolerances& t) : sf(s), tol(t) {}

  void recompute_basics() {
    const int m = sf.m;
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) r[i] = sf.rhs[i];
    for (int j = 0; j < n_total; ++j) {
      if (basic_pos[j] >= 0 || x[j] == 0.0) continue;
      for (const auto& [i, v] : sf.cols[j]) r[i] -= v * x[j];
    }
    basis.ftran(r);
    for (int i = 0; i < m; ++i) x[basic[i]] = r[i];
  }

  // returns false on iteration blowup
  bool iterate(const std::vector<double>& cost, long max_iters) {
    const int m = sf.m;
    const double dual_tol = 1e-7;
    long iters = 0;
    Eigen::VectorXd y(m), w(m);
    while (true) {
      if (++iters > max_iters)
        throw NumericalBreakdown("simplex iteration limit exceeded");
      if (basis.eta_count() >= 100) {
        basis.refactor(sf, basic);
        if (!basis.ok()) throw NumericalBreakdown("basis refactorization failed");
        recompute_basics();
      }
      // pricing
      for (int i = 0; i < m; ++i) y[i] = cost[basic[i]];
      basis.btran(y);
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < n_total; ++j) {
        if (basic_pos[j] >= 0) continue;
        if (sf.lb[j] == sf.ub[j]) continue;  // fixed, never enters
        double d = cost[j];
        for (const auto& [i, v] : sf.cols[j]) d -= y[i] * v;
        double dtol = dual_tol * (1.0 + std::abs(cost[j]));
        double score = 0.0;
        if (nb_status[j] == NbStatus::AtLower && d < -dtol) score = -d;
        else if (nb_status[j] == NbStatus::AtUpper && d > dtol) score = d;
        if (score > 0.0) {
          if (bland) { enter = j; break; }
          if (score > best) { best = score; enter = j; }
        }
      }
      if (enter < 0) return true;  // optimal for this objective

      double dir = (nb_status[enter] == NbStatus::AtLower) ? 1.0 : -1.0;
      w.setZero();
      for (const auto& [i, v] : sf.cols[enter]) w[i] = v;
      basis.ftran(w);

      // ratio test
      double t_max = sf.ub[enter] - sf.lb[enter];  // bound flip distance
      int leave = -1;
      double leave_pivot = 0.0;
      bool leave_to_upper = false;
      for (int i = 0; i < m; ++i) {
        double delta = dir * w[i];
        if (std::abs(delta) <= tol.pivot) continue;
        int bj = basic[i];
        double step;
        bool to_upper;
        if (delta > 0.0) {
          step = (x[bj] - sf.lb[bj]) / delta;
          to_upper = false;
        } else {
          if (sf.ub[bj] == kInf) continue;
          step = (sf.ub[bj] - x[bj]) / (-delta);
          to_upper = true;
        }
        if (step < -1e-12) step = 0.0;
        bool better = step < t_max - 1e-12;
        if (!better && leave >= 0 && step < t_max + 1e-12) {
          // tie: prefer bigger pivot (Bland: lowest variable index)
          if (bland ? (bj < basic[leave]) : (std::abs(w[i]) > std::abs(leave_pivot)))
            better = true;
        }
        if (better) {
          t_max = std::min(t_max, std::max(step, 0.0));
          leave = i;
          leave_pivot = w[i];
          leave_to_upper = to_upper;
        }
      }

      if (t_max == kInf) return false;  // unbounded direction

      if (leave < 0) {
        // bound flip
        for (int i = 0; i < m; ++i)
          if (w[i] != 0.0) x[basic[i]] -= dir * t_max * w[i];
        x[enter] += dir * t_max;
        nb_status[enter] = (dir > 0) ? NbStatus::AtUpper : NbStatus::AtLower;
        continue;
      }

      if (t_max <= 1e-12) {
        if (++degenerate_pivots > 2L * (m + n_total)) bland = true;
      }
      if (std::abs(leave_pivot) <= tol.pivot)
        throw NumericalBreakdown("pivot below tolerance");

      for (int i = 0; i < m; ++i)
        if (w[i] != 0.0) x[basic[i]] -= dir * t_max * w[i];
      x[enter] += dir * t_max;

      int out = basic[leave];
      x[out] = leave_to_upper ? sf.ub[out] : sf.lb[out];
      nb_status[out] = leave_to_upper ? NbStatus::AtUpper : NbStatus::AtLower;
      basic_pos[out] = -1;
      basic[leave] = enter;
      basic_pos[enter] = leave;
      basis.push_eta(leave, w, leave_pivot);
    }
  }
};

}  // namespace

LpSolution solve_lp(const MipModel& model, const Tolerances& tol) {
  model.validate();
  Standardized sf = standardize(model);
  const int m = sf.m;
  const int n_real = sf.n_struct + sf.n_slack;

  LpSolution out;
  if (m == 0) {
    // pure box problem: pick the cheaper bound per coordinate
    out.status = LpStatus::Optimal;
    out.values.resize(sf.n_struct);
    double obj = 0.0;
    for (int j = 0; j < sf.n_struct; ++j) {
      out.values[j] = (sf.cost[j] >= 0.0) ? sf.lb[j] : sf.ub[j];
      obj += sf.cost[j] * out.values[j];
    }
    out.objective = sf.sign * obj;
    return out;
  }

  // artificials: a'x - s + sign(r_i) t_i = rhs with all structurals at
  // lower bound and slacks at zero
  std::vector<double> resid(m);
  for (int i = 0; i < m; ++i) resid[i] = sf.rhs[i];
  for (int j = 0; j < sf.n_struct; ++j)
    if (sf.lb[j] != 0.0)
      for (const auto& [i, v] : sf.cols[j]) resid[i] -= v * sf.lb[j];

  sf.cols.resize(n_real + m);
  sf.lb.resize(n_real + m, 0.0);
  sf.ub.resize(n_real + m, kInf);
  sf.cost.resize(n_real + m, 0.0);
  for (int i = 0; i < m; ++i)
    sf.cols[n_real + i].emplace_back(i, resid[i] >= 0.0 ? 1.0 : -1.0);

  SimplexCore core(sf, tol);
  core.n_total = n_real + m;
  core.basic.resize(m);
  core.basic_pos.assign(core.n_total, -1);
  core.nb_status.assign(core.n_total, NbStatus::AtLower);
  core.x.assign(core.n_total, 0.0);
  for (int j = 0; j < sf.n_struct; ++j) core.x[j] = sf.lb[j];
  for (int i = 0; i < m; ++i) {
    core.basic[i] = n_real + i;
    core.basic_pos[n_real + i] = i;
    core.x[n_real + i] = std::abs(resid[i]);
  }
  core.basis.refactor(sf, core.basic);
  if (!core.basis.ok()) throw NumericalBreakdown("initial basis factorization failed");

  const long max_iters = 2000 + 200L * (m + core.n_total);

  // phase 1: min sum of artificials
  std::vector<double> phase1_cost(core.n_total, 0.0);
  for (int i = 0; i < m; ++i) phase1_cost[n_real + i] = 1.0;
  core.iterate(phase1_cost, max_iters);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) infeas += core.x[n_real + i];
  if (infeas > tol.feasibility) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // lock artificials at zero and optimize the real objective
  for (int i = 0; i < m; ++i) sf.ub[n_real + i] = 0.0;
  core.degenerate_pivots = 0;
  core.bland = false;
  bool bounded = core.iterate(sf.cost, max_iters);
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  // fresh solve for the final basics
  core.basis.refactor(sf, core.basic);
  if (!core.basis.ok()) throw NumericalBreakdown("final basis factorization failed");
  core.recompute_basics();

  out.status = LpStatus::Optimal;
  out.values.assign(core.x.begin(), core.x.begin() + sf.n_struct);
  for (int j = 0; j < sf.n_struct; ++j) {
    out.values[j] = std::clamp(out.values[j], model.variables[j].lower - tol.feasibility,
                               model.variables[j].upper + tol.feasibility);
  }
  double obj = 0.0;
  for (int j = 0; j < sf.n_struct; ++j) obj += model.objective[j] * out.values[j];
  out.objective = obj;
  return out;
}

}  // namespace lotus::mip
