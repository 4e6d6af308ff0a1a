#include "lotus/mip/branch_bound.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <vector>

#include "lotus/mip/simplex.hpp"

namespace lotus::mip {
namespace {

struct BoundChange {
  std::shared_ptr<const BoundChange> parent;
  int var;
  double lower, upper;
};

struct Node {
  double bound;  // LP value of this node's relaxation (minimization)
  long seq;
  std::shared_ptr<const BoundChange> changes;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

void apply_changes(MipModel& model, const BoundChange* c) {
  for (; c != nullptr; c = c->parent.get()) {
    auto& v = model.variables[c->var];
    v.lower = std::max(v.lower, c->lower);
    v.upper = std::min(v.upper, c->upper);
  }
}

double rel_gap(double obj, double bound) {
  return std::abs(obj - bound) / std::max(std::abs(obj), 1e-10);
}

}  // namespace

MipSolution solve_mip(const MipModel& model, const SolveBudget& budget, const Tolerances& tol) {
  model.validate();
  const bool maximize = (model.sense == Sense::Maximize);
  const double sgn = maximize ? -1.0 : 1.0;

  // internal minimization throughout
  MipModel work = model;
  if (maximize) {
    work.sense = Sense::Minimize;
    for (auto& c : work.objective) c = -c;
  }

  std::vector<int> int_vars;
  for (int j = 0; j < work.num_vars(); ++j)
    if (work.variables[j].is_integral()) int_vars.push_back(j);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MipSolution out;
  double incumbent = std::numeric_limits<double>::infinity();
  std::vector<double> incumbent_x;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  long nodes = 0;
  double root_bound = -std::numeric_limits<double>::infinity();
  bool any_lp_feasible = false;
  bool exhausted = false;

  open.push(Node{-std::numeric_limits<double>::infinity(), seq++, nullptr});

  while (!open.empty()) {
    double best_open = open.top().bound;
    if (any_lp_feasible && incumbent < std::numeric_limits<double>::infinity()) {
      if (best_open >= incumbent || rel_gap(incumbent, best_open) <= budget.rel_gap) break;
    }
    if (nodes >= budget.node_limit || elapsed() >= budget.time_limit_s) {
      exhausted = true;
      break;
    }

    Node node = open.top();
    open.pop();
    ++nodes;

    MipModel sub = work;
    apply_changes(sub, node.changes.get());
    bool empty_domain = false;
    for (const auto& v : sub.variables)
      if (v.lower > v.upper) { empty_domain = true; break; }
    if (empty_domain) continue;

    LpSolution lp = solve_lp(relax_integrality(sub), tol);
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded)
      throw MalformedModel("LP relaxation unbounded: model violates finite-bound contract");
    any_lp_feasible = true;
    double bound = std::max(lp.objective, node.bound);
    if (node.changes == nullptr) root_bound = bound;
    if (bound >= incumbent - 1e-9) continue;

    // pick the most fractional integer variable
    int branch_var = -1;
    double best_frac = tol.integrality;
    for (int j : int_vars) {
      double f = lp.values[j] - std::floor(lp.values[j]);
      double dist = std::min(f, 1.0 - f);
      if (dist > best_frac + 1e-12) {
        best_frac = dist;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      // integral: candidate incumbent
      std::vector<double> x = lp.values;
      for (int j : int_vars) x[j] = std::round(x[j]);
      if (point_feasible(sub, x, tol.feasibility)) {
        double obj = 0.0;
        for (int j = 0; j < work.num_vars(); ++j) obj += work.objective[j] * x[j];
        if (obj < incumbent) {
          incumbent = obj;
          incumbent_x = std::move(x);
        }
      }
      continue;
    }

    double v = lp.values[branch_var];
    auto down = std::make_shared<BoundChange>(BoundChange{
        node.changes, branch_var, -std::numeric_limits<double>::infinity(), std::floor(v)});
    auto up = std::make_shared<BoundChange>(BoundChange{
        node.changes, branch_var, std::ceil(v), std::numeric_limits<double>::infinity()});
    open.push(Node{bound, seq++, std::move(down)});
    open.push(Node{bound, seq++, std::move(up)});
  }

  double tree_bound = open.empty() ? incumbent : open.top().bound;
  if (!std::isfinite(tree_bound)) tree_bound = std::isfinite(root_bound) ? root_bound : incumbent;

  out.nodes_explored = nodes;
  if (incumbent < std::numeric_limits<double>::infinity()) {
    out.values = incumbent_x;
    out.objective = sgn * incumbent;
    tree_bound = std::min(tree_bound, incumbent);
    out.bound = sgn * tree_bound;
    out.status = exhausted ? MipStatus::Feasible : MipStatus::Optimal;
  } else if (exhausted) {
    out.status = MipStatus::BudgetExhausted;
    out.bound = sgn * tree_bound;
  } else {
    out.status = MipStatus::Infeasible;
  }
  return out;
}

}  // namespace lotus::mip
