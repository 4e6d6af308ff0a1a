#include "lotus/dual/dual.hpp"

#include <algorithm>
#include <cmath>

#include "lotus/mip/branch_bound.hpp"

namespace lotus::dual {

namespace {

double elapsed_s(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

mip::SolveBudget sub_budget(const SubgradientConfig& cfg) {
  mip::SolveBudget b;
  b.time_limit_s = cfg.subproblem_time_s;
  b.rel_gap = cfg.subproblem_gap;
  return b;
}

}  // namespace

DualEvaluation evaluate_dual(const smip::TwoStageProblem& p, const Multipliers& lambda,
                             const SubgradientConfig& cfg) {
  if (p.sense != mip::Sense::Minimize)
    throw smip::DimensionMismatch("dual engine expects a minimization problem");
  const mip::SolveBudget budget = sub_budget(cfg);

  DualEvaluation eval;
  mip::MipModel master = smip::build_master(p, lambda.per_scenario);
  mip::MipSolution ms = mip::solve_mip(master, budget);
  if (ms.status == mip::MipStatus::Infeasible)
    throw RecourseViolation("master problem infeasible");
  if (ms.values.empty())
    throw RecourseViolation("master problem unsolved within budget");
  eval.certified = ms.status == mip::MipStatus::Optimal;
  eval.value = ms.bound;
  eval.x_master = ms.values;

  eval.x_locals.reserve(p.num_scenarios());
  for (int s = 0; s < p.num_scenarios(); ++s) {
    mip::MipModel sub = smip::build_subproblem(p, s, lambda.per_scenario[s]);
    mip::MipSolution ss = mip::solve_mip(sub, budget);
    if (ss.status == mip::MipStatus::Infeasible)
      throw RecourseViolation("scenario " + std::to_string(s) +
                              " subproblem infeasible: relatively complete recourse violated");
    if (ss.values.empty())
      throw RecourseViolation("scenario " + std::to_string(s) + " subproblem unsolved within budget");
    eval.certified = eval.certified && ss.status == mip::MipStatus::Optimal;
    eval.value += ss.bound;
    eval.x_locals.push_back(smip::subproblem_first_stage(p, ss.values));
  }
  return eval;
}

std::vector<std::vector<double>> subgradient(const std::vector<double>& x_master,
                                             const std::vector<std::vector<double>>& x_locals) {
  std::vector<std::vector<double>> g(x_locals.size(), std::vector<double>(x_master.size(), 0.0));
  for (std::size_t s = 0; s < x_locals.size(); ++s)
    for (std::size_t j = 0; j < x_master.size(); ++j)
      g[s][j] = x_locals[s][j] - x_master[j];
  return g;
}

double subgradient_norm_sq(const std::vector<std::vector<double>>& g) {
  double total = 0.0;
  for (const auto& gs : g)
    for (double v : gs) total += v * v;
  return total;
}

double polyak_step(const DualState& state, const std::vector<std::vector<double>>& g,
                   double z_dual_current) {
  const double norm_sq = subgradient_norm_sq(g);
  if (norm_sq <= 0.0) throw ZeroSubgradient();
  if (!std::isfinite(state.best_primal)) throw MissingPrimalBound();
  return state.gamma * std::abs(state.best_primal - z_dual_current) / norm_sq;
}

Multipliers update_multipliers(const Multipliers& lambda, double alpha,
                               const std::vector<std::vector<double>>& g) {
  Multipliers next = lambda;
  for (std::size_t s = 0; s < next.per_scenario.size(); ++s)
    for (std::size_t j = 0; j < next.per_scenario[s].size(); ++j) {
      double v = next.per_scenario[s][j] + alpha * g[s][j];
      if (lambda.mode == smip::Coupling::InequalityNac) v = std::max(0.0, v);
      next.per_scenario[s][j] = v;
    }
  return next;
}

namespace {

std::optional<PrimalCandidate> solve_restricted(const smip::TwoStageProblem& p,
                                                const std::vector<double>& x_bar, double eps,
                                                double budget_s) {
  // fixing the first stage makes the deterministic equivalent separate by
  // scenario, so instead of one large MIP we solve |S| small recourse MIPs
  (void)eps;
  const int n = p.n(), S = p.num_scenarios();
  if (static_cast<int>(x_bar.size()) < n) return std::nullopt;
  std::vector<double> center(x_bar.begin(), x_bar.begin() + n);
  for (int j = 0; j < n; ++j) {
    const auto& v = p.first_stage_vars[j];
    if (v.is_integral()) center[j] = std::round(center[j]);
    center[j] = std::clamp(center[j], v.lower, v.upper);
  }
  mip::MipModel first;
  first.sense = p.sense;
  first.variables = p.first_stage_vars;
  first.objective = p.first_stage_cost;
  first.constraints = p.first_stage_cons;
  if (!mip::point_feasible(first, center, 1e-9)) return std::nullopt;

  const auto t0 = Clock::now();
  mip::SolveBudget per;
  per.time_limit_s = std::max(0.05, budget_s / std::max(1, S));
  const std::vector<double> no_lambda(n, 0.0);
  PrimalCandidate cand;
  cand.first_stage = center;
  cand.dep_values = center;
  cand.value = 0.0;
  for (int j = 0; j < n; ++j) cand.value += p.first_stage_cost[j] * center[j];
  for (int s = 0; s < S; ++s) {
    if (elapsed_s(t0) > budget_s) return std::nullopt;
    mip::MipModel sub = smip::build_subproblem(p, s, no_lambda);
    if (p.coupling == smip::Coupling::EqualityNac) {
      for (int j = 0; j < n; ++j) sub.variables[j].lower = sub.variables[j].upper = center[j];
    } else {
      // the leading n second-stage coordinates are the first-stage copies
      for (int j = 0; j < n; ++j)
        sub.variables[j].upper = std::min(sub.variables[j].upper, center[j]);
    }
    if (mip::empty_domain(sub)) return std::nullopt;
    mip::MipSolution sol = mip::solve_mip(sub, per);
    if (sol.values.empty()) return std::nullopt;
    cand.value += sol.objective;
    const auto y0 = sol.values.begin() + (p.coupling == smip::Coupling::EqualityNac ? n : 0);
    cand.dep_values.insert(cand.dep_values.end(), y0, sol.values.end());
  }

  if (p.coupling == smip::Coupling::InequalityNac) {
    // shrink the first stage down to what the scenarios actually use; the
    // inequality coupling keeps every scenario block feasible under a smaller
    // master point, so only the first-stage rows need rechecking
    std::vector<double> trimmed(n);
    for (int j = 0; j < n; ++j) {
      double used = p.first_stage_vars[j].lower;
      for (int s = 0; s < S; ++s)
        used = std::max(used, cand.dep_values[smip::dep_block_offset(p, s) + j]);
      if (p.first_stage_vars[j].is_integral()) used = std::ceil(used - 1e-9);
      trimmed[j] = std::min(used, p.first_stage_vars[j].upper);
    }
    double delta = 0.0;
    for (int j = 0; j < n; ++j) delta += p.first_stage_cost[j] * (trimmed[j] - center[j]);
    if (delta < -1e-12 && mip::point_feasible(first, trimmed, 1e-9)) {
      cand.first_stage = trimmed;
      for (int j = 0; j < n; ++j) cand.dep_values[j] = trimmed[j];
      cand.value += delta;
    }
  }
  return cand;
}

}  // namespace

std::optional<PrimalCandidate> primal_heuristic(const smip::TwoStageProblem& p,
                                                const std::vector<double>& x_bar, double eps,
                                                double budget_s) {
  return solve_restricted(p, x_bar, eps, budget_s);
}

std::optional<PrimalCandidate> recover_primal(const smip::TwoStageProblem& p,
                                              const std::vector<double>& x_tilde, double eps,
                                              double budget_s) {
  auto cand = solve_restricted(p, x_tilde, eps, budget_s);
  if (!cand) return std::nullopt;
  mip::MipModel dep = smip::build_dep(p);
  if (!mip::point_feasible(dep, cand->dep_values, 1e-6)) return std::nullopt;
  return cand;
}

Multipliers warm_start_map(const Multipliers& reduced_lambda,
                           const reduction::ReductionResult& reduction) {
  Multipliers full;
  full.mode = reduced_lambda.mode;
  // position of each selected original index within the reduced scenario list
  std::vector<int> pos;
  full.per_scenario.resize(reduction.mapping.size());
  for (std::size_t i = 0; i < reduction.mapping.size(); ++i) {
    const int rep = reduction.mapping[i];
    if (rep < 0) throw UnmappedScenario(static_cast<int>(i));
    auto it = std::find(reduction.selected.begin(), reduction.selected.end(), rep);
    if (it == reduction.selected.end()) throw UnmappedScenario(static_cast<int>(i));
    const auto idx = static_cast<std::size_t>(it - reduction.selected.begin());
    full.per_scenario[i] = reduced_lambda.per_scenario.at(idx);
  }
  return full;
}

namespace {

// Complete a trial center: confine continuous first-stage coordinates to the
// trust window around `target` and let the integral ones (activation binaries
// and the like) be chosen by the first-stage model itself.
std::optional<std::vector<double>> repair_center(const smip::TwoStageProblem& p,
                                                 const std::vector<double>& target, double eps) {
  mip::MipModel m;
  m.sense = mip::Sense::Minimize;
  m.variables = p.first_stage_vars;
  m.objective = p.first_stage_cost;
  m.constraints = p.first_stage_cons;
  for (int j = 0; j < p.n(); ++j) {
    auto& v = m.variables[j];
    if (v.is_integral()) continue;
    const double t = std::clamp(target[j], v.lower, v.upper);
    v.lower = std::max(v.lower, (1.0 - eps) * t);
    v.upper = std::min(v.upper, (1.0 + eps) * t);
    if (v.lower > v.upper) v.lower = v.upper = t;
  }
  if (mip::empty_domain(m)) return std::nullopt;
  mip::SolveBudget budget;
  budget.time_limit_s = 5.0;
  auto sol = mip::solve_mip(m, budget);
  if (sol.values.empty()) return std::nullopt;
  return sol.values;
}

}  // namespace

DualState run_subgradient(const smip::TwoStageProblem& p, const Multipliers& lambda0,
                          const SubgradientConfig& cfg, Phase phase,
                          std::vector<IterationRecord>& trace, Clock::time_point origin) {
  DualState state;
  state.lambda = lambda0;
  state.gamma = cfg.gamma0;
  state.phase = phase;
  const auto phase_start = Clock::now();
  const auto deadline_hit = [&] { return elapsed_s(phase_start) >= cfg.time_limit_s; };

  const auto try_heuristic = [&](const std::vector<double>& x_bar) {
    if (x_bar.empty()) return;
    auto cand = primal_heuristic(p, x_bar, cfg.heuristic_eps, cfg.heuristic_budget_s);
    if (cand && cand->value < state.best_primal) {
      state.best_primal = cand->value;
      state.incumbent_first_stage = cand->first_stage;
    }
  };

  for (long k = 0; k < cfg.max_iterations; ++k) {
    if (deadline_hit()) break;
    const auto iter_start = Clock::now();
    state.iteration = k;

    DualEvaluation eval = evaluate_dual(p, state.lambda, cfg);

    const double improvement = eval.value - state.best_dual;
    if (improvement > 1e-9) {
      state.best_dual = eval.value;
      state.stall_counter = 0;
      state.best_master = eval.x_master;
    } else if (k > 0) {
      if (++state.stall_counter >= cfg.stall_threshold) {
        state.gamma *= 0.5;
        state.stall_counter = 0;
      }
    }

    if ((k == 0 && cfg.initial_heuristic) || (k > 0 && cfg.heuristic_period > 0 &&
                                              k % cfg.heuristic_period == 0)) {
      try_heuristic(eval.x_master);
      // the scenario copies carry the informative first-stage values when the
      // master sits at a bound; their expectation is a second trial center
      std::vector<double> mean(p.n(), 0.0);
      std::vector<double> peak(p.n(), -std::numeric_limits<double>::infinity());
      for (int s = 0; s < p.num_scenarios(); ++s)
        for (int j = 0; j < p.n(); ++j) {
          mean[j] += p.scenarios[s].probability * eval.x_locals[s][j];
          peak[j] = std::max(peak[j], eval.x_locals[s][j]);
        }
      if (auto repaired = repair_center(p, mean, cfg.heuristic_eps)) try_heuristic(*repaired);
      if (auto repaired = repair_center(p, peak, cfg.heuristic_eps)) try_heuristic(*repaired);
    }

    const auto g = subgradient(eval.x_master, eval.x_locals);
    const double g_norm = std::sqrt(subgradient_norm_sq(g));

    IterationRecord rec;
    rec.k = k;
    rec.phase = phase;
    rec.z_dual = eval.value;
    rec.z_primal_best = state.best_primal;
    rec.certified = eval.certified;
    rec.g_norm = g_norm;
    rec.rel_gap = std::abs(state.best_primal - state.best_dual) /
                  std::max(std::abs(state.best_primal), 1e-10);
    if (!std::isfinite(state.best_primal))
      rec.rel_gap = std::numeric_limits<double>::infinity();

    if (g_norm <= 1e-12) {
      rec.alpha = 0.0;
      rec.t_wall_s = elapsed_s(origin);
      rec.iter_time_s = elapsed_s(iter_start);
      trace.push_back(rec);
      break;  // lambda is dual optimal
    }
    if (std::isfinite(state.best_primal) && rec.rel_gap <= cfg.gap_tolerance) {
      rec.alpha = 0.0;
      rec.t_wall_s = elapsed_s(origin);
      rec.iter_time_s = elapsed_s(iter_start);
      trace.push_back(rec);
      break;
    }

    double alpha;
    if (std::isfinite(state.best_primal)) {
      alpha = polyak_step(state, g, eval.value);
    } else {
      // no incumbent yet: diminishing fixed step keeps the iterates moving
      alpha = 1.0 / (static_cast<double>(k + 1) * g_norm);
    }
    state.lambda = update_multipliers(state.lambda, alpha, g);

    rec.alpha = alpha;
    rec.t_wall_s = elapsed_s(origin);
    rec.iter_time_s = elapsed_s(iter_start);
    trace.push_back(rec);
  }
  // hand the best master point to the caller as a recovery center when the
  // heuristic never produced a primal incumbent
  if (state.incumbent_first_stage.empty()) state.incumbent_first_stage = state.best_master;
  return state;
}

namespace {

SubgradientConfig derive_sub_config(const smip::TwoStageProblem& p, const RunConfig& cfg,
                                    double time_limit_s) {
  SubgradientConfig sub = cfg.sub;
  sub.time_limit_s = time_limit_s;
  if (sub.subproblem_time_s <= 0.0) {
    const double expected_iters = 100.0;
    sub.subproblem_time_s =
        std::max(0.1, cfg.total_budget_s / (expected_iters * std::max(1, p.num_scenarios())));
  }
  if (sub.heuristic_budget_s <= 0.0)
    sub.heuristic_budget_s = std::max(1.0, 0.05 * cfg.total_budget_s);
  return sub;
}

double recovery_budget(const RunConfig& cfg) {
  return cfg.recovery_budget_s > 0.0 ? cfg.recovery_budget_s
                                     : std::max(1.0, 0.1 * cfg.total_budget_s);
}

void finalize(const smip::TwoStageProblem& p, const RunConfig& cfg, RunResult& r,
              Clock::time_point origin) {
  r.z_dual = r.state.best_dual;
  r.z_primal = r.state.best_primal;
  r.x_first_stage = r.state.incumbent_first_stage;
  // recover around the incumbent and around the best master point; the two
  // centers differ whenever the heuristic incumbent lags the dual iterates
  std::vector<const std::vector<double>*> centers;
  if (!r.state.incumbent_first_stage.empty()) centers.push_back(&r.state.incumbent_first_stage);
  if (!r.state.best_master.empty() && r.state.best_master != r.state.incumbent_first_stage)
    centers.push_back(&r.state.best_master);
  const double per_center =
      centers.empty() ? 0.0 : recovery_budget(cfg) / static_cast<double>(centers.size());
  for (const auto* center : centers) {
    auto cand = recover_primal(p, *center, cfg.sub.heuristic_eps, per_center);
    if (cand && cand->value < r.z_primal) {
      r.z_primal = cand->value;
      r.x_first_stage = cand->first_stage;
      r.state.best_primal = cand->value;
      r.state.incumbent_first_stage = cand->first_stage;
    }
  }
  // terminal snapshot so the trace carries the post-recovery incumbent
  IterationRecord rec;
  rec.k = r.trace.empty() ? 0 : r.trace.back().k + 1;
  rec.phase = r.state.phase;
  rec.z_dual = r.state.best_dual;
  rec.z_primal_best = r.z_primal;
  rec.alpha = 0.0;
  rec.g_norm = 0.0;
  rec.rel_gap = std::abs(r.z_primal - r.z_dual) / std::max(std::abs(r.z_primal), 1e-10);
  if (!std::isfinite(r.z_primal)) rec.rel_gap = std::numeric_limits<double>::infinity();
  rec.t_wall_s = elapsed_s(origin);
  rec.iter_time_s = 0.0;
  r.trace.push_back(rec);
}

}  // namespace

RunResult run_dd(const smip::TwoStageProblem& p, const RunConfig& cfg) {
  RunResult r;
  const auto origin = Clock::now();
  const double reserve = recovery_budget(cfg);
  SubgradientConfig sub = derive_sub_config(p, cfg, std::max(0.0, cfg.total_budget_s - reserve));
  r.state = run_subgradient(p, Multipliers::zeros(p), sub, Phase::Full, r.trace, origin);
  r.full_time_s = elapsed_s(origin);
  finalize(p, cfg, r, origin);
  return r;
}

RunResult run_lotus(const smip::TwoStageProblem& p, const RunConfig& cfg) {
  RunResult r;
  const auto origin = Clock::now();
  const double reserve = recovery_budget(cfg);
  const double work_budget = std::max(0.0, cfg.total_budget_s - reserve);

  auto [reduced, rr] = reduction::reduce(p, cfg.fraction, cfg.omega);
  r.reduction = rr;

  SubgradientConfig warm = derive_sub_config(reduced, cfg, work_budget);
  warm.max_iterations = cfg.warm_start_iterations;
  DualState warm_state =
      run_subgradient(reduced, Multipliers::zeros(reduced), warm, Phase::WarmStart, r.trace, origin);
  r.warm_start_time_s = elapsed_s(origin);

  Multipliers lambda0 = warm_start_map(warm_state.lambda, rr);
  SubgradientConfig full =
      derive_sub_config(p, cfg, std::max(0.0, work_budget - r.warm_start_time_s));
  r.state = run_subgradient(p, lambda0, full, Phase::Full, r.trace, origin);
  r.full_time_s = elapsed_s(origin) - r.warm_start_time_s;
  finalize(p, cfg, r, origin);
  return r;
}

}  // namespace lotus::dual
