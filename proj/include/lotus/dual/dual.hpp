#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "lotus/reduction/reduction.hpp"
#include "lotus/smip/problem.hpp"

namespace lotus::dual {

class ZeroSubgradient : public std::runtime_error {
 public:
  ZeroSubgradient() : std::runtime_error("zero subgradient: dual optimal at current multipliers") {}
};

class MissingPrimalBound : public std::runtime_error {
 public:
  MissingPrimalBound() : std::runtime_error("Polyak step requires a primal bound") {}
};

class UnmappedScenario : public std::runtime_error {
 public:
  explicit UnmappedScenario(int s)
      : std::runtime_error("scenario " + std::to_string(s) + " has no representative") {}
};

class RecourseViolation : public std::runtime_error {
 public:
  explicit RecourseViolation(const std::string& what) : std::runtime_error(what) {}
};

struct Multipliers {
  std::vector<std::vector<double>> per_scenario;  // one vector of length n per scenario
  smip::Coupling mode = smip::Coupling::EqualityNac;

  static Multipliers zeros(const smip::TwoStageProblem& p) {
    Multipliers l;
    l.mode = p.coupling;
    l.per_scenario.assign(p.num_scenarios(), std::vector<double>(p.n(), 0.0));
    return l;
  }
};

enum class Phase { WarmStart, Full };
inline const char* phase_name(Phase p) { return p == Phase::WarmStart ? "warm_start" : "full"; }

struct DualState {
  Multipliers lambda;
  long iteration = 0;
  double gamma = 1.8;
  double best_dual = -std::numeric_limits<double>::infinity();   // Z_D (minimization)
  double best_primal = std::numeric_limits<double>::infinity();  // Z_P
  std::vector<double> incumbent_first_stage;
  std::vector<double> best_master;  // master point at the best dual value
  int stall_counter = 0;
  Phase phase = Phase::Full;
};

struct IterationRecord {
  long k = 0;
  Phase phase = Phase::Full;
  double t_wall_s = 0.0;
  double z_dual = 0.0;         // Z_D(lambda^k)
  double z_primal_best = 0.0;  // best Z_P so far (inf while none)
  double rel_gap = 0.0;
  double alpha = 0.0;
  double g_norm = 0.0;
  double iter_time_s = 0.0;
  bool certified = true;  // every solve in this evaluation proved optimality
};

struct DualEvaluation {
  double value = 0.0;  // valid lower bound: master tree bound + sum of subproblem tree bounds
  std::vector<double> x_master;
  std::vector<std::vector<double>> x_locals;
  bool certified = true;
};

struct SubgradientConfig {
  double time_limit_s = 1e18;
  long max_iterations = 1000000;
  double gap_tolerance = 1e-4;  // relative, 0.01%
  double gamma0 = 1.8;
  int stall_threshold = 5;
  long heuristic_period = 20;
  double heuristic_eps = 0.05;
  double heuristic_budget_s = 5.0;
  bool initial_heuristic = true;  // seed Z_P at k = 0
  double subproblem_time_s = 10.0;
  double subproblem_gap = 1e-6;
};

struct RunConfig {
  double total_budget_s = 60.0;
  double fraction = 0.30;          // LOTUS subset fraction
  long warm_start_iterations = 10; // LOTUS warm-start cap
  double omega = -1.0;             // feature weight; <=0 -> xi dimension
  double recovery_budget_s = -1.0; // <=0 -> derived from total budget
  SubgradientConfig sub;
};

struct RunResult {
  DualState state;
  std::vector<IterationRecord> trace;
  std::optional<reduction::ReductionResult> reduction;
  double z_primal = std::numeric_limits<double>::infinity();
  double z_dual = -std::numeric_limits<double>::infinity();
  std::vector<double> x_first_stage;
  double warm_start_time_s = 0.0;
  double full_time_s = 0.0;
};

using Clock = std::chrono::steady_clock;

DualEvaluation evaluate_dual(const smip::TwoStageProblem& p, const Multipliers& lambda,
                             const SubgradientConfig& cfg = SubgradientConfig{});

std::vector<std::vector<double>> subgradient(const std::vector<double>& x_master,
                                             const std::vector<std::vector<double>>& x_locals);

double subgradient_norm_sq(const std::vector<std::vector<double>>& g);

double polyak_step(const DualState& state, const std::vector<std::vector<double>>& g,
                   double z_dual_current);

Multipliers update_multipliers(const Multipliers& lambda, double alpha,
                               const std::vector<std::vector<double>>& g);

struct PrimalCandidate {
  double value = 0.0;
  std::vector<double> first_stage;
  std::vector<double> dep_values;  // full DEP vector
};

// Trust-region fix-and-optimize around x_bar; nullopt when the restricted
// DEP yields no incumbent within budget.
std::optional<PrimalCandidate> primal_heuristic(const smip::TwoStageProblem& p,
                                                const std::vector<double>& x_bar, double eps,
                                                double budget_s);

Multipliers warm_start_map(const Multipliers& reduced_lambda,
                           const reduction::ReductionResult& reduction);

std::optional<PrimalCandidate> recover_primal(const smip::TwoStageProblem& p,
                                              const std::vector<double>& x_tilde, double eps,
                                              double budget_s);

// Core subgradient ascent loop. `origin` anchors the trace timestamps so a
// warm-start phase and a full phase share one clock.
DualState run_subgradient(const smip::TwoStageProblem& p, const Multipliers& lambda0,
                          const SubgradientConfig& cfg, Phase phase,
                          std::vector<IterationRecord>& trace, Clock::time_point origin);

RunResult run_dd(const smip::TwoStageProblem& p, const RunConfig& cfg);
RunResult run_lotus(const smip::TwoStageProblem& p, const RunConfig& cfg);

}  // namespace lotus::dual
