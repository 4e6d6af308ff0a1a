#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lotus/dual/dual.hpp"
#include "lotus/dual/trace_io.hpp"
#include "lotus/mip/branch_bound.hpp"
#include "lotus/mip/simplex.hpp"
#include "lotus/smip/production.hpp"

using namespace lotus;
using doctest::Approx;

namespace {

smip::TwoStageProblem newsvendor_toy(const std::vector<double>& demands,
                                     const std::vector<double>& probs, double q = 2.0) {
  smip::TwoStageProblem p;
  p.first_stage_cost = {1.0};
  p.first_stage_vars = {mip::VariableSpec::integer(0, 3)};
  p.second_stage_vars = {mip::VariableSpec::integer(0, 5)};
  for (std::size_t s = 0; s < demands.size(); ++s) {
    smip::ScenarioData sc;
    sc.probability = probs[s];
    sc.recourse_cost = {q};
    sc.tech = {{0, 0, 1.0}};
    sc.recourse = {{0, 0, 1.0}};
    sc.row_sense = {mip::RowSense::GreaterEqual};
    sc.rhs = {demands[s]};
    sc.xi = {demands[s]};
    p.scenarios.push_back(sc);
  }
  return p;
}

smip::ProductionInstance small_production(std::vector<std::vector<double>> demand =
                                              {{3.0}, {1.0}}) {
  smip::ProductionInstance inst;
  inst.resource_cost = {1.0};
  inst.sale_price = {5.0};
  inst.shortage_penalty = {2.0};
  inst.fixed_cost = {3.0};
  inst.technology = {{1.0}};
  inst.resource_cap = {10.0};
  inst.min_batch = {0.0};
  inst.demand = std::move(demand);
  inst.probability.assign(inst.demand.size(), 1.0 / inst.demand.size());
  return inst;
}

double dep_optimum(const smip::TwoStageProblem& p) {
  auto sol = mip::solve_mip(smip::build_dep(p));
  REQUIRE(sol.status == mip::MipStatus::Optimal);
  return sol.objective;
}

dual::Multipliers make_lambda(const smip::TwoStageProblem& p,
                              const std::vector<std::vector<double>>& vals) {
  auto l = dual::Multipliers::zeros(p);
  l.per_scenario = vals;
  return l;
}

// single fixed first-stage point above a fixed local copy: the projected
// multiplier never moves, so the dual value is frozen with g != 0
smip::TwoStageProblem frozen_dual_problem() {
  smip::TwoStageProblem p;
  p.coupling = smip::Coupling::InequalityNac;
  p.first_stage_cost = {1.0};
  p.first_stage_vars = {mip::VariableSpec::continuous(2.0, 2.0)};
  p.second_stage_vars = {mip::VariableSpec::continuous(1.0, 1.0)};
  smip::ScenarioData sc;
  sc.probability = 1.0;
  sc.recourse_cost = {0.0};
  sc.xi = {0.0};
  p.scenarios.push_back(sc);
  return p;
}

}  // namespace

TEST_CASE("evaluate_dual: lambda 0 is the wait-and-see decomposition") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  auto eval = dual::evaluate_dual(p, dual::Multipliers::zeros(p));
  CHECK(eval.certified);
  // master min c x over [0,3] -> 0; each scenario covers demand with y alone
  double expect = 0.0;
  for (int s = 0; s < 2; ++s) {
    auto sub = mip::solve_mip(smip::build_subproblem(p, s, {0.0}));
    expect += sub.objective;
  }
  CHECK(eval.value == Approx(expect).epsilon(1e-9));
  CHECK(eval.x_locals.size() == 2);
}

TEST_CASE("evaluate_dual: single scenario at lambda 0 equals the DEP optimum") {
  // zero first-stage cost: the lone subproblem then is the whole problem
  auto p = newsvendor_toy({5.0}, {1.0});
  p.first_stage_cost = {0.0};
  auto eval = dual::evaluate_dual(p, dual::Multipliers::zeros(p));
  const double z = dep_optimum(p);
  CHECK(z == Approx(4.0));  // copy at 3, y covers the remaining 2 at cost 2 each
  CHECK(eval.value == Approx(z).epsilon(1e-9));
}

TEST_CASE("evaluate_dual: weak duality against the DEP for random multipliers") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  const double z_i = dep_optimum(p);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 12; ++t) {
    auto l = make_lambda(p, {{u(rng)}, {u(rng)}});
    auto eval = dual::evaluate_dual(p, l);
    CHECK(eval.value <= z_i + 1e-6);
  }
}

TEST_CASE("evaluate_dual: dual function is concave along segments") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 6; ++t) {
    std::vector<std::vector<double>> a = {{u(rng)}, {u(rng)}};
    std::vector<std::vector<double>> b = {{u(rng)}, {u(rng)}};
    const double za = dual::evaluate_dual(p, make_lambda(p, a)).value;
    const double zb = dual::evaluate_dual(p, make_lambda(p, b)).value;
    for (double w : {0.25, 0.5, 0.75}) {
      std::vector<std::vector<double>> mix = {
          {w * a[0][0] + (1 - w) * b[0][0]}, {w * a[1][0] + (1 - w) * b[1][0]}};
      const double zm = dual::evaluate_dual(p, make_lambda(p, mix)).value;
      CHECK(zm >= w * za + (1 - w) * zb - 1e-6);
    }
  }
}

TEST_CASE("subgradient: arithmetic and supergradient inequality") {
  std::vector<double> xm = {0.0, 0.0};
  std::vector<std::vector<double>> xl = {{1.0, 2.0}};
  auto g = dual::subgradient(xm, xl);
  CHECK(g[0][0] == 1.0);
  CHECK(g[0][1] == 2.0);
  CHECK(dual::subgradient(xl[0], {xl[0]})[0][0] == 0.0);

  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 8; ++t) {
    std::vector<std::vector<double>> lv = {{u(rng)}, {u(rng)}};
    auto eval = dual::evaluate_dual(p, make_lambda(p, lv));
    auto gl = dual::subgradient(eval.x_master, eval.x_locals);
    for (int m = 0; m < 4; ++m) {
      std::vector<std::vector<double>> mv = {{u(rng)}, {u(rng)}};
      const double zmu = dual::evaluate_dual(p, make_lambda(p, mv)).value;
      double linear = eval.value;
      for (int s = 0; s < 2; ++s) linear += gl[s][0] * (mv[s][0] - lv[s][0]);
      CHECK(zmu <= linear + 1e-6);
    }
  }
}

TEST_CASE("polyak_step: direct arithmetic and error paths") {
  dual::DualState st;
  st.gamma = 1.8;
  st.best_primal = 10.0;
  std::vector<std::vector<double>> g = {{2.0, 0.0}, {0.0, 0.0}};  // norm^2 = 4
  CHECK(dual::polyak_step(st, g, 8.0) == Approx(0.9));
  CHECK(dual::polyak_step(st, g, 10.0) == Approx(0.0));
  st.gamma = 3.6;
  CHECK(dual::polyak_step(st, g, 8.0) == Approx(1.8));

  std::vector<std::vector<double>> zero = {{0.0, 0.0}};
  CHECK_THROWS_AS(dual::polyak_step(st, zero, 8.0), dual::ZeroSubgradient);
  st.best_primal = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(dual::polyak_step(st, g, 8.0), dual::MissingPrimalBound);
}

TEST_CASE("update_multipliers: plain step and nonnegative projection") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  auto l = make_lambda(p, {{1.0}, {-1.0}});
  auto next = dual::update_multipliers(l, 2.0, {{0.5}, {0.5}});
  CHECK(next.per_scenario[0][0] == Approx(2.0));
  CHECK(next.per_scenario[1][0] == Approx(0.0));
  CHECK(dual::update_multipliers(l, 0.0, {{9.0}, {9.0}}).per_scenario[0][0] == Approx(1.0));

  auto prod = smip::build_production_problem(small_production());
  auto li = dual::Multipliers::zeros(prod);
  li.per_scenario[0][0] = 0.5;
  auto proj = dual::update_multipliers(li, 1.0, {{-1.0, 0.0}, {0.0, 0.0}});
  CHECK(proj.per_scenario[0][0] == Approx(0.0));
  for (const auto& ls : proj.per_scenario)
    for (double v : ls) CHECK(v >= 0.0);
}

TEST_CASE("primal_heuristic: window around the DEP optimum recovers it") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  auto dep_sol = mip::solve_mip(smip::build_dep(p));
  std::vector<double> x_opt = {dep_sol.values[0]};
  auto cand = dual::primal_heuristic(p, x_opt, 0.05, 10.0);
  REQUIRE(cand.has_value());
  CHECK(cand->value == Approx(dep_sol.objective).epsilon(1e-9));

  auto fixed = dual::primal_heuristic(p, {2.0}, 0.0, 10.0);
  REQUIRE(fixed.has_value());
  CHECK(fixed->value == Approx(3.0));  // x pinned to 2
}

TEST_CASE("primal_heuristic: infeasible window yields no incumbent") {
  auto p = newsvendor_toy({1.0}, {1.0});
  // scenario cap x <= 1 breaks complete recourse for fixed x = 3
  p.scenarios[0].tech.push_back({1, 0, 1.0});
  p.scenarios[0].row_sense.push_back(mip::RowSense::LessEqual);
  p.scenarios[0].rhs.push_back(1.0);
  auto cand = dual::primal_heuristic(p, {3.0}, 0.0, 10.0);
  CHECK(!cand.has_value());
}

TEST_CASE("recover_primal: valid upper bound and feasibility recheck") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  auto dep_sol = mip::solve_mip(smip::build_dep(p));
  auto cand = dual::recover_primal(p, {dep_sol.values[0]}, 0.05, 10.0);
  REQUIRE(cand.has_value());
  CHECK(cand->value == Approx(dep_sol.objective).epsilon(1e-9));
  auto eval = dual::evaluate_dual(p, dual::Multipliers::zeros(p));
  CHECK(cand->value >= eval.value - 1e-6);
  CHECK(mip::point_feasible(smip::build_dep(p), cand->dep_values, 1e-6));
}

TEST_CASE("warm_start_map: identity, collapse, and 4-to-2 copy patterns") {
  auto p = newsvendor_toy({1.0, 3.0}, {0.5, 0.5});
  reduction::ReductionResult rr;
  rr.selected = {0, 1};
  rr.mapping = {0, 1};
  rr.aggregated_prob = {0.5, 0.5};
  auto l = make_lambda(p, {{0.7}, {-0.2}});
  auto mapped = dual::warm_start_map(l, rr);
  CHECK(mapped.per_scenario == l.per_scenario);

  reduction::ReductionResult collapse;
  collapse.selected = {2};
  collapse.mapping = {2, 2, 2, 2};
  collapse.aggregated_prob = {1.0};
  dual::Multipliers one = l;
  one.per_scenario = {{3.5}};
  auto all = dual::warm_start_map(one, collapse);
  REQUIRE(all.per_scenario.size() == 4);
  for (const auto& ls : all.per_scenario) CHECK(ls[0] == Approx(3.5));

  reduction::ReductionResult four;
  four.selected = {1, 3};
  four.mapping = {1, 1, 3, 3};
  four.aggregated_prob = {0.5, 0.5};
  dual::Multipliers two = l;
  two.per_scenario = {{10.0}, {20.0}};
  auto m4 = dual::warm_start_map(two, four);
  CHECK(m4.per_scenario[0][0] == Approx(10.0));
  CHECK(m4.per_scenario[1][0] == Approx(10.0));
  CHECK(m4.per_scenario[2][0] == Approx(20.0));
  CHECK(m4.per_scenario[3][0] == Approx(20.0));

  reduction::ReductionResult broken = four;
  broken.mapping[2] = 5;  // not a selected representative
  CHECK_THROWS_AS(dual::warm_start_map(two, broken), dual::UnmappedScenario);
}

TEST_CASE("run_subgradient: frozen dual halves gamma every five stalled iterations") {
  auto p = frozen_dual_problem();
  dual::SubgradientConfig cfg;
  cfg.max_iterations = 11;
  cfg.initial_heuristic = false;
  cfg.heuristic_period = 0;
  std::vector<dual::IterationRecord> trace;
  auto st = dual::run_subgradient(p, dual::Multipliers::zeros(p), cfg, dual::Phase::Full, trace,
                                  dual::Clock::now());
  REQUIRE(trace.size() == 11);
  for (const auto& r : trace) {
    CHECK(r.z_dual == Approx(2.0));
    CHECK(r.g_norm == Approx(1.0));
  }
  CHECK(st.gamma == Approx(0.45));  // 1.8 -> 0.9 at k=5 -> 0.45 at k=10

  cfg.max_iterations = 6;
  trace.clear();
  auto st6 = dual::run_subgradient(p, dual::Multipliers::zeros(p), cfg, dual::Phase::Full, trace,
                                   dual::Clock::now());
  CHECK(st6.gamma == Approx(0.9));
}

TEST_CASE("run_dd: bound chain, monotone bookkeeping, deterministic traces") {
  auto p = smip::build_production_problem(small_production({{3.0}, {1.0}, {5.0}}));
  const double z_i = dep_optimum(p);
  auto lp = mip::solve_lp(mip::relax_integrality(smip::build_dep(p)));
  REQUIRE(lp.status == mip::LpStatus::Optimal);

  dual::RunConfig cfg;
  cfg.total_budget_s = 120.0;
  cfg.sub.max_iterations = 400;
  auto r = dual::run_dd(p, cfg);
  auto r2 = dual::run_dd(p, cfg);

  // the LP bound is only dominated once the ascent has converged; iterate
  // long enough for that on this toy
  CHECK(lp.objective <= r.z_dual + 1e-6);
  CHECK(r.z_dual <= z_i + 1e-6);
  CHECK(z_i <= r.z_primal + 1e-6);
  for (const auto& rec : r.trace) CHECK(rec.z_dual <= z_i + 1e-6);

  double best_d = -std::numeric_limits<double>::infinity();
  double best_p = std::numeric_limits<double>::infinity();
  for (const auto& rec : r.trace) {
    best_d = std::max(best_d, rec.z_dual);
    CHECK(rec.z_primal_best <= best_p + 1e-12);
    best_p = std::min(best_p, rec.z_primal_best);
    CHECK(rec.certified);
  }
  CHECK(best_d == Approx(r.z_dual));

  // nonnegative multipliers under inequality coupling
  for (const auto& ls : r.state.lambda.per_scenario)
    for (double v : ls) CHECK(v >= 0.0);

  REQUIRE(r2.trace.size() == r.trace.size());
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    CHECK(r2.trace[i].z_dual == r.trace[i].z_dual);
    CHECK(r2.trace[i].z_primal_best == r.trace[i].z_primal_best);
    CHECK(r2.trace[i].alpha == r.trace[i].alpha);
    CHECK(r2.trace[i].g_norm == r.trace[i].g_norm);
  }
}

TEST_CASE("run_lotus: fraction 1 with zero warm-start iterations collapses to run_dd") {
  auto p = smip::build_production_problem(small_production({{3.0}, {1.0}, {5.0}}));
  dual::RunConfig cfg;
  cfg.total_budget_s = 120.0;
  cfg.sub.max_iterations = 8;
  auto dd = dual::run_dd(p, cfg);

  auto lcfg = cfg;
  lcfg.fraction = 1.0;
  lcfg.warm_start_iterations = 0;
  auto lo = dual::run_lotus(p, lcfg);
  REQUIRE(lo.trace.size() == dd.trace.size());
  for (std::size_t i = 0; i < dd.trace.size(); ++i) {
    CHECK(lo.trace[i].phase == dual::Phase::Full);
    CHECK(lo.trace[i].z_dual == dd.trace[i].z_dual);
    CHECK(lo.trace[i].alpha == dd.trace[i].alpha);
  }
  CHECK(lo.z_primal == dd.z_primal);
  CHECK(lo.z_dual == dd.z_dual);
}

TEST_CASE("run_lotus: lossless duplicated reduction keeps the cold dual value") {
  auto p = smip::build_production_problem(
      small_production({{2.0}, {2.0}, {2.0}, {6.0}, {6.0}, {6.0}}));
  auto [red, rr] = reduction::reduce(p, 1.0 / 3.0);
  REQUIRE(red.num_scenarios() == 2);
  const double zr = dual::evaluate_dual(red, dual::Multipliers::zeros(red)).value;
  const double zf = dual::evaluate_dual(p, dual::Multipliers::zeros(p)).value;
  CHECK(zr == Approx(zf).epsilon(1e-6));
}

TEST_CASE("run_lotus: warm start phase is tagged and bounds stay valid") {
  auto p = smip::build_production_problem(
      small_production({{3.0}, {1.0}, {5.0}, {2.0}, {4.0}, {6.0}}));
  dual::RunConfig cfg;
  cfg.total_budget_s = 300.0;
  cfg.fraction = 0.5;
  cfg.warm_start_iterations = 3;
  cfg.sub.max_iterations = 8;
  auto r = dual::run_lotus(p, cfg);
  REQUIRE(!r.trace.empty());
  bool saw_warm = false, saw_full = false;
  for (const auto& rec : r.trace) {
    if (rec.phase == dual::Phase::WarmStart) {
      CHECK(!saw_full);  // warm start records come first
      saw_warm = true;
    } else {
      saw_full = true;
    }
  }
  CHECK(saw_warm);
  CHECK(saw_full);
  CHECK(r.reduction.has_value());
  CHECK(r.reduction->selected.size() == 3);
  const double z_i = dep_optimum(p);
  CHECK(r.z_dual <= z_i + 1e-6);
  CHECK(z_i <= r.z_primal + 1e-6);
  // timestamps share one clock and never decrease
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    CHECK(r.trace[i].t_wall_s >= r.trace[i - 1].t_wall_s);
}

TEST_CASE("trace io: round trip preserves every field") {
  std::vector<dual::IterationRecord> trace(3);
  trace[0] = {0, dual::Phase::WarmStart, 0.5, -1.25, 7.5, 0.3, 0.9, 2.0, 0.5, true};
  trace[1] = {1, dual::Phase::WarmStart, 1.0, -1.0, 7.5, 0.25, 0.45, 1.0, 0.5, false};
  trace[2] = {0, dual::Phase::Full, 2.0, -0.5, 6.0, 0.1, 0.2, 0.5, 1.0, true};
  std::stringstream ss;
  dual::write_trace(trace, ss);
  auto back = dual::read_trace(ss);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].k == trace[i].k);
    CHECK(back[i].phase == trace[i].phase);
    CHECK(back[i].t_wall_s == trace[i].t_wall_s);
    CHECK(back[i].z_dual == trace[i].z_dual);
    CHECK(back[i].z_primal_best == trace[i].z_primal_best);
    CHECK(back[i].rel_gap == trace[i].rel_gap);
    CHECK(back[i].alpha == trace[i].alpha);
    CHECK(back[i].g_norm == trace[i].g_norm);
    CHECK(back[i].iter_time_s == trace[i].iter_time_s);
    CHECK(back[i].certified == trace[i].certified);
  }
  std::stringstream bad("not,a,trace\n");
  CHECK_THROWS_AS(dual::read_trace(bad), dual::TraceParseError);
}
