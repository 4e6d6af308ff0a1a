#include "doctest.h"

#include "lotus/mip/branch_bound.hpp"
#include "lotus/mip/model.hpp"
#include "lotus/mip/simplex.hpp"
#include "oracles.hpp"

using namespace lotus::mip;

namespace {

MipModel box_model(Sense sense, std::vector<double> obj, std::vector<VariableSpec> vars) {
  MipModel m;
  m.sense = sense;
  m.objective = std::move(obj);
  m.variables = std::move(vars);
  return m;
}

}  // namespace

TEST_CASE("lp: bound-active single variable") {
  auto m = box_model(Sense::Minimize, {1.0}, {VariableSpec::continuous(2.0, 5.0)});
  auto sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.values[0] == doctest::Approx(2.0));
}

TEST_CASE("lp: simplex face") {
  auto m = box_model(Sense::Minimize, {-1.0, -1.0},
                     {VariableSpec::continuous(0, 1), VariableSpec::continuous(0, 1)});
  LinearConstraint c;
  c.coefficients = {{0, 1.0}, {1, 1.0}};
  c.sense = RowSense::LessEqual;
  c.rhs = 1.0;
  m.constraints.push_back(c);
  auto sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("lp: equality row") {
  auto m = box_model(Sense::Maximize, {2.0, 1.0},
                     {VariableSpec::continuous(0, 4), VariableSpec::continuous(0, 4)});
  LinearConstraint c;
  c.coefficients = {{0, 1.0}, {1, 1.0}};
  c.sense = RowSense::Equal;
  c.rhs = 3.0;
  m.constraints.push_back(c);
  auto sol = solve_lp(m);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(6.0));  // x0=3, x1=0
}

TEST_CASE("lp: infeasible detected") {
  auto m = box_model(Sense::Minimize, {1.0}, {VariableSpec::continuous(0, 1)});
  LinearConstraint c;
  c.coefficients = {{0, 1.0}};
  c.sense = RowSense::GreaterEqual;
  c.rhs = 5.0;
  m.constraints.push_back(c);
  CHECK(solve_lp(m).status == LpStatus::Infeasible);
}

TEST_CASE("lp: malformed model rejected") {
  MipModel m;
  m.variables.push_back(VariableSpec::continuous(0, 1));
  // objective length mismatch
  CHECK_THROWS_AS(solve_lp(m), MalformedModel);
}

TEST_CASE("lp: random instances vs vertex enumeration oracle") {
  std::mt19937 rng(20240811);
  int feasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto m = oracle::random_lp(rng, 5, 5);
    auto expect = oracle::lp_vertex_enumeration(m);
    auto sol = solve_lp(m);
    if (expect) {
      ++feasible_seen;
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(sol.objective == doctest::Approx(*expect).epsilon(1e-6));
      CHECK(point_feasible(relax_integrality(m), sol.values, 2e-6));
    } else {
      CHECK(sol.status == LpStatus::Infeasible);
    }
  }
  CHECK(feasible_seen > 30);  // the generator must actually exercise the optimal path
}

TEST_CASE("relax_integrality maps kinds to continuous and is a fixed point") {
  auto m = box_model(Sense::Minimize, {1.0, 1.0},
                     {VariableSpec::binary(), VariableSpec::binary()});
  auto r = relax_integrality(m);
  for (const auto& v : r.variables) {
    CHECK(v.kind == VarKind::Continuous);
    CHECK(v.lower == 0.0);
    CHECK(v.upper == 1.0);
  }
  auto r2 = relax_integrality(r);
  CHECK(r2.variables[0].kind == VarKind::Continuous);
}

TEST_CASE("mip: LP-only model short-circuits") {
  auto m = box_model(Sense::Minimize, {1.0, -2.0},
                     {VariableSpec::continuous(0, 3), VariableSpec::continuous(0, 3)});
  auto sol = solve_mip(m);
  REQUIRE(sol.status == MipStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-6.0));
  CHECK(sol.nodes_explored == 1);
}

TEST_CASE("mip: binary knapsack toy") {
  auto m = box_model(Sense::Maximize, {3.0, 2.0},
                     {VariableSpec::binary(), VariableSpec::binary()});
  LinearConstraint c;
  c.coefficients = {{0, 1.0}, {1, 1.0}};
  c.sense = RowSense::LessEqual;
  c.rhs = 1.0;
  m.constraints.push_back(c);
  auto sol = solve_mip(m);
  REQUIRE(sol.status == MipStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.values[0] == doctest::Approx(1.0));
  CHECK(sol.values[1] == doctest::Approx(0.0));
}

TEST_CASE("mip: random instances vs exhaustive enumeration oracle") {
  std::mt19937 rng(77);
  SolveBudget budget;
  budget.rel_gap = 1e-9;
  for (int trial = 0; trial < 80; ++trial) {
    auto m = oracle::random_integer_model(rng, 6, 4);
    auto expect = oracle::mip_enumeration(m);
    auto sol = solve_mip(m, budget);
    if (expect) {
      REQUIRE(sol.status == MipStatus::Optimal);
      CHECK(sol.objective == doctest::Approx(*expect).epsilon(1e-6));
      CHECK(point_feasible(m, sol.values, 1e-6));
    } else {
      CHECK(sol.status == MipStatus::Infeasible);
    }
  }
}

TEST_CASE("mip: relaxation bound and bound sandwich on random instances") {
  std::mt19937 rng(4242);
  int checked = 0;
  for (int trial = 0; trial < 250 && checked < 100; ++trial) {
    auto m = oracle::random_integer_model(rng, 6, 4);
    auto sol = solve_mip(m);
    if (sol.status != MipStatus::Optimal) continue;
    ++checked;
    auto lp = solve_lp(relax_integrality(m));
    REQUIRE(lp.status == LpStatus::Optimal);
    if (m.sense == Sense::Minimize) {
      CHECK(lp.objective <= sol.objective + 1e-6);
      CHECK(sol.bound <= sol.objective + 1e-6);
    } else {
      CHECK(lp.objective >= sol.objective - 1e-6);
      CHECK(sol.bound >= sol.objective - 1e-6);
    }
    double gap = std::abs(sol.objective - sol.bound) / std::max(std::abs(sol.objective), 1e-10);
    CHECK(gap <= 1e-6 + 1e-9);
  }
  CHECK(checked == 100);
}

TEST_CASE("mip: determinism across repeated solves") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = oracle::random_integer_model(rng, 6, 4);
    auto a = solve_mip(m);
    auto b = solve_mip(m);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.nodes_explored == b.nodes_explored);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("mip: budget exhaustion reports incumbent or BudgetExhausted") {
  std::mt19937 rng(1234);
  auto m = oracle::random_integer_model(rng, 6, 4);
  SolveBudget tiny;
  tiny.node_limit = 1;
  auto sol = solve_mip(m, tiny);
  CHECK((sol.status == MipStatus::Feasible || sol.status == MipStatus::BudgetExhausted ||
         sol.status == MipStatus::Optimal || sol.status == MipStatus::Infeasible));
}
