#include "lotus/smip/production.hpp"

#include <algorithm>
#include <cmath>

namespace lotus::smip {

using mip::LinearConstraint;
using mip::RowSense;
using mip::VariableSpec;

void ProductionInstance::validate() const {
  const int R = num_resources(), F = num_furniture(), S = num_scenarios();
  if (R < 1 || F < 1 || S < 1) throw DimensionMismatch("empty production instance");
  auto want = [&](size_t got, size_t need, const char* what) {
    if (got != need) throw DimensionMismatch(std::string("bad length for ") + what);
  };
  want(sale_price.size(), F, "sale_price");
  want(shortage_penalty.size(), F, "shortage_penalty");
  want(fixed_cost.size(), R, "fixed_cost");
  want(technology.size(), R, "technology rows");
  for (const auto& row : technology) want(row.size(), F, "technology cols");
  want(resource_cap.size(), R, "resource_cap");
  want(min_batch.size(), F, "min_batch");
  want(demand.size(), S, "demand scenarios");
  for (const auto& d : demand) want(d.size(), F, "demand entries");
  double mass = 0.0;
  for (double p : probability) {
    if (p <= 0.0) throw DimensionMismatch("nonpositive scenario probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw DimensionMismatch("probabilities must sum to 1");
  auto nonneg_finite = [](const std::vector<double>& v, const char* what) {
    for (double x : v)
      if (!(x >= 0.0) || !std::isfinite(x))
        throw DimensionMismatch(std::string("negative or non-finite ") + what);
  };
  nonneg_finite(resource_cost, "resource cost");
  nonneg_finite(sale_price, "sale price");
  nonneg_finite(shortage_penalty, "shortage penalty");
  nonneg_finite(fixed_cost, "fixed cost");
  nonneg_finite(resource_cap, "resource cap");
  nonneg_finite(min_batch, "min batch");
  for (const auto& row : technology) nonneg_finite(row, "technology entry");
  for (const auto& d : demand) nonneg_finite(d, "demand");
}

TwoStageProblem build_production_problem(const ProductionInstance& inst) {
  inst.validate();
  const int R = inst.num_resources(), F = inst.num_furniture(), S = inst.num_scenarios();
  const ProductionLayout lay = production_layout(inst);

  std::vector<double> dmax(F, 0.0);
  for (const auto& d : inst.demand)
    for (int f = 0; f < F; ++f) dmax[f] = std::max(dmax[f], d[f]);

  TwoStageProblem p;
  p.sense = mip::Sense::Minimize;  // net cost; profit reported with flipped sign
  p.coupling = Coupling::InequalityNac;

  // first stage: x_bar in [0, L], alpha_bar binary
  for (int r = 0; r < R; ++r) {
    p.first_stage_vars.push_back(VariableSpec::continuous(0.0, inst.resource_cap[r]));
    p.first_stage_cost.push_back(inst.resource_cost[r]);
  }
  for (int r = 0; r < R; ++r) {
    p.first_stage_vars.push_back(VariableSpec::binary());
    p.first_stage_cost.push_back(inst.fixed_cost[r]);
  }
  // cap linkage x_bar_r <= L_r * alpha_bar_r
  for (int r = 0; r < R; ++r) {
    LinearConstraint cap;
    cap.coefficients[r] = 1.0;
    cap.coefficients[R + r] = -inst.resource_cap[r];
    cap.sense = RowSense::LessEqual;
    cap.rhs = 0.0;
    p.first_stage_cons.push_back(std::move(cap));
  }

  // second stage: [x_s | alpha_s | y | upsilon | beta]
  for (int r = 0; r < R; ++r)
    p.second_stage_vars.push_back(VariableSpec::continuous(0.0, inst.resource_cap[r]));
  for (int r = 0; r < R; ++r) p.second_stage_vars.push_back(VariableSpec::binary());
  for (int f = 0; f < F; ++f)
    p.second_stage_vars.push_back(VariableSpec::integer(0.0, dmax[f]));
  for (int f = 0; f < F; ++f)
    p.second_stage_vars.push_back(VariableSpec::integer(0.0, dmax[f]));
  for (int f = 0; f < F; ++f) p.second_stage_vars.push_back(VariableSpec::binary());

  for (int s = 0; s < S; ++s) {
    ScenarioData sc;
    sc.probability = inst.probability[s];
    sc.xi = inst.demand[s];
    sc.recourse_cost.assign(lay.second_stage_size(), 0.0);
    for (int f = 0; f < F; ++f) {
      sc.recourse_cost[lay.produced(f)] = -inst.sale_price[f];
      sc.recourse_cost[lay.unmet(f)] = inst.shortage_penalty[f];
    }
    auto add_row = [&](RowSense sense, double rhs) {
      sc.row_sense.push_back(sense);
      sc.rhs.push_back(rhs);
      return static_cast<int>(sc.rhs.size()) - 1;
    };
    // resource usage: x_s_r - sum_f W_rf y_f >= 0
    for (int r = 0; r < R; ++r) {
      int row = add_row(RowSense::GreaterEqual, 0.0);
      sc.recourse.push_back({row, lay.x_copy(r), 1.0});
      for (int f = 0; f < F; ++f)
        if (inst.technology[r][f] != 0.0)
          sc.recourse.push_back({row, lay.produced(f), -inst.technology[r][f]});
    }
    // demand balance: y_f + upsilon_f = d_sf
    for (int f = 0; f < F; ++f) {
      int row = add_row(RowSense::Equal, inst.demand[s][f]);
      sc.recourse.push_back({row, lay.produced(f), 1.0});
      sc.recourse.push_back({row, lay.unmet(f), 1.0});
    }
    // batch logic: y_f >= b_f beta_f  and  y_f <= d_sf beta_f
    for (int f = 0; f < F; ++f) {
      int row = add_row(RowSense::GreaterEqual, 0.0);
      sc.recourse.push_back({row, lay.produced(f), 1.0});
      if (inst.min_batch[f] != 0.0)
        sc.recourse.push_back({row, lay.batch(f), -inst.min_batch[f]});
      int row2 = add_row(RowSense::LessEqual, 0.0);
      sc.recourse.push_back({row2, lay.produced(f), 1.0});
      if (inst.demand[s][f] != 0.0)
        sc.recourse.push_back({row2, lay.batch(f), -inst.demand[s][f]});
    }
    p.scenarios.push_back(std::move(sc));
  }
  p.validate();
  return p;
}

}  // namespace lotus::smip
