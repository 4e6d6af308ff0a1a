#pragma once

#include <vector>

#include "lotus/smip/problem.hpp"

namespace lotus::smip {

// Production planning case study: acquire resources up front (continuous
// level x_bar plus a fixed-cost activation alpha_bar per resource), then per
// demand scenario produce integer furniture batches, with unmet demand
// penalized. Exposed to users in profit-maximization form; internally the
// net-cost minimization model is built.
struct ProductionInstance {
  std::vector<double> resource_cost;              // c, |R|
  std::vector<double> sale_price;                 // q, |F|
  std::vector<double> shortage_penalty;           // f, |F|
  std::vector<double> fixed_cost;                 // u, |R|
  std::vector<std::vector<double>> technology;    // W, |R| x |F|
  std::vector<double> resource_cap;               // L, |R|
  std::vector<double> min_batch;                  // b, |F|
  std::vector<std::vector<double>> demand;        // d_s, per scenario |F|
  std::vector<double> probability;                // p_s

  int num_resources() const { return static_cast<int>(resource_cost.size()); }
  int num_furniture() const { return static_cast<int>(sale_price.size()); }
  int num_scenarios() const { return static_cast<int>(probability.size()); }

  void validate() const;
  friend bool operator==(const ProductionInstance&, const ProductionInstance&) = default;
};

// Second-stage block layout: [x_s copies |R| , alpha_s copies |R| , y |F| ,
// upsilon |F| , beta |F|]. First stage: [x_bar |R| , alpha_bar |R|].
// Coupling: inequality NACs x_s <= x_bar, alpha_s <= alpha_bar.
TwoStageProblem build_production_problem(const ProductionInstance& inst);

// index helpers into the second-stage block
struct ProductionLayout {
  int R = 0, F = 0;
  int x_copy(int r) const { return r; }
  int alpha_copy(int r) const { return R + r; }
  int produced(int f) const { return 2 * R + f; }
  int unmet(int f) const { return 2 * R + F + f; }
  int batch(int f) const { return 2 * R + 2 * F + f; }
  int second_stage_size() const { return 2 * R + 3 * F; }
};

inline ProductionLayout production_layout(const ProductionInstance& inst) {
  return ProductionLayout{inst.num_resources(), inst.num_furniture()};
}

}  // namespace lotus::smip
