#pragma once

#include <vector>

#include "lotus/mip/model.hpp"

namespace lotus::smip {

// Horizontal coupling between the global first stage and the scenario-local
// copies. Equality coupling is the generic x_(s) = x relaxation; inequality
// coupling is the x_(s) <= x form used by the production case study, which
// restricts the multipliers to be non-negative.
enum class Coupling { EqualityNac, InequalityNac };

struct SparseEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

// One scenario block: probability, recourse cost q_s, technology matrix T_s
// (columns over first-stage variables), recourse matrix W_s (columns over
// second-stage variables), row senses and right-hand side h_s, plus the raw
// stochastic parameter vector xi_s used by scenario reduction.
//
// Under inequality coupling the first n second-stage variables are the local
// first-stage copies and T_s must be empty; the coupling rows are implicit
// and added by build_dep.
struct ScenarioData {
  double probability = 0.0;
  std::vector<double> recourse_cost;
  std::vector<SparseEntry> tech;
  std::vector<SparseEntry> recourse;
  std::vector<mip::RowSense> row_sense;
  std::vector<double> rhs;
  std::vector<double> xi;
};

class DimensionMismatch : public std::runtime_error {
 public:
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TwoStageProblem {
  mip::Sense sense = mip::Sense::Minimize;
  Coupling coupling = Coupling::EqualityNac;
  std::vector<double> first_stage_cost;
  std::vector<mip::VariableSpec> first_stage_vars;
  std::vector<mip::LinearConstraint> first_stage_cons;
  std::vector<mip::VariableSpec> second_stage_vars;
  std::vector<ScenarioData> scenarios;

  int n() const { return static_cast<int>(first_stage_vars.size()); }
  int k() const { return static_cast<int>(second_stage_vars.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }

  void validate() const;
};

// DEP variable layout: [first stage | scenario 0 block | scenario 1 block | ...]
inline int dep_block_offset(const TwoStageProblem& p, int s) { return p.n() + s * p.k(); }

mip::MipModel build_dep(const TwoStageProblem& p);

// Master over the first stage alone with objective (c - sum_s lambda_s)^T x.
mip::MipModel build_master(const TwoStageProblem& p,
                           const std::vector<std::vector<double>>& lambda);

// Scenario subproblem. Equality coupling: variables [local first-stage copy |
// second stage], objective lambda_s on the copy plus p_s q_s on the second
// stage, first-stage rows kept on the copy. Inequality coupling: second-stage
// variables only, lambda_s priced on the leading local-copy block.
mip::MipModel build_subproblem(const TwoStageProblem& p, int s,
                               const std::vector<double>& lambda_s);

// DEP with every first-stage coordinate confined to [(1-eps), (1+eps)] times
// x_tilde, intersected with the original bounds.
mip::MipModel build_restricted_dep(const TwoStageProblem& p,
                                   const std::vector<double>& x_tilde, double eps);

// First-stage component of a subproblem solution vector.
std::vector<double> subproblem_first_stage(const TwoStageProblem& p,
                                           const std::vector<double>& values);

}  // namespace lotus::smip
