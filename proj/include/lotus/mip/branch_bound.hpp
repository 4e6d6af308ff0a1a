#pragma once

#include "lotus/mip/model.hpp"

namespace lotus::mip {

// Best-bound-first branch and bound with simplex node relaxations.
// Branching: most fractional variable, ties by lowest index. Deterministic
// for identical (model, budget) inputs.
MipSolution solve_mip(const MipModel& model, const SolveBudget& budget = SolveBudget{},
                      const Tolerances& tol = Tolerances{});

}  // namespace lotus::mip
