#pragma once

#include "lotus/mip/model.hpp"

namespace lotus::mip {

// Bounded-variable primal simplex on the LP relaxation of `model`.
// Integrality markers are ignored; bounds are honored as given.
// Two-phase with artificial variables; Bland's rule kicks in after
// 2*(rows+cols) degenerate pivots.
LpSolution solve_lp(const MipModel& model, const Tolerances& tol = Tolerances{});

}  // namespace lotus::mip
