// Dense min-cost flow on a complete directed graph, used for the fluid
// relocation bound. Successive shortest paths with Johnson potentials;
// real-valued flow (supplies/demands are rates, not integers).
#pragma once

#include <cstdint>
#include <vector>

namespace relosim {

struct MinCostFlowResult {
  // flow[i*n + j]: rate shipped directly from i to j (>= 0, diagonal 0).
  std::vector<double> flow;
  double total_cost = 0.0;
  bool feasible = false;         // false iff supplies do not sum to ~0
  double max_dual_violation = 0.0;  // optimality certificate, see below
};

// Solves: min sum_ij cost[i][j] * flow[i][j]
//         s.t. sum_j (flow[i][j] - flow[j][i]) = supply[i], flow >= 0.
// cost must be non-negative with zero diagonal; sum(supply) must be ~0.
//
// The certificate: on return, max_dual_violation is the largest amount by
// which any residual arc violates reduced-cost non-negativity under the
// final potentials. Zero (up to rounding) proves optimality.
MinCostFlowResult solve_min_cost_flow(int n, const std::vector<double>& cost,
                                      const std::vector<double>& supply);

}  // namespace relosim
