#include "relosim/min_cost_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relosim/errors.hpp"

namespace relosim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MinCostFlowResult solve_min_cost_flow(int n, const std::vector<double>& cost,
                                      const std::vector<double>& supply) {
  if (n < 0 || cost.size() != static_cast<std::size_t>(n) * n ||
      supply.size() != static_cast<std::size_t>(n))
    throw ConfigError("min-cost flow: dimension mismatch");
  for (double c : cost)
    if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("min-cost flow: costs must be >= 0");

  MinCostFlowResult res;
  res.flow.assign(static_cast<std::size_t>(n) * n, 0.0);

  double scale = 1.0, balance = 0.0;
  for (double s : supply) {
    scale = std::max(scale, std::abs(s));
    balance += s;
  }
  const double tol = 1e-9 * scale;
  if (std::abs(balance) > tol * 10.0) {
    res.feasible = false;
    return res;
  }
  res.feasible = true;
  if (n == 0) return res;

  std::vector<double> excess(supply);
  std::vector<double> pot(n, 0.0);
  std::vector<double> dist(n);
  std::vector<int> pred(n);
  std::vector<char> pred_cancel(n);
  std::vector<char> done(n);

  auto flow_at = [&](int i, int j) -> double& {
    return res.flow[static_cast<std::size_t>(i) * n + j];
  };
  auto cost_at = [&](int i, int j) { return cost[static_cast<std::size_t>(i) * n + j]; };

  const long max_iters = 16L * n * n + 64;
  for (long iter = 0; iter < max_iters; ++iter) {
    int s = -1;
    for (int i = 0; i < n; ++i)
      if (excess[i] > tol) {
        s = i;
        break;
      }
    if (s < 0) break;

    // Dijkstra over the residual graph with reduced costs.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(pred_cancel.begin(), pred_cancel.end(), 0);
    std::fill(done.begin(), done.end(), 0);
    dist[s] = 0.0;
    for (int round = 0; round < n; ++round) {
      int u = -1;
      for (int i = 0; i < n; ++i)
        if (!done[i] && dist[i] < kInf && (u < 0 || dist[i] < dist[u])) u = i;
      if (u < 0) break;
      done[u] = 1;
      for (int v = 0; v < n; ++v) {
        if (done[v] || v == u) continue;
        double rc = std::max(0.0, cost_at(u, v) + pot[u] - pot[v]);
        if (dist[u] + rc < dist[v]) {
          dist[v] = dist[u] + rc;
          pred[v] = u;
          pred_cancel[v] = 0;
        }
        if (flow_at(v, u) > tol) {
          double rc_back = std::max(0.0, -cost_at(v, u) + pot[u] - pot[v]);
          if (dist[u] + rc_back < dist[v]) {
            dist[v] = dist[u] + rc_back;
            pred[v] = u;
            pred_cancel[v] = 1;
          }
        }
      }
    }

    int t = -1;
    for (int i = 0; i < n; ++i)
      if (excess[i] < -tol && dist[i] < kInf && (t < 0 || dist[i] < dist[t])) t = i;
    if (t < 0) {
      res.feasible = false;  // cannot happen on a complete graph
      break;
    }

    for (int i = 0; i < n; ++i)
      if (dist[i] < kInf) pot[i] += dist[i];

    // Cancel arcs are only offered above tol, so delta > tol here and the
    // outer loop makes progress every iteration.
    double delta = std::min(excess[s], -excess[t]);
    for (int v = t; v != s; v = pred[v])
      if (pred_cancel[v]) delta = std::min(delta, flow_at(v, pred[v]));
    for (int v = t; v != s; v = pred[v]) {
      int u = pred[v];
      if (pred_cancel[v])
        flow_at(v, u) = std::max(0.0, flow_at(v, u) - delta);
      else
        flow_at(u, v) += delta;
    }
    excess[s] -= delta;
    excess[t] += delta;
  }

  res.total_cost = 0.0;
  res.max_dual_violation = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double f = flow_at(i, j);
      res.total_cost += cost_at(i, j) * f;
      const double rc = cost_at(i, j) + pot[i] - pot[j];
      res.max_dual_violation = std::max(res.max_dual_violation, -rc);
      if (f > tol) res.max_dual_violation = std::max(res.max_dual_violation, rc);
    }
  }
  return res;
}

}  // namespace relosim
