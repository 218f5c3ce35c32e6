#include "keychain/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace keychain {

namespace {

// Kuhn-Munkres on a square cost matrix (minimization), potentials form.
// Returns row -> column assignment.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

Assignment max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  int rows = static_cast<int>(weight.size());
  if (rows == 0) throw ValidationError("assignment: empty weight matrix");
  int cols = static_cast<int>(weight[0].size());
  double wmax = 0.0;
  for (const auto& row : weight) {
    if (static_cast<int>(row.size()) != cols)
      throw ValidationError("assignment: ragged weight matrix");
    for (double w : row) {
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("assignment: weights must be finite and nonnegative");
      wmax = std::max(wmax, w);
    }
  }
  if (cols == 0) throw ValidationError("assignment: empty weight matrix");

  // Pad to square; padded cells carry weight 0, i.e. cost wmax.
  int n = std::max(rows, cols);
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, wmax));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost[i][j] = wmax - weight[i][j];

  std::vector<int> match = hungarian_min(cost);
  Assignment result;
  result.match.assign(rows, -1);
  for (int i = 0; i < rows; ++i) {
    int j = match[i];
    if (j >= 0 && j < cols && weight[i][j] > 0.0) {
      result.match[i] = j;
      result.value += weight[i][j];
    }
  }
  return result;
}

KnownOrderSolution solve_known_order(const KnownOrderInstance& inst) {
  auto w = known_order_rewards(inst);
  Assignment a = max_weight_assignment(w);
  KnownOrderSolution sol;
  sol.value = a.value;
  sol.policy.kind = Policy::Kind::KnownOrder;
  sol.policy.choice.assign(inst.chains.size(), kNullKey);
  for (int k = 0; k < inst.num_keys; ++k)
    if (a.match[k] >= 0) sol.policy.choice[a.match[k]] = k;
  return sol;
}

}  // namespace keychain
