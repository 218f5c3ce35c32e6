#pragma once

#include <vector>

#include "keychain/model.hpp"

namespace keychain {

struct Assignment {
  double value = 0.0;
  std::vector<int> match;  // match[row] = column, or -1 when unmatched
};

// Maximum-weight bipartite assignment on a dense weight matrix. Weights must
// be finite and nonnegative; rows/columns may go unmatched (weight 0 edges
// are dropped from the result). Deterministic for a fixed input.
Assignment max_weight_assignment(const std::vector<std::vector<double>>& weight);

struct KnownOrderSolution {
  double value = 0.0;
  Policy policy;
};

// Optimal policy for a known chain sequence via assignment of keys to rounds.
KnownOrderSolution solve_known_order(const KnownOrderInstance& inst);

}  // namespace keychain
