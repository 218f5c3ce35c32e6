#pragma once

#include <cstdint>
#include <vector>

#include "keychain/lp.hpp"
#include "keychain/mwlm.hpp"

namespace keychain {

// Offline nodes with capacities face m online arrivals; the whole weight
// matrix is drawn from a finite support and revealed column by column.
struct WobmInstance {
  struct Support {
    std::vector<std::vector<double>> weight;  // [offline][arrival]
    double prob = 0.0;
  };

  int num_offline = 0;
  std::vector<int> capacity;
  int num_arrivals = 0;
  std::vector<Support> support;

  void validate() const;
};

// Prefix forest over revealed weight columns; mirrors InformationForest.
struct WobmForest {
  struct Node {
    int parent = -1;
    int depth = 1;
    std::vector<int> children;
    std::vector<int> consistent;
    double prob = 0.0;
    std::vector<double> weight;  // weight[i] at this arrival, shared by consistent
  };

  int num_offline = 0;
  std::vector<int> capacity;
  std::vector<double> scenario_prob;
  std::vector<Node> sets;
  std::vector<int> roots;
  std::vector<std::vector<int>> paths;
};

WobmForest build_wobm_forest(const WobmInstance& inst);

// Right nodes are the prefix sets, typed by consistency; edge weight is
// prob(o) * weight[i at o]; left capacities carry over.
LaminarMatchingInstance reduce_wobm_to_mwlbm(const WobmInstance& inst);

struct WobmResult {
  double lp_value = 0.0;
  double achieved = 0.0;   // Monte Carlo mean of the rounded online matcher
  double std_error = 0.0;
  int trials = 0;
  double guarantee = 0.0;  // (1 - 1/e) * lp_value
  std::vector<std::vector<double>> fractional;  // [offline][prefix set]
};

// Capacity LP plus preallocation rounding with per-path capacity counters.
WobmResult solve_wobm(const WobmInstance& inst, std::uint64_t seed,
                      int trials = 100000);

// Exact optimum by backward induction over (prefix, residual capacities).
// Guarded to num_offline * num_arrivals <= 12.
double philosopher_oracle(const WobmInstance& inst);

}  // namespace keychain
