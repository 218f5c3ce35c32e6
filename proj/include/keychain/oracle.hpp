#pragma once

#include "keychain/model.hpp"

namespace keychain {

struct OneKeySolution {
  double value = 0.0;
  Policy policy;
};

// Exact optimum over admissible policies by backward induction on
// (information set, tested-key set). Guarded: num_keys <= 20 and at most
// 5000 information sets.
OneKeySolution solve_one_key_mdp(const ScenarioInstance& inst);

// Same recursion with an explicit prior over the forest's scenario list;
// forest probabilities stored inline are ignored.
OneKeySolution solve_one_key_forest(const InformationForest& forest,
                                    const std::vector<double>& scenario_prob);

struct MultiKeySolution {
  double value = 0.0;          // unconstrained optimum
  int first_action = kNullKey; // optimal round-1 action
  double exploit_value = 0.0;  // optimum forced to replay known-correct keys
};

// Exact optimum for several correct keys, dueling-pair or independent
// acceptance. Keys with acceptance probability exactly 1 (or a pair
// probability of 0/1) start out resolved.
MultiKeySolution solve_multi_key_mdp(const MultiKeyInstance& inst);

}  // namespace keychain
