#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "keychain/lp.hpp"
#include "keychain/model.hpp"
#include "keychain/mwlm.hpp"

namespace keychain {

// Right nodes are information sets typed by their consistent scenario sets;
// edge weight is prob(o) * reward[k][o]. All left capacities are 1.
LaminarMatchingInstance reduce_to_mwlm(const InformationForest& forest);

Policy matching_to_policy(const InformationForest& forest,
                          const LaminarMatching& matching);
LaminarMatching policy_to_matching(const InformationForest& forest,
                                   const Policy& policy);

// One antichain valuation per left node; welfare of an allocation equals the
// weight of the induced matching.
struct AuctionInstance {
  std::vector<AntichainValuation> bidders;
};

AuctionInstance reduce_mwlm_to_auction(const LaminarMatchingInstance& inst);
LaminarMatching allocation_to_matching(const LaminarMatchingInstance& inst,
                                       const std::vector<std::vector<int>>& allocation);

struct FractionalPolicy {
  std::vector<std::vector<double>> x;  // [key][info set]
};

struct LpRelaxation {
  FractionalPolicy fractional;
  double value = 0.0;
  LpSolution raw;
};

// Packing relaxation: one unit per information set, one play of each key per
// scenario path.
LpRelaxation solve_lp_relaxation(const InformationForest& forest);

// Randomized rounding of a fractional policy. Along a realized path a key
// enters the round's candidate set with probability x / (1 - mass used so
// far); the heaviest candidate is played.
class PreallocationRounder {
 public:
  PreallocationRounder(const InformationForest& forest, FractionalPolicy fractional);

  // Reward of one simulated run under the exploitative protocol.
  double trial_reward(std::uint64_t seed, std::uint64_t trial) const;

  // Rounds every information set in one pass, yielding a deterministic
  // admissible policy whose play distribution matches the online algorithm.
  Policy sample_policy(std::uint64_t seed, std::uint64_t repetition) const;

  struct McResult {
    double mean = 0.0;
    double std_error = 0.0;
    // inclusion_freq[o][k]: fraction of visits to o where k was a candidate.
    std::vector<std::vector<double>> inclusion_freq;
    std::vector<long long> visits;
  };

  McResult monte_carlo(std::uint64_t seed, int trials) const;

  double guarantee_factor() const;  // 1 - (1 - 1/n)^n

 private:
  const InformationForest& forest_;
  FractionalPolicy x_;
};

// Highest conditional reward among keys unused on the path; passes when every
// remaining key is worthless.
Policy greedy_policy(const InformationForest& forest);

struct ApproxResult {
  Policy policy;
  double value = 0.0;
  double lp_value = 0.0;
  double guarantee = 0.0;  // (1 - (1-1/n)^n) * lp_value
};

// LP relaxation plus best-of-R rounded policies, evaluated exactly.
ApproxResult approx_solve(const ScenarioInstance& inst, std::uint64_t seed,
                          int repetitions = 64);

struct WeightEstimate {
  std::vector<std::vector<double>> weight;  // [key][info set]
  long long samples = 0;
};

// Estimates matching weights from scenario draws; the sample count is sized
// so that with probability 1 - delta every entry is within
// epsilon / (2 * #info sets) of the truth. The forest structure is taken as
// given; only the weights are estimated.
WeightEstimate estimate_weights_from_samples(const InformationForest& forest,
                                             const std::function<int()>& sampler,
                                             double epsilon, double delta);

long long sample_count(int num_keys, int max_rounds, int num_sets, double epsilon,
                       double delta);

}  // namespace keychain
