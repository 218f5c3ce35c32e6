#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keychain/common.hpp"

namespace keychain {

// Sorted, deduplicated key list. Chains compare equal iff they hold the
// same key set.
std::vector<int> canonical_chain(const std::vector<int>& chain);

// One correct key, revealed chain order known in advance.
struct KnownOrderInstance {
  int num_keys = 0;
  std::vector<std::vector<int>> chains;
  std::vector<double> prior;  // prior[k] = probability key k is correct

  void validate() const;
};

struct Scenario {
  std::vector<std::vector<int>> chains;
  int correct_key = 0;
  double prob = 0.0;
};

// One correct key, uncertainty over the whole chain sequence.
struct ScenarioInstance {
  int num_keys = 0;
  std::vector<Scenario> scenarios;

  int max_rounds() const;
  void validate() const;
};

// Merges scenarios whose canonical chain sequence and correct key coincide,
// summing probability. Returns the number of merges performed.
int merge_duplicate_scenarios(ScenarioInstance& inst);

struct MultiKeyInstance {
  enum class Mode { Dueling, Independent };

  Mode mode = Mode::Dueling;
  int num_keys = 0;
  std::vector<std::vector<int>> chains;
  // Dueling: pair i = keys (2i, 2i+1), exactly one correct, pair_prob[i] is
  // the probability key 2i is the correct member.
  std::vector<double> pair_prob;
  // Independent: accept_prob[k] = probability key k opens the lock.
  std::vector<double> accept_prob;

  void validate() const;
};

// Observation history: a canonical prefix of revealed chains. Stored as a
// forest node; parent is the prefix one chain shorter (or -1 at depth 1).
struct InfoSet {
  int parent = -1;
  int depth = 1;                       // number of revealed chains
  std::vector<int> chain;              // canonical chain at this depth
  std::vector<int> children;
  std::vector<int> consistent;         // scenario ids sharing this prefix
  // Aligned with `consistent`: future appearances of that scenario's correct
  // key from this depth on, zero when the correct key is off-chain here.
  std::vector<double> exploit_reward;
  double prob = 0.0;                   // total probability of `consistent`
  std::vector<double> reward;          // reward[k] = conditional value of k here
};

struct InformationForest {
  int num_keys = 0;
  std::vector<double> scenario_prob;
  std::vector<int> correct_key;
  std::vector<InfoSet> sets;
  std::vector<int> roots;
  std::vector<std::vector<int>> paths;  // paths[s][t-1] = info set at round t

  // r_{k,o,s}: reward key k earns at set o under scenario s, counting the
  // exploitation tail. Zero unless k is the correct key of s and on-chain.
  double scenario_reward(int k, int o, int s) const;
};

InformationForest build_information_forest(const ScenarioInstance& inst);

// Recomputes set probabilities and conditional rewards for a different prior
// over the same scenario list; forest structure is unchanged.
void reweight_forest(InformationForest& forest, const std::vector<double>& prob);

struct Policy {
  enum class Kind { KnownOrder, Scenario };

  Kind kind = Kind::Scenario;
  // KnownOrder: choice[t-1] = key for round t. Scenario: choice[o] = key for
  // info set o. kNullKey means pass.
  std::vector<int> choice;
};

struct AdmissibilityReport {
  bool ok = true;
  int scenario = -1;
  int key = -1;
  int first_set = -1;
  int second_set = -1;
  std::string message;
};

AdmissibilityReport validate_admissible(const InformationForest& forest,
                                        const Policy& policy);

// Expected reward sum p_o * r_{pi(o),o}; throws ValidationError if the policy
// repeats a key along some scenario path.
double eval_scenario_policy(const InformationForest& forest, const Policy& policy);

// Per-scenario utility of a policy (no prior weighting).
double scenario_utility(const InformationForest& forest, const Policy& policy, int s);

// w[k][t-1] = prior[k] * 1{k on chain t} * appearances of k from round t on.
std::vector<std::vector<double>> known_order_rewards(const KnownOrderInstance& inst);

double eval_known_order_policy(const KnownOrderInstance& inst, const Policy& policy);

struct SimulationResult {
  double mean = 0.0;
  std::vector<double> rewards;  // per trial
};

// Runs the exploitative protocol: follow the policy until the correct key is
// found, then replay it whenever available.
SimulationResult simulate(const ScenarioInstance& inst, const InformationForest& forest,
                          const Policy& policy, std::uint64_t seed, int trials);
SimulationResult simulate(const KnownOrderInstance& inst, const Policy& policy,
                          std::uint64_t seed, int trials);

// One scenario per key: same chains, correct key k with probability prior[k].
ScenarioInstance embed_known_order(const KnownOrderInstance& inst);

}  // namespace keychain
