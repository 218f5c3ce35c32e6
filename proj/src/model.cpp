#include "keychain/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace keychain {

std::vector<int> canonical_chain(const std::vector<int>& chain) {
  std::vector<int> c(chain);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

namespace {

void check_chains(int num_keys, const std::vector<std::vector<int>>& chains,
                  const std::string& where) {
  if (chains.empty())
    throw ValidationError(where + ": at least one chain required");
  for (std::size_t t = 0; t < chains.size(); ++t) {
    if (chains[t].empty())
      throw ValidationError(where + ": chain " + std::to_string(t) + " is empty");
    for (int k : chains[t])
      if (k < 0 || k >= num_keys)
        throw ValidationError(where + ": chain " + std::to_string(t) +
                              " holds invalid key " + std::to_string(k));
  }
}

void check_distribution(const std::vector<double>& p, const std::string& where) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError(where + ": probabilities must be finite and nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw ValidationError(where + ": probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
}

}  // namespace

void KnownOrderInstance::validate() const {
  if (num_keys <= 0) throw ValidationError("known_order: num_keys must be positive");
  check_chains(num_keys, chains, "known_order");
  if (static_cast<int>(prior.size()) != num_keys)
    throw ValidationError("known_order: prior size must equal num_keys");
  check_distribution(prior, "known_order");
}

int ScenarioInstance::max_rounds() const {
  std::size_t m = 0;
  for (const Scenario& s : scenarios) m = std::max(m, s.chains.size());
  return static_cast<int>(m);
}

void ScenarioInstance::validate() const {
  if (num_keys <= 0) throw ValidationError("scenarios: num_keys must be positive");
  if (scenarios.empty()) throw ValidationError("scenarios: empty scenario list");
  double sum = 0.0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& s = scenarios[i];
    check_chains(num_keys, s.chains, "scenario " + std::to_string(i));
    if (s.correct_key < 0 || s.correct_key >= num_keys)
      throw ValidationError("scenario " + std::to_string(i) + ": invalid correct key");
    if (!(s.prob >= 0.0) || !std::isfinite(s.prob))
      throw ValidationError("scenario " + std::to_string(i) + ": invalid probability");
    sum += s.prob;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw ValidationError("scenarios: probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
}

int merge_duplicate_scenarios(ScenarioInstance& inst) {
  std::map<std::pair<std::vector<std::vector<int>>, int>, std::size_t> seen;
  std::vector<Scenario> merged;
  int merges = 0;
  for (const Scenario& s : inst.scenarios) {
    std::vector<std::vector<int>> key;
    key.reserve(s.chains.size());
    for (const auto& c : s.chains) key.push_back(canonical_chain(c));
    auto [it, inserted] = seen.try_emplace({std::move(key), s.correct_key}, merged.size());
    if (inserted) {
      merged.push_back(s);
    } else {
      merged[it->second].prob += s.prob;
      ++merges;
    }
  }
  inst.scenarios = std::move(merged);
  return merges;
}

void MultiKeyInstance::validate() const {
  if (num_keys <= 0) throw ValidationError("multi_key: num_keys must be positive");
  check_chains(num_keys, chains, "multi_key");
  if (mode == Mode::Dueling) {
    if (num_keys % 2 != 0)
      throw ValidationError("multi_key: dueling mode needs an even key count");
    if (static_cast<int>(pair_prob.size()) != num_keys / 2)
      throw ValidationError("multi_key: pair_prob size must be num_keys/2");
    for (double p : pair_prob)
      if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("multi_key: pair probabilities must lie in [0,1]");
  } else {
    if (static_cast<int>(accept_prob.size()) != num_keys)
      throw ValidationError("multi_key: accept_prob size must equal num_keys");
    for (double p : accept_prob)
      if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("multi_key: acceptance probabilities must lie in [0,1]");
  }
}

double InformationForest::scenario_reward(int k, int o, int s) const {
  const InfoSet& node = sets[o];
  for (std::size_t i = 0; i < node.consistent.size(); ++i)
    if (node.consistent[i] == s)
      return k == correct_key[s] ? node.exploit_reward[i] : 0.0;
  return 0.0;
}

InformationForest build_information_forest(const ScenarioInstance& inst) {
  inst.validate();
  InformationForest forest;
  forest.num_keys = inst.num_keys;
  forest.scenario_prob.reserve(inst.scenarios.size());
  forest.correct_key.reserve(inst.scenarios.size());
  for (const Scenario& s : inst.scenarios) {
    forest.scenario_prob.push_back(s.prob);
    forest.correct_key.push_back(s.correct_key);
  }

  // Dedupe prefixes: children of a node (or roots) keyed by canonical chain.
  std::map<std::pair<int, std::vector<int>>, int> index;
  forest.paths.resize(inst.scenarios.size());
  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    int parent = -1;
    for (std::size_t t = 0; t < inst.scenarios[s].chains.size(); ++t) {
      std::vector<int> chain = canonical_chain(inst.scenarios[s].chains[t]);
      auto [it, inserted] =
          index.try_emplace({parent, chain}, static_cast<int>(forest.sets.size()));
      if (inserted) {
        InfoSet node;
        node.parent = parent;
        node.depth = static_cast<int>(t) + 1;
        node.chain = chain;
        forest.sets.push_back(std::move(node));
        if (parent < 0)
          forest.roots.push_back(it->second);
        else
          forest.sets[parent].children.push_back(it->second);
      }
      forest.sets[it->second].consistent.push_back(static_cast<int>(s));
      forest.paths[s].push_back(it->second);
      parent = it->second;
    }
  }

  for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
    const Scenario& sc = inst.scenarios[s];
    // Suffix counts of the correct key's appearances, then per-set tail reward.
    int tail = 0;
    std::vector<int> future(sc.chains.size());
    for (int t = static_cast<int>(sc.chains.size()) - 1; t >= 0; --t) {
      const InfoSet& node = forest.sets[forest.paths[s][t]];
      bool on = std::binary_search(node.chain.begin(), node.chain.end(), sc.correct_key);
      if (on) ++tail;
      future[t] = on ? tail : 0;
    }
    for (std::size_t t = 0; t < sc.chains.size(); ++t)
      forest.sets[forest.paths[s][t]].exploit_reward.push_back(future[t]);
  }

  reweight_forest(forest, forest.scenario_prob);
  return forest;
}

void reweight_forest(InformationForest& forest, const std::vector<double>& prob) {
  if (prob.size() != forest.scenario_prob.size())
    throw ValidationError("reweight_forest: probability vector size mismatch");
  forest.scenario_prob = prob;
  for (InfoSet& node : forest.sets) {
    node.prob = 0.0;
    node.reward.assign(forest.num_keys, 0.0);
    for (std::size_t i = 0; i < node.consistent.size(); ++i) {
      int s = node.consistent[i];
      node.prob += prob[s];
      node.reward[forest.correct_key[s]] += prob[s] * node.exploit_reward[i];
    }
    if (node.prob > 0.0)
      for (double& r : node.reward) r /= node.prob;
    else
      std::fill(node.reward.begin(), node.reward.end(), 0.0);
  }
}

AdmissibilityReport validate_admissible(const InformationForest& forest,
                                        const Policy& policy) {
  AdmissibilityReport rep;
  if (policy.kind != Policy::Kind::Scenario ||
      policy.choice.size() != forest.sets.size()) {
    rep.ok = false;
    rep.message = "policy shape does not match the information forest";
    return rep;
  }
  for (int o = 0; o < static_cast<int>(forest.sets.size()); ++o) {
    int k = policy.choice[o];
    if (k != kNullKey && (k < 0 || k >= forest.num_keys)) {
      rep.ok = false;
      rep.first_set = o;
      rep.key = k;
      rep.message = "invalid key id at info set " + std::to_string(o);
      return rep;
    }
  }
  for (std::size_t s = 0; s < forest.paths.size(); ++s) {
    std::vector<int> first(forest.num_keys, -1);
    for (int o : forest.paths[s]) {
      int k = policy.choice[o];
      if (k == kNullKey) continue;
      if (first[k] >= 0) {
        rep.ok = false;
        rep.scenario = static_cast<int>(s);
        rep.key = k;
        rep.first_set = first[k];
        rep.second_set = o;
        std::ostringstream msg;
        msg << "key " << k << " repeated on the path of scenario " << s
            << " (info sets " << first[k] << " and " << o << ")";
        rep.message = msg.str();
        return rep;
      }
      first[k] = o;
    }
  }
  return rep;
}

double eval_scenario_policy(const InformationForest& forest, const Policy& policy) {
  AdmissibilityReport rep = validate_admissible(forest, policy);
  if (!rep.ok) throw ValidationError("inadmissible policy: " + rep.message);
  double total = 0.0;
  for (std::size_t o = 0; o < forest.sets.size(); ++o) {
    int k = policy.choice[o];
    if (k == kNullKey) continue;
    total += forest.sets[o].prob * forest.sets[o].reward[k];
  }
  return total;
}

double scenario_utility(const InformationForest& forest, const Policy& policy, int s) {
  double total = 0.0;
  for (int o : forest.paths[s]) {
    int k = policy.choice[o];
    if (k == kNullKey) continue;
    total += forest.scenario_reward(k, o, s);
  }
  return total;
}

std::vector<std::vector<double>> known_order_rewards(const KnownOrderInstance& inst) {
  inst.validate();
  int m = static_cast<int>(inst.chains.size());
  std::vector<std::vector<int>> chains;
  chains.reserve(m);
  for (const auto& c : inst.chains) chains.push_back(canonical_chain(c));
  std::vector<std::vector<double>> w(inst.num_keys, std::vector<double>(m, 0.0));
  for (int k = 0; k < inst.num_keys; ++k) {
    int tail = 0;
    for (int t = m - 1; t >= 0; --t) {
      bool on = std::binary_search(chains[t].begin(), chains[t].end(), k);
      if (on) ++tail;
      w[k][t] = on ? inst.prior[k] * tail : 0.0;
    }
  }
  return w;
}

double eval_known_order_policy(const KnownOrderInstance& inst, const Policy& policy) {
  if (policy.kind != Policy::Kind::KnownOrder ||
      policy.choice.size() != inst.chains.size())
    throw ValidationError("policy shape does not match the chain sequence");
  std::vector<char> used(inst.num_keys, 0);
  for (std::size_t t = 0; t < policy.choice.size(); ++t) {
    int k = policy.choice[t];
    if (k == kNullKey) continue;
    if (k < 0 || k >= inst.num_keys)
      throw ValidationError("invalid key at round " + std::to_string(t + 1));
    if (used[k])
      throw ValidationError("key " + std::to_string(k) + " played twice");
    used[k] = 1;
  }
  auto w = known_order_rewards(inst);
  double total = 0.0;
  for (std::size_t t = 0; t < policy.choice.size(); ++t)
    if (policy.choice[t] != kNullKey) total += w[policy.choice[t]][t];
  return total;
}

namespace {

int sample_index(const std::vector<double>& prob, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    acc += prob[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(prob.size()) - 1;
}

}  // namespace

SimulationResult simulate(const ScenarioInstance& inst, const InformationForest& forest,
                          const Policy& policy, std::uint64_t seed, int trials) {
  AdmissibilityReport rep = validate_admissible(forest, policy);
  if (!rep.ok) throw ValidationError("inadmissible policy: " + rep.message);
  SimulationResult result;
  result.rewards.reserve(trials);
  double sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    int s = sample_index(forest.scenario_prob, rng);
    const Scenario& sc = inst.scenarios[s];
    double reward = 0.0;
    bool found = false;
    for (std::size_t t = 0; t < sc.chains.size(); ++t) {
      const InfoSet& node = forest.sets[forest.paths[s][t]];
      bool correct_on =
          std::binary_search(node.chain.begin(), node.chain.end(), sc.correct_key);
      if (found) {
        if (correct_on) reward += 1.0;
        continue;
      }
      int k = policy.choice[forest.paths[s][t]];
      if (k == kNullKey) continue;
      if (!std::binary_search(node.chain.begin(), node.chain.end(), k)) continue;
      if (k == sc.correct_key) {
        reward += 1.0;
        found = true;
      }
    }
    result.rewards.push_back(reward);
    sum += reward;
  }
  result.mean = trials > 0 ? sum / trials : 0.0;
  return result;
}

SimulationResult simulate(const KnownOrderInstance& inst, const Policy& policy,
                          std::uint64_t seed, int trials) {
  inst.validate();
  if (policy.kind != Policy::Kind::KnownOrder ||
      policy.choice.size() != inst.chains.size())
    throw ValidationError("policy shape does not match the chain sequence");
  std::vector<std::vector<int>> chains;
  for (const auto& c : inst.chains) chains.push_back(canonical_chain(c));
  SimulationResult result;
  result.rewards.reserve(trials);
  double sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    int correct = sample_index(inst.prior, rng);
    double reward = 0.0;
    bool found = false;
    for (std::size_t t = 0; t < chains.size(); ++t) {
      bool correct_on =
          std::binary_search(chains[t].begin(), chains[t].end(), correct);
      if (found) {
        if (correct_on) reward += 1.0;
        continue;
      }
      int k = policy.choice[t];
      if (k == kNullKey || !std::binary_search(chains[t].begin(), chains[t].end(), k))
        continue;
      if (k == correct) {
        reward += 1.0;
        found = true;
      }
    }
    result.rewards.push_back(reward);
    sum += reward;
  }
  result.mean = trials > 0 ? sum / trials : 0.0;
  return result;
}

ScenarioInstance embed_known_order(const KnownOrderInstance& inst) {
  inst.validate();
  ScenarioInstance out;
  out.num_keys = inst.num_keys;
  out.scenarios.reserve(inst.num_keys);
  for (int k = 0; k < inst.num_keys; ++k)
    out.scenarios.push_back({inst.chains, k, inst.prior[k]});
  return out;
}

}  // namespace keychain
