#include "keychain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace keychain {

namespace {

constexpr int kMaxOneKeyKeys = 20;
constexpr int kMaxOneKeySets = 5000;
constexpr int kMaxMultiKeys = 32;
constexpr int kMaxMultiChains = 24;
constexpr std::size_t kMaxMemoStates = 30'000'000;

struct OneKeySolver {
  const InformationForest& forest;
  const std::vector<double>& prob;
  std::unordered_map<std::uint64_t, double> memo;

  static std::uint64_t pack(int o, std::uint32_t tested) {
    return (static_cast<std::uint64_t>(o) << 32) | tested;
  }

  // Unnormalized value: scenario weights are global probabilities, so the
  // forest total is just the sum over roots.
  double value(int o, std::uint32_t tested) {
    const InfoSet& node = forest.sets[o];
    double active = 0.0;
    for (int s : node.consistent)
      if (!(tested >> forest.correct_key[s] & 1)) active += prob[s];
    if (active <= 0.0) return 0.0;
    auto it = memo.find(pack(o, tested));
    if (it != memo.end()) return it->second;

    double best = 0.0;
    for (int c : node.children) best += value(c, tested);
    for (int k : node.chain) {
      if (tested >> k & 1) continue;
      double imm = 0.0, hit = 0.0;
      for (std::size_t i = 0; i < node.consistent.size(); ++i) {
        int s = node.consistent[i];
        if (forest.correct_key[s] != k) continue;
        hit += prob[s];
        imm += prob[s] * node.exploit_reward[i];
      }
      if (hit <= 0.0) continue;  // testing k reveals nothing here
      double cand = imm;
      for (int c : node.children) cand += value(c, tested | (1u << k));
      best = std::max(best, cand);
    }
    memo.emplace(pack(o, tested), best);
    return best;
  }

  // Re-derives the argmax along the unique reachable (set, tested) states.
  void extract(int o, std::uint32_t tested, Policy& policy) {
    const InfoSet& node = forest.sets[o];
    double active = 0.0;
    for (int s : node.consistent)
      if (!(tested >> forest.correct_key[s] & 1)) active += prob[s];
    if (active <= 0.0) return;

    double best = 0.0;
    for (int c : node.children) best += value(c, tested);
    int action = kNullKey;
    for (int k : node.chain) {
      if (tested >> k & 1) continue;
      double imm = 0.0, hit = 0.0;
      for (std::size_t i = 0; i < node.consistent.size(); ++i) {
        int s = node.consistent[i];
        if (forest.correct_key[s] != k) continue;
        hit += prob[s];
        imm += prob[s] * node.exploit_reward[i];
      }
      if (hit <= 0.0) continue;
      double cand = imm;
      for (int c : node.children) cand += value(c, tested | (1u << k));
      if (cand > best + 1e-12) {
        best = cand;
        action = k;
      }
    }
    policy.choice[o] = action;
    std::uint32_t next = action == kNullKey ? tested : tested | (1u << action);
    for (int c : node.children) extract(c, next, policy);
  }
};

}  // namespace

OneKeySolution solve_one_key_forest(const InformationForest& forest,
                                    const std::vector<double>& scenario_prob) {
  if (forest.num_keys > kMaxOneKeyKeys)
    throw SolverError("one-key oracle: too many keys (limit " +
                      std::to_string(kMaxOneKeyKeys) + ")");
  if (forest.sets.size() > kMaxOneKeySets)
    throw SolverError("one-key oracle: too many information sets (limit " +
                      std::to_string(kMaxOneKeySets) + ")");
  if (scenario_prob.size() != forest.scenario_prob.size())
    throw ValidationError("one-key oracle: probability vector size mismatch");

  OneKeySolver solver{forest, scenario_prob, {}};
  OneKeySolution sol;
  sol.policy.kind = Policy::Kind::Scenario;
  sol.policy.choice.assign(forest.sets.size(), kNullKey);
  for (int r : forest.roots) sol.value += solver.value(r, 0);
  for (int r : forest.roots) solver.extract(r, 0, sol.policy);
  return sol;
}

OneKeySolution solve_one_key_mdp(const ScenarioInstance& inst) {
  InformationForest forest = build_information_forest(inst);
  return solve_one_key_forest(forest, forest.scenario_prob);
}

namespace {

struct MultiKeySolver {
  const MultiKeyInstance& inst;
  std::vector<std::vector<int>> chains;
  // Keys appearing on chains t or later; status bits of other keys cannot
  // influence the value from round t on and are dropped from the memo key.
  std::vector<std::uint32_t> future;
  bool constrained = false;
  // memo[t] keyed by (correct_mask << 32 | incorrect_mask)
  std::vector<std::unordered_map<std::uint64_t, double>> memo;
  std::size_t states = 0;

  explicit MultiKeySolver(const MultiKeyInstance& i) : inst(i) {
    for (const auto& c : i.chains) chains.push_back(canonical_chain(c));
    memo.assign(chains.size() + 1, {});
    future.assign(chains.size() + 1, 0);
    for (std::size_t t = chains.size(); t-- > 0;) {
      future[t] = future[t + 1];
      for (int k : chains[t]) future[t] |= 1u << k;
    }
  }

  double prob_correct(int k) const {
    if (inst.mode == MultiKeyInstance::Mode::Independent) return inst.accept_prob[k];
    double p = inst.pair_prob[k / 2];
    return k % 2 == 0 ? p : 1.0 - p;
  }

  double value(std::size_t t, std::uint32_t correct, std::uint32_t wrong) {
    if (t == chains.size()) return 0.0;
    std::uint64_t key =
        (static_cast<std::uint64_t>(correct & future[t]) << 32) |
        (wrong & future[t]);
    auto it = memo[t].find(key);
    if (it != memo[t].end()) return it->second;
    if (++states > kMaxMemoStates)
      throw SolverError("multi-key oracle: state budget exceeded");

    double pass = value(t + 1, correct, wrong);
    bool correct_available = false;
    for (int k : chains[t])
      if (correct >> k & 1) correct_available = true;

    double best;
    if (constrained && correct_available) {
      best = 1.0 + pass;  // forced replay of an identified key
    } else {
      best = pass;
      if (correct_available) best = std::max(best, 1.0 + pass);
      for (int k : chains[t]) {
        if ((correct >> k & 1) || (wrong >> k & 1)) continue;
        best = std::max(best, test_value(t, correct, wrong, k, pass));
      }
    }
    memo[t].emplace(key, best);
    return best;
  }

  double test_value(std::size_t t, std::uint32_t correct, std::uint32_t wrong, int k,
                    double pass) {
    double q = prob_correct(k);
    if (inst.mode == MultiKeyInstance::Mode::Independent) {
      double win = q > 0.0 ? 1.0 + value(t + 1, correct | (1u << k), wrong) : 0.0;
      double lose = q < 1.0 ? value(t + 1, correct, wrong | (1u << k)) : 0.0;
      return q * win + (1.0 - q) * lose;
    }
    int partner = k ^ 1;
    double win = q > 0.0
                     ? 1.0 + value(t + 1, correct | (1u << k), wrong | (1u << partner))
                     : 0.0;
    double lose =
        q < 1.0 ? value(t + 1, correct | (1u << partner), wrong | (1u << k)) : 0.0;
    return q * win + (1.0 - q) * lose;
  }

  int first_action(std::uint32_t correct, std::uint32_t wrong) {
    if (chains.empty()) return kNullKey;
    double pass = value(1, correct, wrong);
    double best = pass;
    int action = kNullKey;
    for (int k : chains[0])
      if (correct >> k & 1) {
        if (1.0 + pass > best + 1e-12) {
          best = 1.0 + pass;
          action = k;
        }
        break;
      }
    for (int k : chains[0]) {
      if ((correct >> k & 1) || (wrong >> k & 1)) continue;
      double cand = test_value(0, correct, wrong, k, pass);
      if (cand > best + 1e-12) {
        best = cand;
        action = k;
      }
    }
    return action;
  }
};

}  // namespace

MultiKeySolution solve_multi_key_mdp(const MultiKeyInstance& inst) {
  inst.validate();
  if (inst.num_keys > kMaxMultiKeys)
    throw SolverError("multi-key oracle: too many keys (limit " +
                      std::to_string(kMaxMultiKeys) + ")");
  if (inst.chains.size() > kMaxMultiChains)
    throw SolverError("multi-key oracle: too many chains (limit " +
                      std::to_string(kMaxMultiChains) + ")");

  // Probability-0/1 keys start out resolved.
  std::uint32_t correct = 0, wrong = 0;
  if (inst.mode == MultiKeyInstance::Mode::Independent) {
    for (int k = 0; k < inst.num_keys; ++k) {
      if (inst.accept_prob[k] == 1.0) correct |= 1u << k;
      if (inst.accept_prob[k] == 0.0) wrong |= 1u << k;
    }
  } else {
    for (int i = 0; i < inst.num_keys / 2; ++i) {
      if (inst.pair_prob[i] == 1.0) {
        correct |= 1u << (2 * i);
        wrong |= 1u << (2 * i + 1);
      } else if (inst.pair_prob[i] == 0.0) {
        correct |= 1u << (2 * i + 1);
        wrong |= 1u << (2 * i);
      }
    }
  }

  MultiKeySolution sol;
  {
    MultiKeySolver solver(inst);
    sol.value = solver.value(0, correct, wrong);
    sol.first_action = solver.first_action(correct, wrong);
  }
  {
    MultiKeySolver solver(inst);
    solver.constrained = true;
    sol.exploit_value = solver.value(0, correct, wrong);
  }
  return sol;
}

}  // namespace keychain
