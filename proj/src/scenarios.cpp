#include "keychain/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace keychain {

LaminarMatchingInstance reduce_to_mwlm(const InformationForest& forest) {
  LaminarMatchingInstance inst;
  inst.num_left = forest.num_keys;
  inst.capacity.assign(forest.num_keys, 1);
  inst.types.reserve(forest.sets.size());
  for (const InfoSet& node : forest.sets) {
    TypeSet t = node.consistent;
    std::sort(t.begin(), t.end());
    inst.types.push_back(std::move(t));
  }
  inst.weight.assign(forest.num_keys,
                     std::vector<double>(forest.sets.size(), 0.0));
  for (std::size_t o = 0; o < forest.sets.size(); ++o)
    for (int k = 0; k < forest.num_keys; ++k)
      inst.weight[k][o] = forest.sets[o].prob * forest.sets[o].reward[k];
  inst.validate();
  return inst;
}

Policy matching_to_policy(const InformationForest& forest,
                          const LaminarMatching& matching) {
  Policy policy;
  policy.kind = Policy::Kind::Scenario;
  policy.choice.assign(forest.sets.size(), kNullKey);
  for (auto [k, o] : matching.edges) {
    if (k < 0 || k >= forest.num_keys || o < 0 ||
        o >= static_cast<int>(forest.sets.size()))
      throw ValidationError("matching edge out of range");
    if (policy.choice[o] != kNullKey)
      throw ValidationError("matching assigns info set " + std::to_string(o) +
                            " twice");
    policy.choice[o] = k;
  }
  return policy;
}

LaminarMatching policy_to_matching(const InformationForest& forest,
                                   const Policy& policy) {
  AdmissibilityReport rep = validate_admissible(forest, policy);
  if (!rep.ok) throw ValidationError("inadmissible policy: " + rep.message);
  LaminarMatching matching;
  for (std::size_t o = 0; o < policy.choice.size(); ++o)
    if (policy.choice[o] != kNullKey)
      matching.edges.emplace_back(policy.choice[o], static_cast<int>(o));
  return matching;
}

AuctionInstance reduce_mwlm_to_auction(const LaminarMatchingInstance& inst) {
  inst.validate();
  AuctionInstance auction;
  auction.bidders.reserve(inst.num_left);
  for (int i = 0; i < inst.num_left; ++i)
    auction.bidders.push_back({inst.weight[i], LaminarFamily{inst.types},
                               inst.capacity[i]});
  return auction;
}

LaminarMatching allocation_to_matching(const LaminarMatchingInstance& inst,
                                       const std::vector<std::vector<int>>& allocation) {
  if (static_cast<int>(allocation.size()) != inst.num_left)
    throw ValidationError("allocation must have one bundle per bidder");
  std::vector<char> used(inst.types.size(), 0);
  LaminarMatching matching;
  for (int i = 0; i < inst.num_left; ++i) {
    for (int o : allocation[i]) {
      if (o < 0 || o >= inst.num_right())
        throw ValidationError("allocation item out of range");
      if (used[o])
        throw ValidationError("item " + std::to_string(o) +
                              " allocated to two bidders");
      used[o] = 1;
      matching.edges.emplace_back(i, o);
    }
  }
  validate_matching(inst, matching);
  return matching;
}

LpRelaxation solve_lp_relaxation(const InformationForest& forest) {
  int n = forest.num_keys;
  int sets = static_cast<int>(forest.sets.size());
  auto var = [sets](int k, int o) { return k * sets + o; };

  LinearProgram lp;
  lp.num_vars = n * sets;
  lp.objective.assign(lp.num_vars, 0.0);
  for (int k = 0; k < n; ++k)
    for (int o = 0; o < sets; ++o)
      lp.objective[var(k, o)] = forest.sets[o].prob * forest.sets[o].reward[k];

  for (int o = 0; o < sets; ++o) {
    LinearProgram::Row row;
    row.coeffs.assign(lp.num_vars, 0.0);
    for (int k = 0; k < n; ++k) row.coeffs[var(k, o)] = 1.0;
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (int k = 0; k < n; ++k) {
    for (const auto& path : forest.paths) {
      LinearProgram::Row row;
      row.coeffs.assign(lp.num_vars, 0.0);
      for (int o : path) row.coeffs[var(k, o)] = 1.0;
      row.rhs = 1.0;
      lp.rows.push_back(std::move(row));
    }
  }

  LpRelaxation rel;
  rel.raw = solve_lp(lp);
  rel.value = rel.raw.value;
  rel.fractional.x.assign(n, std::vector<double>(sets, 0.0));
  for (int k = 0; k < n; ++k)
    for (int o = 0; o < sets; ++o)
      rel.fractional.x[k][o] = std::clamp(rel.raw.x[var(k, o)], 0.0, 1.0);
  return rel;
}

PreallocationRounder::PreallocationRounder(const InformationForest& forest,
                                           FractionalPolicy fractional)
    : forest_(forest), x_(std::move(fractional)) {
  if (static_cast<int>(x_.x.size()) != forest.num_keys)
    throw ValidationError("rounding: fractional policy has wrong key count");
  for (auto& row : x_.x) {
    if (row.size() != forest.sets.size())
      throw ValidationError("rounding: fractional policy has wrong set count");
    for (double& v : row) {
      if (!std::isfinite(v)) throw ValidationError("rounding: non-finite entry");
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  for (std::size_t k = 0; k < x_.x.size(); ++k) {
    for (const auto& path : forest.paths) {
      double sum = 0.0;
      for (int o : path) sum += x_.x[k][o];
      if (sum > 1.0 + 1e-7)
        throw ValidationError("rounding: key mass exceeds 1 along a path");
    }
  }
}

double PreallocationRounder::guarantee_factor() const {
  double n = std::max(1, forest_.num_keys);
  return 1.0 - std::pow(1.0 - 1.0 / n, n);
}

namespace {

int sample_scenario(const std::vector<double>& prob, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t s = 0; s < prob.size(); ++s) {
    acc += prob[s];
    if (u < acc) return static_cast<int>(s);
  }
  return static_cast<int>(prob.size()) - 1;
}

}  // namespace

double PreallocationRounder::trial_reward(std::uint64_t seed,
                                          std::uint64_t trial) const {
  std::mt19937_64 rng(trial_seed(seed, trial));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int s = sample_scenario(forest_.scenario_prob, rng);
  int n = forest_.num_keys;
  std::vector<char> allocated(n, 0);
  std::vector<double> cum(n, 0.0);
  for (int o : forest_.paths[s]) {
    const InfoSet& node = forest_.sets[o];
    int play = kNullKey;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
      if (!allocated[k]) {
        double denom = 1.0 - cum[k];
        double p = denom <= 1e-12 ? 0.0 : std::min(1.0, x_.x[k][o] / denom);
        if (p > 0.0 && unif(rng) < p) {
          allocated[k] = 1;
          if (node.reward[k] > best) {
            best = node.reward[k];
            play = k;
          }
        }
      }
      cum[k] += x_.x[k][o];
    }
    if (play != kNullKey && play == forest_.correct_key[s] &&
        std::binary_search(node.chain.begin(), node.chain.end(), play))
      return forest_.scenario_reward(play, o, s);  // exploitation tail included
  }
  return 0.0;
}

Policy PreallocationRounder::sample_policy(std::uint64_t seed,
                                           std::uint64_t repetition) const {
  std::mt19937_64 rng(trial_seed(seed ^ 0xa5c1e5u, repetition));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Policy policy;
  policy.kind = Policy::Kind::Scenario;
  policy.choice.assign(forest_.sets.size(), kNullKey);
  int n = forest_.num_keys;

  // Depth-first: each node sees exactly the state of its ancestor path.
  struct Frame {
    int set;
    std::vector<char> allocated;
    std::vector<double> cum;
  };
  std::vector<Frame> stack;
  for (auto it = forest_.roots.rbegin(); it != forest_.roots.rend(); ++it)
    stack.push_back({*it, std::vector<char>(n, 0), std::vector<double>(n, 0.0)});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    const InfoSet& node = forest_.sets[frame.set];
    int play = kNullKey;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
      if (!frame.allocated[k]) {
        double denom = 1.0 - frame.cum[k];
        double p = denom <= 1e-12 ? 0.0 : std::min(1.0, x_.x[k][frame.set] / denom);
        if (p > 0.0 && unif(rng) < p) {
          frame.allocated[k] = 1;
          if (node.reward[k] > best) {
            best = node.reward[k];
            play = k;
          }
        }
      }
      frame.cum[k] += x_.x[k][frame.set];
    }
    policy.choice[frame.set] = play;
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
      stack.push_back({*it, frame.allocated, frame.cum});
  }
  return policy;
}

PreallocationRounder::McResult PreallocationRounder::monte_carlo(std::uint64_t seed,
                                                                 int trials) const {
  McResult result;
  int n = forest_.num_keys;
  result.inclusion_freq.assign(forest_.sets.size(), std::vector<double>(n, 0.0));
  result.visits.assign(forest_.sets.size(), 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    int s = sample_scenario(forest_.scenario_prob, rng);
    std::vector<char> allocated(n, 0);
    std::vector<double> cum(n, 0.0);
    double reward = 0.0;
    bool done = false;
    for (int o : forest_.paths[s]) {
      const InfoSet& node = forest_.sets[o];
      ++result.visits[o];
      int play = kNullKey;
      double best = -1.0;
      for (int k = 0; k < n; ++k) {
        if (!allocated[k]) {
          double denom = 1.0 - cum[k];
          double p = denom <= 1e-12 ? 0.0 : std::min(1.0, x_.x[k][o] / denom);
          if (p > 0.0 && unif(rng) < p) {
            allocated[k] = 1;
            result.inclusion_freq[o][k] += 1.0;
            if (node.reward[k] > best) {
              best = node.reward[k];
              play = k;
            }
          }
        }
        cum[k] += x_.x[k][o];
      }
      if (!done && play != kNullKey && play == forest_.correct_key[s] &&
          std::binary_search(node.chain.begin(), node.chain.end(), play)) {
        reward = forest_.scenario_reward(play, o, s);
        done = true;
        // keep walking so inclusion frequencies cover the whole path
      }
    }
    sum += reward;
    sumsq += reward * reward;
  }
  if (trials > 0) {
    result.mean = sum / trials;
    double var = std::max(0.0, sumsq / trials - result.mean * result.mean);
    result.std_error = std::sqrt(var / trials);
    for (std::size_t o = 0; o < result.inclusion_freq.size(); ++o)
      if (result.visits[o] > 0)
        for (double& f : result.inclusion_freq[o]) f /= result.visits[o];
  }
  return result;
}

Policy greedy_policy(const InformationForest& forest) {
  Policy policy;
  policy.kind = Policy::Kind::Scenario;
  policy.choice.assign(forest.sets.size(), kNullKey);
  struct Frame {
    int set;
    std::vector<char> used;
  };
  std::vector<Frame> stack;
  for (int r : forest.roots)
    stack.push_back({r, std::vector<char>(forest.num_keys, 0)});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    const InfoSet& node = forest.sets[frame.set];
    int pick = kNullKey;
    double best = 0.0;
    for (int k = 0; k < forest.num_keys; ++k)
      if (!frame.used[k] && node.reward[k] > best) {
        best = node.reward[k];
        pick = k;
      }
    policy.choice[frame.set] = pick;
    if (pick != kNullKey) frame.used[pick] = 1;
    for (int c : node.children) stack.push_back({c, frame.used});
  }
  return policy;
}

ApproxResult approx_solve(const ScenarioInstance& inst, std::uint64_t seed,
                          int repetitions) {
  if (repetitions < 1) throw ValidationError("approx_solve: repetitions must be >= 1");
  InformationForest forest = build_information_forest(inst);
  LpRelaxation rel = solve_lp_relaxation(forest);
  PreallocationRounder rounder(forest, rel.fractional);

  ApproxResult result;
  result.lp_value = rel.value;
  result.guarantee = rounder.guarantee_factor() * rel.value;
  result.value = -1.0;
  for (int rep = 0; rep < repetitions; ++rep) {
    Policy candidate = rounder.sample_policy(seed, rep);
    double v = eval_scenario_policy(forest, candidate);
    if (v > result.value) {
      result.value = v;
      result.policy = std::move(candidate);
    }
  }
  return result;
}

long long sample_count(int num_keys, int max_rounds, int num_sets, double epsilon,
                       double delta) {
  if (epsilon <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw ValidationError("sampling: epsilon and delta must be positive (delta < 1)");
  double m = max_rounds, O = num_sets, n = num_keys;
  double h = 2.0 * m * m * O * O * (std::log(n * O / delta) + 1.0) /
             (epsilon * epsilon);
  return static_cast<long long>(std::ceil(h));
}

WeightEstimate estimate_weights_from_samples(const InformationForest& forest,
                                             const std::function<int()>& sampler,
                                             double epsilon, double delta) {
  int max_rounds = 0;
  for (const auto& path : forest.paths)
    max_rounds = std::max<int>(max_rounds, static_cast<int>(path.size()));
  WeightEstimate est;
  est.samples = sample_count(forest.num_keys, max_rounds,
                             static_cast<int>(forest.sets.size()), epsilon, delta);
  est.weight.assign(forest.num_keys,
                    std::vector<double>(forest.sets.size(), 0.0));
  for (long long i = 0; i < est.samples; ++i) {
    int s = sampler();
    if (s < 0 || s >= static_cast<int>(forest.paths.size()))
      throw ValidationError("sampling: scenario id out of range");
    int k = forest.correct_key[s];
    for (std::size_t t = 0; t < forest.paths[s].size(); ++t) {
      int o = forest.paths[s][t];
      const InfoSet& node = forest.sets[o];
      for (std::size_t j = 0; j < node.consistent.size(); ++j)
        if (node.consistent[j] == s) {
          est.weight[k][o] += node.exploit_reward[j];
          break;
        }
    }
  }
  for (auto& row : est.weight)
    for (double& v : row) v /= static_cast<double>(est.samples);
  return est;
}

}  // namespace keychain
