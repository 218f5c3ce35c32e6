#include "keychain/obm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

#include "keychain/common.hpp"

namespace keychain {

void WobmInstance::validate() const {
  if (num_offline <= 0) throw ValidationError("wobm: num_offline must be positive");
  if (num_arrivals <= 0) throw ValidationError("wobm: num_arrivals must be positive");
  if (static_cast<int>(capacity.size()) != num_offline)
    throw ValidationError("wobm: capacity size mismatch");
  for (int b : capacity)
    if (b < 1) throw ValidationError("wobm: capacities must be at least 1");
  if (support.empty()) throw ValidationError("wobm: empty support");
  double sum = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const Support& sup = support[s];
    if (static_cast<int>(sup.weight.size()) != num_offline)
      throw ValidationError("wobm: support " + std::to_string(s) +
                            " weight row count mismatch");
    for (const auto& row : sup.weight) {
      if (static_cast<int>(row.size()) != num_arrivals)
        throw ValidationError("wobm: support " + std::to_string(s) +
                              " weight column count mismatch");
      for (double w : row)
        if (!std::isfinite(w) || w < 0.0)
          throw ValidationError("wobm: weights must be finite and nonnegative");
    }
    if (!(sup.prob >= 0.0) || !std::isfinite(sup.prob))
      throw ValidationError("wobm: invalid support probability");
    sum += sup.prob;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw ValidationError("wobm: support probabilities sum to " +
                          std::to_string(sum) + ", expected 1");
}

WobmForest build_wobm_forest(const WobmInstance& inst) {
  inst.validate();
  WobmForest forest;
  forest.num_offline = inst.num_offline;
  forest.capacity = inst.capacity;
  for (const auto& sup : inst.support) forest.scenario_prob.push_back(sup.prob);
  forest.paths.resize(inst.support.size());

  std::map<std::pair<int, std::vector<double>>, int> index;
  for (std::size_t s = 0; s < inst.support.size(); ++s) {
    int parent = -1;
    for (int j = 0; j < inst.num_arrivals; ++j) {
      std::vector<double> column(inst.num_offline);
      for (int i = 0; i < inst.num_offline; ++i)
        column[i] = inst.support[s].weight[i][j];
      auto [it, inserted] =
          index.try_emplace({parent, column}, static_cast<int>(forest.sets.size()));
      if (inserted) {
        WobmForest::Node node;
        node.parent = parent;
        node.depth = j + 1;
        node.weight = column;
        forest.sets.push_back(std::move(node));
        if (parent < 0)
          forest.roots.push_back(it->second);
        else
          forest.sets[parent].children.push_back(it->second);
      }
      forest.sets[it->second].consistent.push_back(static_cast<int>(s));
      forest.sets[it->second].prob += inst.support[s].prob;
      forest.paths[s].push_back(it->second);
      parent = it->second;
    }
  }
  return forest;
}

LaminarMatchingInstance reduce_wobm_to_mwlbm(const WobmInstance& inst) {
  WobmForest forest = build_wobm_forest(inst);
  LaminarMatchingInstance out;
  out.num_left = inst.num_offline;
  out.capacity = inst.capacity;
  out.types.reserve(forest.sets.size());
  for (const auto& node : forest.sets) out.types.push_back(node.consistent);
  out.weight.assign(inst.num_offline,
                    std::vector<double>(forest.sets.size(), 0.0));
  for (std::size_t o = 0; o < forest.sets.size(); ++o)
    for (int i = 0; i < inst.num_offline; ++i)
      out.weight[i][o] = forest.sets[o].prob * forest.sets[o].weight[i];
  out.validate();
  return out;
}

namespace {

int sample_support(const std::vector<double>& prob, std::mt19937_64& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t s = 0; s < prob.size(); ++s) {
    acc += prob[s];
    if (u < acc) return static_cast<int>(s);
  }
  return static_cast<int>(prob.size()) - 1;
}

}  // namespace

WobmResult solve_wobm(const WobmInstance& inst, std::uint64_t seed, int trials) {
  WobmForest forest = build_wobm_forest(inst);
  int n = inst.num_offline;
  int sets = static_cast<int>(forest.sets.size());
  auto var = [sets](int i, int o) { return i * sets + o; };

  LinearProgram lp;
  lp.num_vars = n * sets;
  lp.objective.assign(lp.num_vars, 0.0);
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < sets; ++o)
      lp.objective[var(i, o)] = forest.sets[o].prob * forest.sets[o].weight[i];
  for (int o = 0; o < sets; ++o) {
    LinearProgram::Row row;
    row.coeffs.assign(lp.num_vars, 0.0);
    for (int i = 0; i < n; ++i) row.coeffs[var(i, o)] = 1.0;
    row.rhs = 1.0;
    lp.rows.push_back(std::move(row));
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& path : forest.paths) {
      LinearProgram::Row row;
      row.coeffs.assign(lp.num_vars, 0.0);
      for (int o : path) row.coeffs[var(i, o)] = 1.0;
      row.rhs = inst.capacity[i];
      lp.rows.push_back(std::move(row));
    }
  }
  LpSolution sol = solve_lp(lp);

  WobmResult result;
  result.lp_value = sol.value;
  result.guarantee = (1.0 - std::exp(-1.0)) * sol.value;
  result.trials = trials;
  result.fractional.assign(n, std::vector<double>(sets, 0.0));
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < sets; ++o)
      result.fractional[i][o] = std::clamp(sol.x[var(i, o)], 0.0, 1.0);

  // Rounding: a node's fractional mass along a path fills b_i unit slots in
  // order; each slot runs the conditional preallocation loop, and a fired
  // slot is consumed whether or not the node is the one matched.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    int s = sample_support(forest.scenario_prob, rng);
    std::vector<double> cum(n, 0.0);
    std::vector<int> spent(n, 0);
    double reward = 0.0;
    for (int o : forest.paths[s]) {
      const auto& node = forest.sets[o];
      int play = -1;
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        double mass = result.fractional[i][o];
        if (spent[i] < inst.capacity[i] && mass > 0.0) {
          double miss = 1.0;
          for (int slot = static_cast<int>(std::floor(cum[i]));
               slot < inst.capacity[i] && slot < cum[i] + mass; ++slot) {
            double prev = std::clamp(cum[i] - slot, 0.0, 1.0);
            double part = std::clamp(cum[i] + mass - slot, 0.0, 1.0) - prev;
            if (part <= 0.0) continue;
            double denom = 1.0 - prev;
            if (denom > 1e-12) miss *= 1.0 - std::min(1.0, part / denom);
          }
          if (unif(rng) < 1.0 - miss) {
            ++spent[i];
            if (node.weight[i] > best) {
              best = node.weight[i];
              play = i;
            }
          }
        }
        cum[i] += mass;
      }
      if (play >= 0) reward += best;
    }
    sum += reward;
    sumsq += reward * reward;
  }
  if (trials > 0) {
    result.achieved = sum / trials;
    double var_est = std::max(0.0, sumsq / trials - result.achieved * result.achieved);
    result.std_error = std::sqrt(var_est / trials);
  }
  return result;
}

double philosopher_oracle(const WobmInstance& inst) {
  inst.validate();
  if (inst.num_offline * inst.num_arrivals > 12)
    throw SolverError("philosopher oracle: instance too large");
  long long space = 1;
  for (int b : inst.capacity) {
    space *= b + 1;
    if (space > 100000) throw SolverError("philosopher oracle: capacity space too large");
  }
  WobmForest forest = build_wobm_forest(inst);
  int n = inst.num_offline;
  std::vector<long long> radix(n, 1);
  for (int i = 1; i < n; ++i) radix[i] = radix[i - 1] * (inst.capacity[i - 1] + 1);

  // Unnormalized value over global probabilities, summed over roots.
  std::vector<std::unordered_map<long long, double>> memo(forest.sets.size());
  auto value = [&](auto&& self, int o, long long res) -> double {
    auto it = memo[o].find(res);
    if (it != memo[o].end()) return it->second;
    const auto& node = forest.sets[o];
    double skip = 0.0;
    for (int c : node.children) skip += self(self, c, res);
    double best = skip;
    for (int i = 0; i < n; ++i) {
      long long units = res / radix[i] % (inst.capacity[i] + 1);
      if (units == 0 || node.weight[i] <= 0.0) continue;
      double cand = node.prob * node.weight[i];
      for (int c : node.children) cand += self(self, c, res - radix[i]);
      best = std::max(best, cand);
    }
    memo[o].emplace(res, best);
    return best;
  };
  long long full = 0;
  for (int i = 0; i < n; ++i) full += radix[i] * inst.capacity[i];
  double total = 0.0;
  for (int r : forest.roots) total += value(value, r, full);
  return total;
}

}  // namespace keychain
