#include "keychain/order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace keychain {

void OrderInstance::validate() const {
  KnownOrderInstance tmp{num_keys, chains, prior};
  tmp.validate();
}

namespace {

KnownOrderInstance ordered_instance(const OrderInstance& inst,
                                    const std::vector<int>& sigma) {
  KnownOrderInstance out;
  out.num_keys = inst.num_keys;
  out.prior = inst.prior;
  out.chains.reserve(sigma.size());
  for (int c : sigma) out.chains.push_back(inst.chains[c]);
  return out;
}

void check_sigma(const OrderInstance& inst, const std::vector<int>& sigma) {
  if (sigma.size() != inst.chains.size())
    throw ValidationError("order: sigma must order every chain");
  std::vector<char> seen(inst.chains.size(), 0);
  for (int c : sigma) {
    if (c < 0 || c >= static_cast<int>(inst.chains.size()) || seen[c])
      throw ValidationError("order: sigma is not a permutation of the chains");
    seen[c] = 1;
  }
}

OrderSolution solve_fixed_order(const OrderInstance& inst,
                                const std::vector<int>& sigma) {
  KnownOrderSolution sol = solve_known_order(ordered_instance(inst, sigma));
  OrderSolution out;
  out.value = sol.value;
  out.policy.sigma = sigma;
  out.policy.kappa.assign(inst.chains.size(), kNullKey);
  for (std::size_t t = 0; t < sigma.size(); ++t)
    out.policy.kappa[sigma[t]] = sol.policy.choice[t];
  return out;
}

}  // namespace

double eval_order_policy(const OrderInstance& inst, const OrderPolicy& policy) {
  inst.validate();
  check_sigma(inst, policy.sigma);
  if (policy.kappa.size() != inst.chains.size())
    throw ValidationError("order: kappa must cover every chain");
  std::vector<std::vector<int>> chains;
  for (const auto& c : inst.chains) chains.push_back(canonical_chain(c));
  std::vector<char> used(inst.num_keys, 0);
  double total = 0.0;
  for (std::size_t t = 0; t < policy.sigma.size(); ++t) {
    int c = policy.sigma[t];
    int k = policy.kappa[c];
    if (k == kNullKey) continue;
    if (k < 0 || k >= inst.num_keys)
      throw ValidationError("order: invalid key on chain " + std::to_string(c));
    if (!std::binary_search(chains[c].begin(), chains[c].end(), k))
      throw ValidationError("order: key " + std::to_string(k) +
                            " not on chain " + std::to_string(c));
    if (used[k])
      throw ValidationError("order: key " + std::to_string(k) + " played twice");
    used[k] = 1;
    int appearances = 0;  // chains at or after round t that hold k
    for (std::size_t u = t; u < policy.sigma.size(); ++u) {
      const auto& chain = chains[policy.sigma[u]];
      if (std::binary_search(chain.begin(), chain.end(), k)) ++appearances;
    }
    total += inst.prior[k] * appearances;
  }
  return total;
}

OrderSolution best_of_two(const OrderInstance& inst) {
  inst.validate();
  std::vector<int> forward(inst.chains.size());
  std::iota(forward.begin(), forward.end(), 0);
  std::vector<int> reverse(forward.rbegin(), forward.rend());
  OrderSolution a = solve_fixed_order(inst, forward);
  OrderSolution b = solve_fixed_order(inst, reverse);
  return a.value >= b.value ? a : b;
}

OrderSolution brute_force_order_opt(const OrderInstance& inst) {
  inst.validate();
  if (inst.chains.size() > 7)
    throw SolverError("order brute force: more than 7 chains");
  std::vector<int> sigma(inst.chains.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  OrderSolution best;
  best.value = -1.0;
  do {
    OrderSolution cand = solve_fixed_order(inst, sigma);
    if (cand.value > best.value) best = cand;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

OrderInstance utmp_gadget(const std::vector<std::vector<int>>& matrix) {
  int n = static_cast<int>(matrix.size());
  if (n == 0) throw ValidationError("utmp: empty matrix");
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("utmp: matrix must be square");
    for (int v : row)
      if (v != 0 && v != 1) throw ValidationError("utmp: matrix must be binary");
  }
  // B = [ones column | flipped matrix] with a ones row appended; adjacency
  // is B transposed: key i sits on chain j iff B[j][i] = 1.
  OrderInstance inst;
  inst.num_keys = n + 1;
  inst.prior.assign(n + 1, 1.0 / (n + 1));
  inst.chains.assign(n + 1, {});
  for (int j = 0; j < n; ++j) {
    inst.chains[j].push_back(0);
    for (int i = 0; i < n; ++i)
      if (matrix[j][i] == 0) inst.chains[j].push_back(i + 1);
  }
  for (int i = 0; i <= n; ++i) inst.chains[n].push_back(i);
  for (auto& chain : inst.chains)
    if (chain.empty()) chain.push_back(0);  // unreachable; ones column covers it
  return inst;
}

bool reaches_upper_bound(const OrderInstance& inst) {
  inst.validate();
  if (inst.chains.size() != static_cast<std::size_t>(inst.num_keys))
    throw ValidationError("order: upper-bound check needs a square instance");
  for (double p : inst.prior)
    if (std::abs(p - 1.0 / inst.num_keys) > kProbTol)
      throw ValidationError("order: upper-bound check needs a uniform prior");
  double bound = (inst.num_keys + 1) / 2.0;
  return std::abs(brute_force_order_opt(inst).value - bound) <= 1e-9;
}

}  // namespace keychain
