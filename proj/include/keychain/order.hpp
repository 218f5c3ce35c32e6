#pragma once

#include <vector>

#include "keychain/assignment.hpp"
#include "keychain/model.hpp"

namespace keychain {

// The solver also chooses the order in which chains are presented.
struct OrderInstance {
  int num_keys = 0;
  std::vector<std::vector<int>> chains;
  std::vector<double> prior;

  void validate() const;
};

struct OrderPolicy {
  std::vector<int> sigma;  // sigma[t-1] = chain index presented in round t
  std::vector<int> kappa;  // kappa[c] = key played on chain c, or kNullKey
};

// Value sum over chains of prior[kappa(c)] times the number of chains at or
// after c in sigma that contain kappa(c). Throws on off-chain keys, repeated
// keys, or a non-permutation sigma.
double eval_order_policy(const OrderInstance& inst, const OrderPolicy& policy);

struct OrderSolution {
  double value = 0.0;
  OrderPolicy policy;
};

// Better of the input order and its reversal, each solved to optimality for
// the fixed order. A 1/2 approximation of the best order.
OrderSolution best_of_two(const OrderInstance& inst);

// Exhaustive search over chain orders; guarded to at most 7 chains.
OrderSolution brute_force_order_opt(const OrderInstance& inst);

// Square 0/1 matrix in, instance with n+1 keys and n+1 chains out; the
// optimum hits (n+2)/2 exactly when the matrix has a permutation pattern
// avoiding the upper triangle.
OrderInstance utmp_gadget(const std::vector<std::vector<int>>& matrix);

// Whether the brute-force optimum reaches (num_keys + 1) / 2, the cap for a
// square instance with a uniform prior.
bool reaches_upper_bound(const OrderInstance& inst);

}  // namespace keychain
