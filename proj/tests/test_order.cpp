#include <random>

#include "doctest.h"
#include "keychain/gen.hpp"
#include "keychain/order.hpp"

using namespace keychain;

TEST_CASE("order policy evaluation") {
  OrderInstance inst{2, {{0}, {0, 1}}, {0.5, 0.5}};
  OrderPolicy fwd{{0, 1}, {0, 1}};
  CHECK(eval_order_policy(inst, fwd) == doctest::Approx(1.5));
  OrderPolicy rev{{1, 0}, {0, 1}};
  CHECK(eval_order_policy(inst, rev) == doctest::Approx(1.0));

  OrderPolicy off_chain{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(eval_order_policy(inst, off_chain), ValidationError);
  OrderPolicy repeated{{0, 1}, {0, 0}};
  CHECK_THROWS_AS(eval_order_policy(inst, repeated), ValidationError);
  OrderPolicy bad_sigma{{0, 0}, {0, 1}};
  CHECK_THROWS_AS(eval_order_policy(inst, bad_sigma), ValidationError);
}

TEST_CASE("forward or reverse picks the better direction") {
  OrderInstance inst{2, {{0}, {0, 1}}, {0.5, 0.5}};
  OrderSolution sol = best_of_two(inst);
  CHECK(sol.value == doctest::Approx(1.5));
  CHECK(eval_order_policy(inst, sol.policy) == doctest::Approx(sol.value));
}

TEST_CASE("brute force agrees with hand optima") {
  OrderInstance inst{2, {{0}, {0, 1}}, {0.5, 0.5}};
  CHECK(brute_force_order_opt(inst).value == doctest::Approx(1.5));

  // nested chains, uniform prior: present smallest first
  OrderInstance nested{3, {{0}, {0, 1}, {0, 1, 2}}, {1 / 3.0, 1 / 3.0, 1 / 3.0}};
  CHECK(brute_force_order_opt(nested).value == doctest::Approx(2.0));
  CHECK(reaches_upper_bound(nested));
}

TEST_CASE("reversal identity") {
  for (int trial = 0; trial < 30; ++trial) {
    std::mt19937_64 rng(trial_seed(57, trial));
    int n = 2 + (int)(rng() % 4);
    int m = 2 + (int)(rng() % 4);
    OrderInstance inst = random_order_instance(n, m, rng());
    OrderSolution fwd = best_of_two(inst);
    // a policy and its order-reversed twin cover every appearance once
    OrderPolicy pol = fwd.policy;
    OrderPolicy twin = pol;
    std::reverse(twin.sigma.begin(), twin.sigma.end());
    double total = 0.0;
    for (int c = 0; c < m; ++c) {
      if (pol.kappa[c] == kNullKey) continue;
      int appearances = 0;
      for (const auto& chain : inst.chains)
        for (int k : chain)
          if (k == pol.kappa[c]) ++appearances;
      total += inst.prior[pol.kappa[c]] * (appearances + 1);
    }
    CHECK(eval_order_policy(inst, pol) + eval_order_policy(inst, twin) ==
          doctest::Approx(total).epsilon(1e-9));
  }
}

TEST_CASE("two directions capture half the optimum") {
  for (int trial = 0; trial < 40; ++trial) {
    std::mt19937_64 rng(trial_seed(61, trial));
    int n = 2 + (int)(rng() % 4);
    int m = 2 + (int)(rng() % 4);
    OrderInstance inst = random_order_instance(n, m, rng());
    OrderSolution two = best_of_two(inst);
    OrderSolution opt = brute_force_order_opt(inst);
    CHECK(two.value >= 0.5 * opt.value - 1e-9);
    CHECK(two.value <= opt.value + 1e-9);
  }
}

TEST_CASE("uniform square instances respect the midpoint cap") {
  for (int trial = 0; trial < 20; ++trial) {
    std::mt19937_64 rng(trial_seed(67, trial));
    int n = 2 + (int)(rng() % 4);
    OrderInstance inst = random_order_instance(n, n, rng());
    std::fill(inst.prior.begin(), inst.prior.end(), 1.0 / n);
    CHECK(brute_force_order_opt(inst).value <= (n + 1) / 2.0 + 1e-9);
  }
}

TEST_CASE("pattern gadget on tiny matrices") {
  // 1x1 zero matrix: the off-triangle pattern exists, bound 1.5 is attained
  OrderInstance yes = utmp_gadget({{0}});
  CHECK(yes.num_keys == 2);
  CHECK(brute_force_order_opt(yes).value == doctest::Approx(1.5));
  CHECK(reaches_upper_bound(yes));

  // a lone diagonal entry is already in the upper triangle
  CHECK(reaches_upper_bound(utmp_gadget({{1}})));
  // identity permutes to upper triangular; the all-ones matrix cannot fit
  // four entries into three upper-triangle slots
  CHECK(reaches_upper_bound(utmp_gadget({{1, 0}, {0, 1}})));
  CHECK_FALSE(reaches_upper_bound(utmp_gadget({{1, 1}, {1, 1}})));
  // two all-ones columns overload the second column of any permutation
  CHECK_FALSE(reaches_upper_bound(
      utmp_gadget({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}})));
}
