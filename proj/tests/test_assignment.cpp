#include <random>

#include "doctest.h"
#include "keychain/assignment.hpp"
#include "keychain/gen.hpp"
#include "keychain/oracle.hpp"

using namespace keychain;

TEST_CASE("assignment on identity and rectangular matrices") {
  Assignment a = max_weight_assignment({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(a.value == doctest::Approx(2.0));
  CHECK(a.match == std::vector<int>{0, 1});

  Assignment wide = max_weight_assignment({{1.0, 5.0, 2.0}});
  CHECK(wide.value == doctest::Approx(5.0));
  CHECK(wide.match == std::vector<int>{1});

  Assignment tall = max_weight_assignment({{3.0}, {4.0}});
  CHECK(tall.value == doctest::Approx(4.0));
  CHECK(tall.match[1] == 0);
  CHECK(tall.match[0] == -1);  // zero-weight edges are dropped
}

TEST_CASE("zero-weight rows stay unmatched") {
  Assignment a = max_weight_assignment({{0.0, 0.0}, {1.0, 0.0}});
  CHECK(a.value == doctest::Approx(1.0));
  CHECK(a.match[0] == -1);
  CHECK(a.match[1] == 0);
}

TEST_CASE("known-order optimum on hand instances") {
  KnownOrderInstance two{2, {{0, 1}, {0, 1}, {0}}, {0.5, 0.5}};
  KnownOrderSolution sol = solve_known_order(two);
  CHECK(sol.value == doctest::Approx(2.0));
  CHECK(eval_known_order_policy(two, sol.policy) == doctest::Approx(sol.value));

  KnownOrderInstance skewed{2, {{0, 1}, {1}}, {0.5, 0.5}};
  KnownOrderSolution s2 = solve_known_order(skewed);
  CHECK(s2.value == doctest::Approx(1.0));
}

TEST_CASE("assignment matches the sequential optimum on random instances") {
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng(trial_seed(91, trial));
    int n = 2 + (int)(rng() % 4);
    int m = 1 + (int)(rng() % 4);
    KnownOrderInstance inst = random_known_order(n, m, rng());
    KnownOrderSolution sol = solve_known_order(inst);
    OneKeySolution mdp = solve_one_key_mdp(embed_known_order(inst));
    CHECK(sol.value == doctest::Approx(mdp.value).epsilon(1e-9));
    CHECK(eval_known_order_policy(inst, sol.policy) ==
          doctest::Approx(sol.value).epsilon(1e-12));
  }
}

TEST_CASE("assignment result is a matching") {
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> w(6, std::vector<double>(4));
  for (auto& row : w)
    for (auto& v : row) v = std::uniform_real_distribution<>(0.0, 1.0)(rng);
  Assignment a = max_weight_assignment(w);
  std::vector<int> used(4, 0);
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (a.match[i] < 0) continue;
    CHECK(used[a.match[i]] == 0);
    used[a.match[i]] = 1;
    total += w[i][a.match[i]];
  }
  CHECK(total == doctest::Approx(a.value));
}
