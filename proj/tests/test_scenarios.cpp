#include <cmath>
#include <random>

#include "doctest.h"
#include "keychain/gen.hpp"
#include "keychain/oracle.hpp"
#include "keychain/scenarios.hpp"

using namespace keychain;

TEST_CASE("matching reduction mirrors the forest") {
  InformationForest forest = build_information_forest(example_instance());
  LaminarMatchingInstance mwlm = reduce_to_mwlm(forest);
  CHECK(mwlm.num_left == 3);
  CHECK(mwlm.num_right() == 5);
  CHECK(mwlm.capacity == std::vector<int>(3, 1));
  // the round-1 node is typed by all six scenarios and pays key 0 its prior
  int root = forest.roots[0];
  CHECK(mwlm.types[root].size() == 6);
  CHECK(mwlm.weight[0][root] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("policy and matching weights coincide") {
  ScenarioInstance inst = example_instance();
  InformationForest forest = build_information_forest(inst);
  LaminarMatchingInstance mwlm = reduce_to_mwlm(forest);
  OneKeySolution sol = solve_one_key_mdp(inst);
  LaminarMatching matching = policy_to_matching(forest, sol.policy);
  validate_matching(mwlm, matching);
  CHECK(matching_weight(mwlm, matching) ==
        doctest::Approx(sol.value).epsilon(1e-9));
  Policy back = matching_to_policy(forest, matching);
  CHECK(eval_scenario_policy(forest, back) ==
        doctest::Approx(sol.value).epsilon(1e-9));
}

TEST_CASE("auction reduction preserves welfare") {
  InformationForest forest = build_information_forest(example_instance());
  LaminarMatchingInstance mwlm = reduce_to_mwlm(forest);
  AuctionInstance auction = reduce_mwlm_to_auction(mwlm);
  REQUIRE(auction.bidders.size() == 3);
  for (const auto& bidder : auction.bidders) CHECK(bidder.k == 1);

  OneKeySolution sol = solve_one_key_mdp(example_instance());
  LaminarMatching matching = policy_to_matching(forest, sol.policy);
  std::vector<std::vector<int>> allocation(3);
  for (auto [left, right] : matching.edges) allocation[left].push_back(right);
  double welfare = 0.0;
  for (int i = 0; i < 3; ++i)
    welfare += value_query(auction.bidders[i], allocation[i]);
  CHECK(welfare == doctest::Approx(sol.value).epsilon(1e-9));
  LaminarMatching round_trip = allocation_to_matching(mwlm, allocation);
  CHECK(matching_weight(mwlm, round_trip) ==
        doctest::Approx(sol.value).epsilon(1e-9));
}

TEST_CASE("relaxation dominates the oracle") {
  LpRelaxation rel =
      solve_lp_relaxation(build_information_forest(example_instance()));
  CHECK(rel.value >= 40.0 / 21.0 - 1e-7);
  for (int trial = 0; trial < 15; ++trial) {
    std::mt19937_64 rng(trial_seed(201, trial));
    ScenarioInstance inst = random_scenarios(3, 3, 3, rng());
    double lp = solve_lp_relaxation(build_information_forest(inst)).value;
    CHECK(lp >= solve_one_key_mdp(inst).value - 1e-7);
  }
}

TEST_CASE("relaxation is tight on a known-order embedding") {
  KnownOrderInstance ko{2, {{0, 1}, {0, 1}, {0}}, {0.5, 0.5}};
  LpRelaxation rel =
      solve_lp_relaxation(build_information_forest(embed_known_order(ko)));
  CHECK(rel.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("rounding an integral solution reproduces the policy") {
  ScenarioInstance inst = example_instance();
  InformationForest forest = build_information_forest(inst);
  OneKeySolution sol = solve_one_key_mdp(inst);
  FractionalPolicy x;
  x.x.assign(inst.num_keys, std::vector<double>(forest.sets.size(), 0.0));
  for (std::size_t o = 0; o < forest.sets.size(); ++o)
    if (sol.policy.choice[o] != kNullKey) x.x[sol.policy.choice[o]][o] = 1.0;
  PreallocationRounder rounder(forest, x);
  Policy sampled = rounder.sample_policy(3, 0);
  CHECK(eval_scenario_policy(forest, sampled) ==
        doctest::Approx(sol.value).epsilon(1e-9));
}

TEST_CASE("rounded value respects the approximation guarantee") {
  ScenarioInstance inst = example_instance();
  InformationForest forest = build_information_forest(inst);
  LpRelaxation rel = solve_lp_relaxation(forest);
  PreallocationRounder rounder(forest, rel.fractional);
  CHECK(rounder.guarantee_factor() ==
        doctest::Approx(1.0 - std::pow(1.0 - 1.0 / 3.0, 3)));
  auto mc = rounder.monte_carlo(5, 40000);
  CHECK(mc.mean >= rounder.guarantee_factor() * rel.value - 3.0 * mc.std_error);
  // candidate-inclusion frequencies track the fractional solution
  for (std::size_t o = 0; o < forest.sets.size(); ++o) {
    if (mc.visits[o] < 5000) continue;
    for (int k = 0; k < inst.num_keys; ++k)
      CHECK(std::abs(mc.inclusion_freq[o][k] - rel.fractional.x[k][o]) < 0.02);
  }
}

TEST_CASE("greedy on the example instance scores 13/7") {
  InformationForest forest = build_information_forest(example_instance());
  Policy greedy = greedy_policy(forest);
  CHECK(eval_scenario_policy(forest, greedy) ==
        doctest::Approx(13.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("greedy passes when nothing is worth playing") {
  ScenarioInstance inst;
  inst.num_keys = 1;
  inst.scenarios.push_back({{{0}, {0}}, 0, 1.0});
  InformationForest forest = build_information_forest(inst);
  Policy greedy = greedy_policy(forest);
  CHECK(greedy.choice[forest.paths[0][0]] == 0);
  CHECK(greedy.choice[forest.paths[0][1]] == kNullKey);
}

TEST_CASE("approximate solver meets its certificate") {
  ApproxResult res = approx_solve(example_instance(), 19);
  CHECK(res.value >= res.guarantee - 1e-9);
  CHECK(res.value <= res.lp_value + 1e-9);
  InformationForest forest = build_information_forest(example_instance());
  CHECK(eval_scenario_policy(forest, res.policy) ==
        doctest::Approx(res.value).epsilon(1e-9));
  // deterministic for a fixed seed
  ApproxResult again = approx_solve(example_instance(), 19);
  CHECK(again.value == doctest::Approx(res.value));
}

TEST_CASE("sample complexity formula") {
  CHECK(sample_count(2, 2, 3, 0.5, 0.1) == 1468);
  CHECK(sample_count(2, 2, 3, 0.25, 0.1) == 5869);  // quadruples, up to rounding
}

TEST_CASE("weight estimation concentrates near the truth") {
  ScenarioInstance inst;
  inst.num_keys = 2;
  inst.scenarios.push_back({{{0, 1}, {0}}, 0, 0.5});
  inst.scenarios.push_back({{{0, 1}, {1}}, 1, 0.5});
  InformationForest forest = build_information_forest(inst);
  std::mt19937_64 rng(41);
  auto sampler = [&]() { return (int)(rng() % 2); };
  WeightEstimate est = estimate_weights_from_samples(forest, sampler, 0.5, 0.1);
  CHECK(est.samples == 1468);
  LaminarMatchingInstance mwlm = reduce_to_mwlm(forest);
  for (int k = 0; k < 2; ++k)
    for (int o = 0; o < (int)forest.sets.size(); ++o)
      CHECK(std::abs(est.weight[k][o] - mwlm.weight[k][o]) <= 0.5 / 6.0);
}
