#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "keychain/laminar.hpp"
#include "keychain/model.hpp"
#include "keychain/obm.hpp"
#include "keychain/order.hpp"

namespace keychain {

// Three candidate keys with fit probabilities
// (3/7, 2/7, 2/7); round 2 drops key 0 with probability 2/3.
ScenarioInstance example_instance();

// Family where replaying an identified key first is strictly suboptimal.
// Keys: 0 always accepted, 1 accepted with prob 1-eps, then x triples
// (a_i, b_i, c_i) with probabilities (0.51, 0.5, 0.51).
MultiKeyInstance exploit_counterexample(int x, double epsilon);

struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
};

// Dueling pair per vertex, one chain per edge holding both endpoint pairs;
// oracle optimum equals #edges - mincover/2. Degrees must be at most 3.
MultiKeyInstance vertex_cover_gadget(const Graph& graph);

// Literal encoding: variable v gives literals 2v (positive) and 2v+1
// (negated). Every literal must appear exactly twice; clauses hold three
// distinct literals; 4 * num_vars = 3 * num_clauses.
struct ThreeSatFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

ScenarioInstance threesat_gadget(const ThreeSatFormula& formula);

// Rejection-samples a formula meeting the balance and distinctness rules;
// num_clauses must be a positive multiple of 4.
ThreeSatFormula random_balanced_formula(int num_clauses, std::uint64_t seed);

KnownOrderInstance random_known_order(int num_keys, int num_chains,
                                      std::uint64_t seed);
ScenarioInstance random_scenarios(int num_keys, int num_chains, int num_scenarios,
                                  std::uint64_t seed);
OrderInstance random_order_instance(int num_keys, int num_chains,
                                    std::uint64_t seed);
WobmInstance random_wobm(int num_offline, int num_arrivals, int support_size,
                         int max_capacity, std::uint64_t seed);
MultiKeyInstance random_multi_key(int num_pairs, int num_chains, std::uint64_t seed);

// Random laminar family over the given element count (a recursive interval
// partition) with uniform weights in [0, 1].
AntichainValuation random_valuation(int elements, int k, std::uint64_t seed);

}  // namespace keychain
