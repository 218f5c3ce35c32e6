#include "keychain/gen.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace keychain {

ScenarioInstance example_instance() {
  ScenarioInstance inst;
  inst.num_keys = 3;
  const std::vector<int> all = {0, 1, 2};
  const std::vector<int> reduced = {1, 2};
  const double fit[3] = {3.0 / 7.0, 2.0 / 7.0, 2.0 / 7.0};
  for (int k = 0; k < 3; ++k) {
    inst.scenarios.push_back({{all, reduced, all}, k, fit[k] * 2.0 / 3.0});
    inst.scenarios.push_back({{all, all, all}, k, fit[k] * 1.0 / 3.0});
  }
  inst.validate();
  return inst;
}

MultiKeyInstance exploit_counterexample(int x, double epsilon) {
  if (x < 1) throw ValidationError("counterexample: x must be at least 1");
  if (!(epsilon > 0.0 && epsilon <= 1e-3))
    throw ValidationError("counterexample: epsilon must lie in (0, 1/1000]");
  MultiKeyInstance inst;
  inst.mode = MultiKeyInstance::Mode::Independent;
  inst.num_keys = 3 * x + 2;
  inst.accept_prob.assign(inst.num_keys, 0.0);
  inst.accept_prob[0] = 1.0;
  inst.accept_prob[1] = 1.0 - epsilon;
  auto a = [](int i) { return 2 + 3 * i; };
  auto b = [](int i) { return 3 + 3 * i; };
  auto c = [](int i) { return 4 + 3 * i; };
  for (int i = 0; i < x; ++i) {
    inst.accept_prob[a(i)] = 0.51;
    inst.accept_prob[b(i)] = 0.5;
    inst.accept_prob[c(i)] = 0.51;
  }
  inst.chains.push_back({0, 1});
  for (int i = 0; i < x; ++i) inst.chains.push_back({a(i), b(i)});
  for (int i = 0; i < x; ++i) inst.chains.push_back({1, b(i), c(i)});
  inst.validate();
  return inst;
}

MultiKeyInstance vertex_cover_gadget(const Graph& graph) {
  if (graph.num_vertices <= 0)
    throw ValidationError("vertex cover gadget: empty graph");
  if (graph.edges.empty())
    throw ValidationError("vertex cover gadget: graph has no edges");
  std::vector<int> degree(graph.num_vertices, 0);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : graph.edges) {
    if (u < 0 || v < 0 || u >= graph.num_vertices || v >= graph.num_vertices ||
        u == v)
      throw ValidationError("vertex cover gadget: invalid edge");
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second)
      throw ValidationError("vertex cover gadget: duplicate edge");
    if (++degree[u] > 3 || ++degree[v] > 3)
      throw ValidationError("vertex cover gadget: vertex degree exceeds 3");
  }
  MultiKeyInstance inst;
  inst.mode = MultiKeyInstance::Mode::Dueling;
  inst.num_keys = 2 * graph.num_vertices;
  inst.pair_prob.assign(graph.num_vertices, 0.5);
  for (auto [u, v] : graph.edges)
    inst.chains.push_back({2 * u, 2 * u + 1, 2 * v, 2 * v + 1});
  inst.validate();
  return inst;
}

ScenarioInstance threesat_gadget(const ThreeSatFormula& formula) {
  int n = formula.num_vars;
  int m = static_cast<int>(formula.clauses.size());
  if (n <= 0 || m <= 0) throw ValidationError("3sat gadget: empty formula");
  if (4 * n != 3 * m)
    throw ValidationError("3sat gadget: needs 4*vars = 3*clauses");
  std::vector<int> count(2 * n, 0);
  for (const auto& clause : formula.clauses) {
    if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2])
      throw ValidationError("3sat gadget: clause with repeated literal " +
                            std::to_string(clause[0]));
    for (int lit : clause) {
      if (lit < 0 || lit >= 2 * n)
        throw ValidationError("3sat gadget: literal out of range");
      ++count[lit];
    }
  }
  for (int lit = 0; lit < 2 * n; ++lit)
    if (count[lit] != 2)
      throw ValidationError("3sat gadget: literal " + std::to_string(lit) +
                            " appears " + std::to_string(count[lit]) +
                            " times, expected 2");

  ScenarioInstance inst;
  inst.num_keys = 2 * n;
  std::vector<std::vector<int>> variable_chains;
  for (int t = 0; t < n; ++t) variable_chains.push_back({2 * t, 2 * t + 1});
  for (const auto& clause : formula.clauses) {
    std::vector<int> last(clause.begin(), clause.end());
    std::sort(last.begin(), last.end());
    std::vector<std::vector<int>> chains = variable_chains;
    chains.push_back(last);
    for (int lit : clause)
      inst.scenarios.push_back({chains, lit, 1.0 / (3.0 * m)});
  }
  inst.validate();
  return inst;
}

ThreeSatFormula random_balanced_formula(int num_clauses, std::uint64_t seed) {
  if (num_clauses <= 0 || num_clauses % 4 != 0)
    throw ValidationError("3sat gen: clause count must be a positive multiple of 4");
  int n = 3 * num_clauses / 4;
  std::mt19937_64 rng(splitmix64(seed));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<int> slots;
    slots.reserve(4 * n);
    for (int lit = 0; lit < 2 * n; ++lit) {
      slots.push_back(lit);
      slots.push_back(lit);
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    ThreeSatFormula formula;
    formula.num_vars = n;
    bool ok = true;
    for (int j = 0; j < num_clauses && ok; ++j) {
      std::array<int, 3> clause = {slots[3 * j], slots[3 * j + 1], slots[3 * j + 2]};
      ok = clause[0] / 2 != clause[1] / 2 && clause[0] / 2 != clause[2] / 2 &&
           clause[1] / 2 != clause[2] / 2;
      formula.clauses.push_back(clause);
    }
    if (ok) return formula;
  }
  throw SolverError("3sat gen: rejection sampling failed");
}

namespace {

std::vector<double> random_prior(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& v : p) sum += v = unif(rng);
  for (double& v : p) v /= sum;
  return p;
}

std::vector<int> random_chain(int num_keys, std::mt19937_64& rng) {
  std::vector<int> chain;
  for (int k = 0; k < num_keys; ++k)
    if (rng() & 1) chain.push_back(k);
  if (chain.empty())
    chain.push_back(static_cast<int>(rng() % num_keys));
  return chain;
}

}  // namespace

KnownOrderInstance random_known_order(int num_keys, int num_chains,
                                      std::uint64_t seed) {
  if (num_keys <= 0 || num_chains <= 0)
    throw ValidationError("gen: sizes must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  KnownOrderInstance inst;
  inst.num_keys = num_keys;
  inst.prior = random_prior(num_keys, rng);
  for (int t = 0; t < num_chains; ++t)
    inst.chains.push_back(random_chain(num_keys, rng));
  inst.validate();
  return inst;
}

ScenarioInstance random_scenarios(int num_keys, int num_chains, int num_scenarios,
                                  std::uint64_t seed) {
  if (num_keys <= 0 || num_chains <= 0 || num_scenarios <= 0)
    throw ValidationError("gen: sizes must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  ScenarioInstance inst;
  inst.num_keys = num_keys;
  std::vector<double> prior = random_prior(num_scenarios, rng);
  for (int s = 0; s < num_scenarios; ++s) {
    Scenario sc;
    int rounds = 1 + static_cast<int>(rng() % num_chains);
    for (int t = 0; t < rounds; ++t) sc.chains.push_back(random_chain(num_keys, rng));
    sc.correct_key = static_cast<int>(rng() % num_keys);
    sc.prob = prior[s];
    inst.scenarios.push_back(std::move(sc));
  }
  merge_duplicate_scenarios(inst);
  inst.validate();
  return inst;
}

OrderInstance random_order_instance(int num_keys, int num_chains,
                                    std::uint64_t seed) {
  KnownOrderInstance base = random_known_order(num_keys, num_chains, seed);
  OrderInstance inst{base.num_keys, base.chains, base.prior};
  inst.validate();
  return inst;
}

WobmInstance random_wobm(int num_offline, int num_arrivals, int support_size,
                         int max_capacity, std::uint64_t seed) {
  if (num_offline <= 0 || num_arrivals <= 0 || support_size <= 0 ||
      max_capacity <= 0)
    throw ValidationError("gen: sizes must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  WobmInstance inst;
  inst.num_offline = num_offline;
  inst.num_arrivals = num_arrivals;
  for (int i = 0; i < num_offline; ++i)
    inst.capacity.push_back(1 + static_cast<int>(rng() % max_capacity));
  std::vector<double> prior = random_prior(support_size, rng);
  for (int s = 0; s < support_size; ++s) {
    WobmInstance::Support sup;
    sup.prob = prior[s];
    sup.weight.assign(num_offline, std::vector<double>(num_arrivals, 0.0));
    for (auto& row : sup.weight)
      for (double& w : row) w = unif(rng);
    inst.support.push_back(std::move(sup));
  }
  inst.validate();
  return inst;
}

MultiKeyInstance random_multi_key(int num_pairs, int num_chains,
                                  std::uint64_t seed) {
  if (num_pairs <= 0 || num_chains <= 0)
    throw ValidationError("gen: sizes must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  MultiKeyInstance inst;
  inst.mode = MultiKeyInstance::Mode::Dueling;
  inst.num_keys = 2 * num_pairs;
  for (int i = 0; i < num_pairs; ++i) inst.pair_prob.push_back(unif(rng));
  for (int t = 0; t < num_chains; ++t)
    inst.chains.push_back(random_chain(inst.num_keys, rng));
  inst.validate();
  return inst;
}

namespace {

void split_interval(int lo, int hi, std::mt19937_64& rng,
                    std::vector<TypeSet>& out) {
  TypeSet whole(hi - lo);
  std::iota(whole.begin(), whole.end(), lo);
  out.push_back(whole);
  if (hi - lo <= 1 || (rng() & 3) == 0) return;
  int mid = lo + 1 + static_cast<int>(rng() % (hi - lo - 1));
  split_interval(lo, mid, rng, out);
  split_interval(mid, hi, rng, out);
}

}  // namespace

AntichainValuation random_valuation(int elements, int k, std::uint64_t seed) {
  if (elements <= 0 || k <= 0)
    throw ValidationError("gen: sizes must be positive");
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<TypeSet> intervals;
  split_interval(0, elements, rng, intervals);
  AntichainValuation v;
  v.k = k;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int e = 0; e < elements; ++e) {
    v.family.types.push_back(intervals[rng() % intervals.size()]);
    v.weights.push_back(unif(rng));
  }
  v.family.validate();
  return v;
}

}  // namespace keychain
