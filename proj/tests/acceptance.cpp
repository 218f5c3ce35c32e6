// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// process exits nonzero when any check fails. Tolerances are pinned inline.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "keychain/adversarial.hpp"
#include "keychain/assignment.hpp"
#include "keychain/gen.hpp"
#include "keychain/laminar.hpp"
#include "keychain/lp.hpp"
#include "keychain/obm.hpp"
#include "keychain/oracle.hpp"
#include "keychain/order.hpp"
#include "keychain/scenarios.hpp"

using namespace keychain;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!ok) ++failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// ---------------------------------------------------------------------------

void check_example_values() {
  double t0 = now_seconds();
  double oracle = solve_one_key_mdp(example_instance()).value;
  InformationForest forest = build_information_forest(example_instance());
  double greedy = eval_scenario_policy(forest, greedy_policy(forest));
  double elapsed = now_seconds() - t0;
  bool ok = std::abs(oracle - 40.0 / 21.0) <= 1e-9 &&
            std::abs(greedy - 13.0 / 7.0) <= 1e-9 && elapsed < 1.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "oracle=%.12f greedy=%.12f %.2fs", oracle,
                greedy, elapsed);
  report("three-candidate instance solves exactly", ok, buf);
}

void check_known_order_exactness() {
  double t0 = now_seconds();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(trial_seed(1001, trial));
    int n = 2 + (int)(rng() % 5);
    int m = 1 + (int)(rng() % 6);
    KnownOrderInstance inst = random_known_order(n, m, rng());
    double assignment = solve_known_order(inst).value;
    double mdp = solve_one_key_mdp(embed_known_order(inst)).value;
    worst = std::max(worst, std::abs(assignment - mdp));
  }
  double elapsed = now_seconds() - t0;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max gap %.2e over 200 instances, %.2fs",
                worst, elapsed);
  report("assignment equals sequential optimum", worst <= 1e-9 && elapsed < 30.0,
         buf);
}

// Feasibility and best-subset tables over every subset of the ground set.
struct LaminarTables {
  std::vector<char> feasible;  // longest containment chain <= k
  std::vector<double> weight;  // additive weight of the subset
  std::vector<double> best;    // max weight of a feasible subset inside
};

LaminarTables laminar_tables(const AntichainValuation& v) {
  int n = (int)v.weights.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (v.family.types[a].size() != v.family.types[b].size())
      return v.family.types[a].size() > v.family.types[b].size();
    return a < b;
  });
  auto below = [&](int a, int b) {  // b strictly below a in the forest
    const TypeSet& ta = v.family.types[a];
    const TypeSet& tb = v.family.types[b];
    if (ta == tb) return a < b;
    return ta.size() > tb.size() &&
           std::includes(ta.begin(), ta.end(), tb.begin(), tb.end());
  };
  std::vector<std::vector<char>> comp(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) comp[i][j] = below(i, j);

  LaminarTables t;
  int total = 1 << n;
  t.feasible.assign(total, 0);
  t.weight.assign(total, 0.0);
  t.best.assign(total, 0.0);
  std::vector<int> depth(n);
  for (int mask = 0; mask < total; ++mask) {
    int longest = 0;
    for (int oi = 0; oi < n; ++oi) {
      int j = order[oi];
      if (!(mask >> j & 1)) continue;
      t.weight[mask] += (mask == 0 ? 0.0 : v.weights[j]);
      depth[j] = 1;
      for (int oj = 0; oj < oi; ++oj) {
        int i = order[oj];
        if ((mask >> i & 1) && comp[i][j]) depth[j] = std::max(depth[j], depth[i] + 1);
      }
      longest = std::max(longest, depth[j]);
    }
    t.feasible[mask] = longest <= v.k;
    t.best[mask] = t.feasible[mask] ? t.weight[mask] : 0.0;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1)
        t.best[mask] = std::max(t.best[mask], t.best[mask ^ (1 << j)]);
  }
  return t;
}

void check_laminar_oracles() {
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 300 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(2002, trial));
    int n = 3 + (int)(rng() % 10);  // ground set up to 12
    int k = 1 + (int)(rng() % 3);
    AntichainValuation v = random_valuation(n, k, rng());
    LaminarTables t = laminar_tables(v);
    int full = (1 << n) - 1;

    // value oracle vs enumeration on the full set and random subsets
    std::vector<int> masks = {full, 0};
    for (int i = 0; i < 10; ++i) masks.push_back((int)(rng() % (full + 1)));
    for (int mask : masks) {
      std::vector<int> S;
      for (int e = 0; e < n; ++e)
        if (mask >> e & 1) S.push_back(e);
      if (std::abs(value_query(v, S) - t.best[mask]) > 1e-9) {
        ok = false;
        detail = "value oracle mismatch at trial " + std::to_string(trial);
      }
    }

    // demand oracle vs exhaustive utility maximization
    std::vector<double> prices(n);
    for (double& p : prices) p = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    std::vector<int> D = demand_query(v, prices);
    double got = value_query(v, D);
    for (int e : D) got -= prices[e];
    double best_utility = 0.0;
    for (int mask = 0; mask <= full; ++mask) {
      double u = t.best[mask];
      for (int e = 0; e < n; ++e)
        if (mask >> e & 1) u -= prices[e];
      best_utility = std::max(best_utility, u);
    }
    if (std::abs(got - best_utility) > 1e-9) {
      ok = false;
      detail = "demand oracle mismatch at trial " + std::to_string(trial);
    }

    // supporting prices: tight on S, below the valuation on every subset
    std::vector<int> S(n);
    std::iota(S.begin(), S.end(), 0);
    std::vector<double> sp = supporting_prices(v, S);
    double at_S = std::accumulate(sp.begin(), sp.end(), 0.0);
    if (std::abs(at_S - t.best[full]) > 1e-9) {
      ok = false;
      detail = "price sum not tight at trial " + std::to_string(trial);
    }
    for (int mask = 0; mask <= full && ok; ++mask) {
      double sum = 0.0;
      for (int e = 0; e < n; ++e)
        if (mask >> e & 1) sum += sp[e];
      if (sum > t.best[mask] + 1e-9) {
        ok = false;
        detail = "price sum exceeds value at trial " + std::to_string(trial);
      }
    }
  }
  report("valuation oracles agree with enumeration (300 instances)", ok, detail);
}

void check_lp_dominance() {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng(trial_seed(3003, trial));
    ScenarioInstance inst =
        random_scenarios(2 + (int)(rng() % 3), 2 + (int)(rng() % 2),
                         2 + (int)(rng() % 3), rng());
    double lp = solve_lp_relaxation(build_information_forest(inst)).value;
    double oracle = solve_one_key_mdp(inst).value;
    worst = std::min(worst, lp - oracle);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "min slack %.2e", worst);
  report("relaxation dominates the exact optimum (50 instances)", worst >= -1e-7,
         buf);
}

void check_rounding_guarantee() {
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(4004, trial));
    ScenarioInstance inst =
        random_scenarios(2 + (int)(rng() % 3), 2 + (int)(rng() % 2),
                         2 + (int)(rng() % 2), rng());
    InformationForest forest = build_information_forest(inst);
    LpRelaxation rel = solve_lp_relaxation(forest);
    PreallocationRounder rounder(forest, rel.fractional);
    auto mc = rounder.monte_carlo(trial_seed(4014, trial), 100000);
    double floor = rounder.guarantee_factor() * rel.value - 3.0 * mc.std_error;
    if (mc.mean < floor) {
      ok = false;
      detail = "mean " + std::to_string(mc.mean) + " below floor " +
               std::to_string(floor) + " at trial " + std::to_string(trial);
    }
    for (std::size_t o = 0; o < forest.sets.size() && ok; ++o) {
      if (mc.visits[o] < 10000) continue;
      for (int k = 0; k < inst.num_keys; ++k)
        if (std::abs(mc.inclusion_freq[o][k] - rel.fractional.x[k][o]) > 0.01) {
          ok = false;
          detail = "marginal off by " +
                   std::to_string(mc.inclusion_freq[o][k] -
                                  rel.fractional.x[k][o]) +
                   " at trial " + std::to_string(trial);
        }
    }
  }
  report("rounded policies meet the (1-(1-1/n)^n) floor and marginals", ok,
         detail);
}

void check_order_selection() {
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(5005, trial));
    int n = 2 + (int)(rng() % 5);
    int m = 2 + (int)(rng() % 5);
    OrderInstance inst = random_order_instance(n, m, rng());
    double two = best_of_two(inst).value;
    double opt = brute_force_order_opt(inst).value;
    if (two < 0.5 * opt - 1e-9 || two > opt + 1e-9) {
      ok = false;
      detail = "half guarantee broken at trial " + std::to_string(trial);
    }
  }
  for (int trial = 0; trial < 20 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(5015, trial));
    int n = 2 + (int)(rng() % 4);
    OrderInstance inst = random_order_instance(n, n, rng());
    std::fill(inst.prior.begin(), inst.prior.end(), 1.0 / n);
    if (brute_force_order_opt(inst).value > (n + 1) / 2.0 + 1e-9) {
      ok = false;
      detail = "uniform square cap broken at trial " + std::to_string(trial);
    }
  }
  if (ok) {
    // adjacency with a full upper triangle attains the cap exactly
    OrderInstance tri{3, {{0}, {0, 1}, {0, 1, 2}}, {1 / 3.0, 1 / 3.0, 1 / 3.0}};
    double opt = brute_force_order_opt(tri).value;
    if (std::abs(opt - 2.0) > 1e-9 || !reaches_upper_bound(tri)) {
      ok = false;
      detail = "full-upper-triangle instance missed the cap";
    }
  }
  report("order selection: half guarantee, cap, tight instance", ok, detail);
}

void check_replay_counterexample() {
  bool ok = true;
  std::string detail;
  double eps = 1e-3;
  for (int x : {3, 5, 8}) {
    MultiKeySolution sol = solve_multi_key_mdp(exploit_counterexample(x, eps));
    double expected = 1.0 - 0.51 * eps + (1.51 - 0.49 * eps) * x;
    double min_gap = (0.235 * x - 0.49) * eps;
    if (std::abs(sol.exploit_value - expected) > 1e-9 ||
        sol.value - sol.exploit_value < min_gap - 1e-9) {
      ok = false;
      detail = "x=" + std::to_string(x) + " exploit=" +
               std::to_string(sol.exploit_value) + " expected=" +
               std::to_string(expected) + " gap=" +
               std::to_string(sol.value - sol.exploit_value);
      break;
    }
  }
  report("replaying a known key is strictly suboptimal (x=3,5,8)", ok, detail);
}

void check_vertex_cover_identity() {
  bool ok = true;
  std::string detail;
  int checked = 0;
  const int nv = 5;
  std::vector<std::pair<int, int>> all_edges;
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v) all_edges.emplace_back(u, v);
  for (int mask = 1; mask < (1 << all_edges.size()) && ok; ++mask) {
    if (__builtin_popcount(mask) > 5) continue;
    Graph g;
    g.num_vertices = nv;
    std::vector<int> degree(nv, 0);
    bool degree_ok = true;
    for (std::size_t e = 0; e < all_edges.size(); ++e)
      if (mask >> e & 1) {
        g.edges.push_back(all_edges[e]);
        if (++degree[all_edges[e].first] > 3 ||
            ++degree[all_edges[e].second] > 3)
          degree_ok = false;
      }
    if (!degree_ok) continue;
    int min_cover = nv;
    for (int cover = 0; cover < (1 << nv); ++cover) {
      bool covers = true;
      for (auto [u, v] : g.edges)
        if (!(cover >> u & 1) && !(cover >> v & 1)) covers = false;
      if (covers) min_cover = std::min(min_cover, __builtin_popcount(cover));
    }
    double expected = (double)g.edges.size() - 0.5 * min_cover;
    double value = solve_multi_key_mdp(vertex_cover_gadget(g)).value;
    if (std::abs(value - expected) > 1e-9) {
      ok = false;
      detail = "mismatch on a " + std::to_string(g.edges.size()) +
               "-edge graph: got " + std::to_string(value) + " expected " +
               std::to_string(expected);
    }
    ++checked;
  }
  report("cover identity on all graphs with at most 5 edges", ok,
         ok ? std::to_string(checked) + " graphs" : detail);
}

void check_satisfiability_identity() {
  bool ok = true;
  std::string detail;
  for (int f = 0; f < 10 && ok; ++f) {
    ThreeSatFormula formula = random_balanced_formula(4, trial_seed(7007, f));
    int n = formula.num_vars;
    int m = (int)formula.clauses.size();
    ScenarioInstance inst = threesat_gadget(formula);
    InformationForest forest = build_information_forest(inst);
    std::mt19937_64 rng(trial_seed(7017, f));
    for (int rep = 0; rep < 20 && ok; ++rep) {
      // commit to one literal per variable, untested-if-possible at the end
      std::vector<int> chosen(n);
      std::set<int> tested;
      for (int t = 0; t < n; ++t) {
        chosen[t] = 2 * t + (int)(rng() % 2);
        tested.insert(chosen[t]);
      }
      Policy policy{Policy::Kind::Scenario,
                    std::vector<int>(forest.sets.size(), kNullKey)};
      for (std::size_t s = 0; s < inst.scenarios.size(); ++s) {
        for (int t = 0; t < n; ++t) policy.choice[forest.paths[s][t]] = chosen[t];
        int clause_set = forest.paths[s][n];
        int pick = kNullKey;
        for (int lit : forest.sets[clause_set].chain)
          if (!tested.count(lit)) {
            pick = lit;
            break;
          }
        policy.choice[clause_set] = pick;
      }
      int sat = 0;
      for (const auto& clause : formula.clauses) {
        bool satisfied = false;
        for (int lit : clause)
          if (!tested.count(lit)) satisfied = true;
        if (satisfied) ++sat;
      }
      double value = eval_scenario_policy(forest, policy);
      double expected = 1.0 + sat / (3.0 * m);
      if (std::abs(value - expected) > 1e-9) {
        ok = false;
        detail = "formula " + std::to_string(f) + " policy " +
                 std::to_string(rep) + ": got " + std::to_string(value) +
                 " expected " + std::to_string(expected);
      }
    }
  }
  report("satisfiability identity (10 formulas x 20 policies)", ok, detail);
}

void check_no_regret_minimax() {
  bool ok = true;
  std::string detail;
  double epsilon = 0.05;
  for (int trial = 0; trial < 10 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(8008, trial));
    ScenarioInstance inst;
    inst.num_keys = 2;
    std::vector<std::vector<std::vector<int>>> shapes = {
        {{0, 1}, {0}}, {{0, 1}, {1}}, {{0, 1}, {0, 1}}, {{0}, {0, 1}},
        {{1}, {0, 1}}};
    double mass = 0.0;
    for (int s = 0; s < 3; ++s) {
      Scenario sc;
      sc.chains = shapes[rng() % shapes.size()];
      sc.correct_key = (int)(rng() % 2);
      sc.prob = std::uniform_real_distribution<>(0.1, 1.0)(rng);
      mass += sc.prob;
      inst.scenarios.push_back(sc);
    }
    for (auto& sc : inst.scenarios) sc.prob /= mass;
    merge_duplicate_scenarios(inst);
    int S = (int)inst.scenarios.size();
    InformationForest forest = build_information_forest(inst);

    PriorSet set;
    set.num_scenarios = S;
    for (int s = 0; s < S; ++s) {
      std::vector<double> up(S, 0.0), down(S, 0.0);
      up[s] = 1.0;
      down[s] = -1.0;
      set.A.push_back(up);
      set.b.push_back(std::uniform_real_distribution<>(0.6, 1.0)(rng));
      set.A.push_back(down);
      set.b.push_back(-std::uniform_real_distribution<>(0.0, 0.15)(rng));
    }

    // exact minimax by policy enumeration plus an LP over the prior set
    std::vector<Policy> policies;
    int num_sets = (int)forest.sets.size();
    std::vector<int> choice(num_sets, kNullKey);
    std::function<void(int)> enumerate = [&](int o) {
      if (o == num_sets) {
        Policy p{Policy::Kind::Scenario, choice};
        if (validate_admissible(forest, p).ok) policies.push_back(p);
        return;
      }
      for (int c = -1; c < inst.num_keys; ++c) {
        choice[o] = c;
        enumerate(o + 1);
      }
    };
    enumerate(0);
    LinearProgram lp;
    lp.num_vars = S + 1;  // prior plus the epigraph variable
    lp.objective.assign(S + 1, 0.0);
    lp.objective[S] = -1.0;
    for (const Policy& p : policies) {
      LinearProgram::Row row;
      row.coeffs.assign(S + 1, 0.0);
      for (int s = 0; s < S; ++s)
        row.coeffs[s] = scenario_utility(forest, p, s);
      row.coeffs[S] = -1.0;
      lp.rows.push_back(row);
    }
    for (std::size_t r = 0; r < set.A.size(); ++r) {
      LinearProgram::Row row;
      row.coeffs = set.A[r];
      row.coeffs.push_back(0.0);
      row.rhs = set.b[r];
      lp.rows.push_back(row);
    }
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(S + 1, 1.0);
    simplex_row.coeffs[S] = 0.0;
    simplex_row.rhs = 1.0;
    simplex_row.equality = true;
    lp.rows.push_back(simplex_row);
    double minimax = -solve_lp(lp).value;

    BestResponse best = [&](const std::vector<double>& prior) {
      return solve_one_key_forest(forest, prior).policy;
    };
    FtrlResult res = ftrl_solve(forest, set, epsilon, best);
    if (res.worst_case_value < minimax - epsilon ||
        res.worst_case_value > minimax + 1e-6 ||
        res.regret > res.regret_bound + 1e-9) {
      ok = false;
      detail = "trial " + std::to_string(trial) + ": achieved " +
               std::to_string(res.worst_case_value) + " minimax " +
               std::to_string(minimax) + " regret " + std::to_string(res.regret);
    }
  }
  report("no-regret play reaches the minimax value within 0.05", ok, detail);
}

void check_online_matching() {
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 10 && ok; ++trial) {
    std::mt19937_64 rng(trial_seed(9009, trial));
    int n = 2 + (int)(rng() % 2);
    int m = 2 + (int)(rng() % 2);
    WobmInstance inst = random_wobm(n, m, 2 + (int)(rng() % 2), 2, rng());
    WobmResult res = solve_wobm(inst, trial_seed(9019, trial), 100000);
    double oracle = philosopher_oracle(inst);
    if (res.achieved < res.guarantee - 3.0 * res.std_error) {
      ok = false;
      detail = "trial " + std::to_string(trial) + ": achieved " +
               std::to_string(res.achieved) + " below guarantee " +
               std::to_string(res.guarantee);
    } else if (oracle < res.achieved - 3.0 * res.std_error ||
               res.lp_value < oracle - 1e-7) {
      ok = false;
      detail = "trial " + std::to_string(trial) + ": oracle " +
               std::to_string(oracle) + " lp " + std::to_string(res.lp_value) +
               " achieved " + std::to_string(res.achieved);
    }
  }
  report("online matcher meets (1-1/e) and respects the oracle", ok, detail);
}

void check_sampling_estimator() {
  long long h = sample_count(2, 2, 3, 0.5, 0.1);
  bool size_ok = h == 1468;

  ScenarioInstance inst;
  inst.num_keys = 2;
  inst.scenarios.push_back({{{0, 1}, {0}}, 0, 0.5});
  inst.scenarios.push_back({{{0, 1}, {1}}, 1, 0.5});
  InformationForest forest = build_information_forest(inst);
  LaminarMatchingInstance truth = reduce_to_mwlm(forest);

  int bad = 0;
  double bound = 0.5 / (2.0 * (double)forest.sets.size());
  for (int rep = 0; rep < 200; ++rep) {
    std::mt19937_64 rng(trial_seed(10010, rep));
    auto sampler = [&]() { return rng() % 2 == 0 ? 0 : 1; };
    WeightEstimate est = estimate_weights_from_samples(forest, sampler, 0.5, 0.1);
    bool within = est.samples == h;
    for (int k = 0; k < 2 && within; ++k)
      for (int o = 0; o < (int)forest.sets.size() && within; ++o)
        if (std::abs(est.weight[k][o] - truth.weight[k][o]) > bound)
          within = false;
    if (!within) ++bad;
  }
  // 200 draws at failure rate 0.1: 30 failures clears the 99% binomial bar
  bool ok = size_ok && bad <= 30;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "h=%lld failures=%d/200", h, bad);
  report("sampled weights concentrate at the prescribed rate", ok, buf);
}

}  // namespace

int main() {
  check_example_values();
  check_known_order_exactness();
  check_laminar_oracles();
  check_lp_dominance();
  check_rounding_guarantee();
  check_order_selection();
  check_replay_counterexample();
  check_vertex_cover_identity();
  check_satisfiability_identity();
  check_no_regret_minimax();
  check_online_matching();
  check_sampling_estimator();
  if (failures > 0) {
    std::printf("%d acceptance check(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
