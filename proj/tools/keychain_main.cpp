#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "keychain/adversarial.hpp"
#include "keychain/assignment.hpp"
#include "keychain/gen.hpp"
#include "keychain/io.hpp"
#include "keychain/obm.hpp"
#include "keychain/oracle.hpp"
#include "keychain/order.hpp"
#include "keychain/scenarios.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
using namespace keychain;

json policy_to_json(const Policy& policy) {
  json j;
  j["kind"] = policy.kind == Policy::Kind::KnownOrder ? "known_order" : "scenarios";
  j["choice"] = policy.choice;
  return j;
}

Policy policy_from_json(const json& j) {
  Policy policy;
  std::string kind = j.at("kind").get<std::string>();
  policy.kind = kind == "known_order" ? Policy::Kind::KnownOrder
                                      : Policy::Kind::Scenario;
  policy.choice = j.at("choice").get<std::vector<int>>();
  return policy;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw ValidationError("cannot write output file: " + out);
    f << j.dump(2) << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_solve(const std::string& in, const std::string& algo, std::uint64_t seed,
              int trials, const std::string& out) {
  LoadedInstance inst = load_instance(in);
  json result;
  result["kind"] = inst.kind;
  result["algo"] = algo;
  result["seed"] = seed;
  result["version"] = kVersion;
  if (inst.merged_scenarios > 0)
    result["merged_duplicate_scenarios"] = inst.merged_scenarios;

  if (inst.kind == "known_order") {
    KnownOrderSolution sol = solve_known_order(inst.known_order);
    result["value"] = sol.value;
    result["policy"] = policy_to_json(sol.policy);
  } else if (inst.kind == "scenarios") {
    if (algo == "lp-round") {
      ApproxResult approx = approx_solve(inst.scenarios, seed);
      result["value"] = approx.value;
      result["lp_value"] = approx.lp_value;
      result["guarantee"] = approx.guarantee;
      result["policy"] = policy_to_json(approx.policy);
    } else if (algo == "greedy") {
      InformationForest forest = build_information_forest(inst.scenarios);
      Policy policy = greedy_policy(forest);
      result["value"] = eval_scenario_policy(forest, policy);
      result["policy"] = policy_to_json(policy);
    } else if (algo == "oracle" || algo == "exact") {
      OneKeySolution sol = solve_one_key_mdp(inst.scenarios);
      result["value"] = sol.value;
      result["policy"] = policy_to_json(sol.policy);
    } else {
      throw ValidationError("unknown scenarios algorithm: " + algo);
    }
  } else if (inst.kind == "multi_key") {
    MultiKeySolution sol = solve_multi_key_mdp(inst.multi_key);
    result["value"] = sol.value;
    result["exploit_value"] = sol.exploit_value;
    result["first_action"] = sol.first_action;
  } else if (inst.kind == "order_selection") {
    OrderSolution sol = algo == "brute" ? brute_force_order_opt(inst.order)
                                        : best_of_two(inst.order);
    result["value"] = sol.value;
    result["sigma"] = sol.policy.sigma;
    result["kappa"] = sol.policy.kappa;
  } else if (inst.kind == "wobm") {
    if (algo == "philosopher") {
      result["value"] = philosopher_oracle(inst.wobm);
    } else {
      WobmResult sol = solve_wobm(inst.wobm, seed, trials);
      result["value"] = sol.achieved;
      result["lp_value"] = sol.lp_value;
      result["guarantee"] = sol.guarantee;
      result["std_error"] = sol.std_error;
      result["trials"] = sol.trials;
    }
  } else {
    throw ValidationError("unknown kind: " + inst.kind);
  }
  emit(result, out);
  return 0;
}

int cmd_eval(const std::string& in, const std::string& policy_path,
             const std::string& out) {
  LoadedInstance inst = load_instance(in);
  json jp = json::parse(read_file(policy_path));
  json result;
  result["kind"] = inst.kind;
  result["version"] = kVersion;
  if (inst.kind == "known_order") {
    result["value"] = eval_known_order_policy(inst.known_order, policy_from_json(jp));
  } else if (inst.kind == "scenarios") {
    InformationForest forest = build_information_forest(inst.scenarios);
    result["value"] = eval_scenario_policy(forest, policy_from_json(jp));
  } else if (inst.kind == "order_selection") {
    OrderPolicy policy;
    policy.sigma = jp.at("sigma").get<std::vector<int>>();
    policy.kappa = jp.at("kappa").get<std::vector<int>>();
    result["value"] = eval_order_policy(inst.order, policy);
  } else {
    throw ValidationError("eval supports known_order, scenarios, order_selection");
  }
  emit(result, out);
  return 0;
}

int cmd_oracle(const std::string& in, const std::string& out) {
  LoadedInstance inst = load_instance(in);
  json result;
  result["kind"] = inst.kind;
  result["version"] = kVersion;
  if (inst.kind == "known_order") {
    result["value"] = solve_one_key_mdp(embed_known_order(inst.known_order)).value;
  } else if (inst.kind == "scenarios") {
    OneKeySolution sol = solve_one_key_mdp(inst.scenarios);
    result["value"] = sol.value;
    result["policy"] = policy_to_json(sol.policy);
  } else if (inst.kind == "multi_key") {
    MultiKeySolution sol = solve_multi_key_mdp(inst.multi_key);
    result["value"] = sol.value;
    result["exploit_value"] = sol.exploit_value;
  } else if (inst.kind == "wobm") {
    result["value"] = philosopher_oracle(inst.wobm);
  } else {
    throw ValidationError("no oracle for kind: " + inst.kind);
  }
  emit(result, out);
  return 0;
}

int cmd_gen(const std::string& family, int n, int m, int scenarios, int x,
            double epsilon, const std::string& matrix_path,
            const std::string& edges, std::uint64_t seed, const std::string& out) {
  std::string text;
  if (family == "example") {
    text = instance_to_json(example_instance());
  } else if (family == "counterexample") {
    text = instance_to_json(exploit_counterexample(x, epsilon));
  } else if (family == "vertex-cover") {
    Graph graph;
    graph.num_vertices = n;
    std::istringstream ss(edges);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto dash = tok.find('-');
      if (dash == std::string::npos)
        throw ValidationError("edges format: u-v,u-v,...");
      graph.edges.emplace_back(std::stoi(tok.substr(0, dash)),
                               std::stoi(tok.substr(dash + 1)));
    }
    text = instance_to_json(vertex_cover_gadget(graph));
  } else if (family == "threesat") {
    text = instance_to_json(threesat_gadget(random_balanced_formula(m, seed)));
  } else if (family == "utmp") {
    json jm = json::parse(read_file(matrix_path));
    text = instance_to_json(utmp_gadget(jm.get<std::vector<std::vector<int>>>()));
  } else if (family == "known_order") {
    text = instance_to_json(random_known_order(n, m, seed));
  } else if (family == "scenarios") {
    text = instance_to_json(random_scenarios(n, m, scenarios, seed));
  } else if (family == "order") {
    text = instance_to_json(random_order_instance(n, m, seed));
  } else if (family == "wobm") {
    text = instance_to_json(random_wobm(n, m, scenarios, 2, seed));
  } else if (family == "multi_key") {
    text = instance_to_json(random_multi_key(n, m, seed));
  } else {
    throw ValidationError("unknown generator family: " + family);
  }
  if (out.empty())
    std::cout << text << "\n";
  else
    save_instance(out, text);
  return 0;
}

int cmd_bench(const std::string& suite, std::uint64_t seed, const std::string& out,
              bool timing) {
  std::ostringstream csv;
  csv << "instance,n,m,scenarios,algo,value,oracle,lp,ratio,wall_ms\n";
  auto row = [&](const std::string& name, int n, int m, int scen,
                 const std::string& algo, double value, double oracle, double lp,
                 double ratio, double wall_ms) {
    csv << name << "," << n << "," << m << "," << scen << "," << algo << ","
        << value << ",";
    if (oracle >= 0.0) csv << oracle;
    csv << ",";
    if (lp >= 0.0) csv << lp;
    csv << "," << ratio << ",";
    if (timing) csv << wall_ms;
    csv << "\n";
  };
  auto now = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };

  if (suite == "scenarios") {
    for (int i = 0; i < 10; ++i) {
      ScenarioInstance inst =
          random_scenarios(3 + i % 3, 3, 3 + i % 4, splitmix64(seed) + i);
      std::string name = "scen" + std::to_string(i);
      auto t0 = now();
      ApproxResult approx = approx_solve(inst, seed + i);
      auto t1 = now();
      double oracle = solve_one_key_mdp(inst).value;
      row(name, inst.num_keys, inst.max_rounds(),
          static_cast<int>(inst.scenarios.size()), "lp-round", approx.value,
          oracle, approx.lp_value,
          approx.lp_value > 0 ? approx.value / approx.lp_value : 1.0, ms(t0, t1));
      InformationForest forest = build_information_forest(inst);
      t0 = now();
      double greedy = eval_scenario_policy(forest, greedy_policy(forest));
      t1 = now();
      row(name, inst.num_keys, inst.max_rounds(),
          static_cast<int>(inst.scenarios.size()), "greedy", greedy, oracle,
          approx.lp_value, oracle > 0 ? greedy / oracle : 1.0, ms(t0, t1));
    }
  } else if (suite == "order") {
    for (int i = 0; i < 15; ++i) {
      OrderInstance inst =
          random_order_instance(3 + i % 4, 3 + i % 3, splitmix64(seed) + i);
      auto t0 = now();
      OrderSolution two = best_of_two(inst);
      auto t1 = now();
      double oracle = brute_force_order_opt(inst).value;
      row("order" + std::to_string(i), inst.num_keys,
          static_cast<int>(inst.chains.size()), 1, "best2", two.value, oracle,
          -1.0, oracle > 0 ? two.value / oracle : 1.0, ms(t0, t1));
    }
  } else if (suite == "wobm") {
    for (int i = 0; i < 8; ++i) {
      WobmInstance inst = random_wobm(2 + i % 2, 3, 2 + i % 2, 2, splitmix64(seed) + i);
      auto t0 = now();
      WobmResult sol = solve_wobm(inst, seed + i, 20000);
      auto t1 = now();
      double oracle = inst.num_offline * inst.num_arrivals <= 12
                          ? philosopher_oracle(inst)
                          : -1.0;
      row("wobm" + std::to_string(i), inst.num_offline, inst.num_arrivals,
          static_cast<int>(inst.support.size()), "lp-round", sol.achieved, oracle,
          sol.lp_value, sol.lp_value > 0 ? sol.achieved / sol.lp_value : 1.0,
          ms(t0, t1));
    }
  } else if (suite == "multikey") {
    for (int i = 0; i < 10; ++i) {
      MultiKeyInstance inst = random_multi_key(2 + i % 3, 3 + i % 3, splitmix64(seed) + i);
      auto t0 = now();
      MultiKeySolution sol = solve_multi_key_mdp(inst);
      auto t1 = now();
      row("mk" + std::to_string(i), inst.num_keys,
          static_cast<int>(inst.chains.size()), 1, "mdp", sol.value, sol.value,
          -1.0, sol.value > 0 ? sol.exploit_value / sol.value : 1.0, ms(t0, t1));
    }
  } else {
    throw ValidationError("unknown bench suite: " + suite);
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ValidationError("cannot write CSV: " + out);
    f << csv.str();
  }
  return 0;
}

int cmd_adv(const std::string& in, const std::string& constraints_path,
            double epsilon, const std::string& algo, std::uint64_t seed,
            const std::string& out) {
  LoadedInstance inst = load_instance(in);
  if (inst.kind != "scenarios")
    throw ValidationError("adv requires a scenarios instance");
  InformationForest forest = build_information_forest(inst.scenarios);

  PriorSet set;
  set.num_scenarios = static_cast<int>(inst.scenarios.scenarios.size());
  if (!constraints_path.empty()) {
    json jc = json::parse(read_file(constraints_path));
    set.A = jc.at("A").get<std::vector<std::vector<double>>>();
    set.b = jc.at("b").get<std::vector<double>>();
  }
  set.validate();
  set.feasible_point();

  BestResponse response;
  if (algo == "lp-round") {
    std::uint64_t round_seed = seed;
    response = [&forest, round_seed](const std::vector<double>& prior) {
      InformationForest local = forest;
      reweight_forest(local, prior);
      LpRelaxation rel = solve_lp_relaxation(local);
      PreallocationRounder rounder(local, rel.fractional);
      Policy best;
      double best_value = -1.0;
      for (int rep = 0; rep < 16; ++rep) {
        Policy cand = rounder.sample_policy(round_seed, rep);
        double v = eval_scenario_policy(local, cand);
        if (v > best_value) {
          best_value = v;
          best = std::move(cand);
        }
      }
      return best;
    };
  } else {
    response = [&forest](const std::vector<double>& prior) {
      return solve_one_key_forest(forest, prior).policy;
    };
  }

  FtrlResult res = ftrl_solve(forest, set, epsilon, response);
  json result;
  result["kind"] = "adversarial";
  result["algo"] = algo;
  result["seed"] = seed;
  result["version"] = kVersion;
  result["epsilon"] = epsilon;
  result["rounds"] = res.rounds;
  result["eta"] = res.eta;
  result["worst_case_value"] = res.worst_case_value;
  result["worst_prior"] = res.worst_prior;
  result["regret"] = res.regret;
  result["regret_bound"] = res.regret_bound;
  json comps = json::array();
  for (const Policy& p : res.mixture.components) comps.push_back(policy_to_json(p));
  result["mixture"] = std::move(comps);
  emit(result, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian key-selection solver toolkit"};
  app.require_subcommand(1);

  std::string in, out, algo = "exact", policy_path, suite, family, matrix_path,
              edges, constraints_path;
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("KEYCHAIN_SEED")) seed = std::strtoull(env, nullptr, 10);
  int trials = 100000, n = 3, m = 3, scenarios = 3, x = 1;
  double epsilon = 1e-3;
  bool timing = false;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--in", in)->required();
  solve->add_option("--algo", algo);
  solve->add_option("--kind", suite);  // informational; the file carries kind
  solve->add_option("--seed", seed);
  solve->add_option("--trials", trials);
  solve->add_option("--out", out);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a policy exactly");
  eval->add_option("--in", in)->required();
  eval->add_option("--policy", policy_path)->required();
  eval->add_option("--out", out);

  CLI::App* oracle = app.add_subcommand("oracle", "exact optimum");
  oracle->add_option("--in", in)->required();
  oracle->add_option("--out", out);

  CLI::App* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("family", family)->required();
  gen->add_option("--n", n);
  gen->add_option("--m", m);
  gen->add_option("--scenarios", scenarios);
  gen->add_option("--x", x);
  gen->add_option("--epsilon", epsilon);
  gen->add_option("--matrix", matrix_path);
  gen->add_option("--edges", edges);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out);

  CLI::App* bench = app.add_subcommand("bench", "benchmark suites");
  bench->add_option("--suite", suite)->required();
  bench->add_option("--seed", seed);
  bench->add_option("--out", out);
  bench->add_flag("--timing", timing, "include wall_ms (breaks byte determinism)");

  CLI::App* adv = app.add_subcommand("adv", "adversarial priors via no-regret play");
  adv->add_option("--in", in)->required();
  adv->add_option("--constraints", constraints_path);
  adv->add_option("--epsilon", epsilon);
  adv->add_option("--algo", algo);
  adv->add_option("--seed", seed);
  adv->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(in, algo, seed, trials, out);
    if (eval->parsed()) return cmd_eval(in, policy_path, out);
    if (oracle->parsed()) return cmd_oracle(in, out);
    if (gen->parsed())
      return cmd_gen(family, n, m, scenarios, x, epsilon, matrix_path, edges, seed,
                     out);
    if (bench->parsed()) return cmd_bench(suite, seed, out, timing);
    if (adv->parsed())
      return cmd_adv(in, constraints_path, epsilon, algo, seed, out);
  } catch (const keychain::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const keychain::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
