#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "keychain/adversarial.hpp"
#include "keychain/assignment.hpp"
#include "keychain/gen.hpp"
#include "keychain/io.hpp"
#include "keychain/laminar.hpp"
#include "keychain/obm.hpp"
#include "keychain/oracle.hpp"
#include "keychain/order.hpp"
#include "keychain/scenarios.hpp"

namespace py = pybind11;
using namespace keychain;

PYBIND11_MODULE(keychain_cpp, m) {
  m.doc() = "Bayesian key-selection solvers";
  m.attr("NULL_KEY") = kNullKey;

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<SolverError>(m, "SolverError");

  py::class_<KnownOrderInstance>(m, "KnownOrderInstance")
      .def(py::init<>())
      .def_readwrite("num_keys", &KnownOrderInstance::num_keys)
      .def_readwrite("chains", &KnownOrderInstance::chains)
      .def_readwrite("prior", &KnownOrderInstance::prior);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("chains", &Scenario::chains)
      .def_readwrite("correct_key", &Scenario::correct_key)
      .def_readwrite("prob", &Scenario::prob);

  py::class_<ScenarioInstance>(m, "ScenarioInstance")
      .def(py::init<>())
      .def_readwrite("num_keys", &ScenarioInstance::num_keys)
      .def_readwrite("scenarios", &ScenarioInstance::scenarios);

  py::class_<Policy> policy(m, "Policy");
  py::enum_<Policy::Kind>(policy, "Kind")
      .value("KNOWN_ORDER", Policy::Kind::KnownOrder)
      .value("SCENARIO", Policy::Kind::Scenario);
  policy.def(py::init<>())
      .def_readwrite("kind", &Policy::kind)
      .def_readwrite("choice", &Policy::choice);

  py::class_<InformationForest>(m, "InformationForest")
      .def_readonly("num_keys", &InformationForest::num_keys)
      .def_readonly("roots", &InformationForest::roots)
      .def_readonly("paths", &InformationForest::paths)
      .def("__len__",
           [](const InformationForest& f) { return f.sets.size(); });

  m.def("example_instance", &example_instance);
  m.def("build_information_forest", &build_information_forest);
  m.def("eval_scenario_policy", &eval_scenario_policy);
  m.def("greedy_policy", &greedy_policy);
  m.def("parse_instance_json",
        [](const std::string& text) { return parse_instance(text).kind; });

  m.def("solve_known_order", [](const KnownOrderInstance& inst) {
    KnownOrderSolution sol = solve_known_order(inst);
    return py::make_tuple(sol.value, sol.policy);
  });
  m.def("oracle_value",
        [](const ScenarioInstance& inst) { return solve_one_key_mdp(inst).value; });
  m.def("oracle_policy",
        [](const ScenarioInstance& inst) { return solve_one_key_mdp(inst).policy; });
  m.def(
      "approx_solve",
      [](const ScenarioInstance& inst, std::uint64_t seed, int repetitions) {
        ApproxResult r = approx_solve(inst, seed, repetitions);
        return py::make_tuple(r.value, r.lp_value, r.guarantee, r.policy);
      },
      py::arg("instance"), py::arg("seed") = 0, py::arg("repetitions") = 64);
  m.def("max_weight_assignment",
        [](const std::vector<std::vector<double>>& w) {
          Assignment a = max_weight_assignment(w);
          return py::make_tuple(a.value, a.match);
        });

  py::class_<AntichainValuation>(m, "AntichainValuation")
      .def(py::init([](std::vector<double> weights,
                       std::vector<std::vector<int>> types, int k) {
             return AntichainValuation{std::move(weights),
                                       LaminarFamily{std::move(types)}, k};
           }),
           py::arg("weights"), py::arg("types"), py::arg("k") = 1)
      .def_readwrite("k", &AntichainValuation::k);
  m.def("value_query", &value_query);
  m.def("demand_query", &demand_query);
  m.def("supporting_prices", &supporting_prices);
}
