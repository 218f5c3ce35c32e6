#include "keychain/io.hpp"

#include <fstream>

#include "json.hpp"

namespace keychain {

using nlohmann::json;

namespace {

json chains_to_json(const std::vector<std::vector<int>>& chains) {
  json out = json::array();
  for (const auto& c : chains) out.push_back(c);
  return out;
}

std::vector<std::vector<int>> chains_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("schema: chains must be an array");
  std::vector<std::vector<int>> out;
  for (const auto& c : j) out.push_back(c.get<std::vector<int>>());
  return out;
}

json base_json(const std::string& kind) {
  json j;
  j["kind"] = kind;
  return j;
}

const json& member(const json& j, const char* name) {
  if (!j.contains(name))
    throw ValidationError(std::string("schema: missing field '") + name + "'");
  return j.at(name);
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name))
    throw ValidationError(std::string("schema: missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("schema: bad type for field '") + name + "'");
  }
}

}  // namespace

std::string instance_to_json(const KnownOrderInstance& inst) {
  json j = base_json("known_order");
  j["num_keys"] = inst.num_keys;
  j["chains"] = chains_to_json(inst.chains);
  j["prior"] = inst.prior;
  return j.dump(2);
}

std::string instance_to_json(const ScenarioInstance& inst) {
  json j = base_json("scenarios");
  j["num_keys"] = inst.num_keys;
  j["scenarios"] = json::array();
  for (const auto& s : inst.scenarios) {
    json js;
    js["chains"] = chains_to_json(s.chains);
    js["correct_key"] = s.correct_key;
    js["prob"] = s.prob;
    j["scenarios"].push_back(std::move(js));
  }
  return j.dump(2);
}

std::string instance_to_json(const MultiKeyInstance& inst) {
  json j = base_json("multi_key");
  j["num_keys"] = inst.num_keys;
  j["chains"] = chains_to_json(inst.chains);
  if (inst.mode == MultiKeyInstance::Mode::Dueling) {
    j["mode"] = "dueling";
    j["pair_prob"] = inst.pair_prob;
  } else {
    j["mode"] = "independent";
    j["accept_prob"] = inst.accept_prob;
  }
  return j.dump(2);
}

std::string instance_to_json(const OrderInstance& inst) {
  json j = base_json("order_selection");
  j["num_keys"] = inst.num_keys;
  j["chains"] = chains_to_json(inst.chains);
  j["prior"] = inst.prior;
  return j.dump(2);
}

std::string instance_to_json(const WobmInstance& inst) {
  json j = base_json("wobm");
  j["num_offline"] = inst.num_offline;
  j["capacity"] = inst.capacity;
  j["num_arrivals"] = inst.num_arrivals;
  j["support"] = json::array();
  for (const auto& s : inst.support) {
    json js;
    js["weight"] = json::array();
    for (const auto& row : s.weight) js["weight"].push_back(row);
    js["prob"] = s.prob;
    j["support"].push_back(std::move(js));
  }
  return j.dump(2);
}

std::string instance_to_json(const LoadedInstance& inst) {
  if (inst.kind == "known_order") return instance_to_json(inst.known_order);
  if (inst.kind == "scenarios") return instance_to_json(inst.scenarios);
  if (inst.kind == "multi_key") return instance_to_json(inst.multi_key);
  if (inst.kind == "order_selection") return instance_to_json(inst.order);
  if (inst.kind == "wobm") return instance_to_json(inst.wobm);
  throw ValidationError("schema: unknown kind '" + inst.kind + "'");
}

LoadedInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema: invalid JSON: ") + e.what());
  }
  LoadedInstance out;
  out.kind = field<std::string>(j, "kind");
  if (out.kind == "known_order") {
    out.known_order.num_keys = field<int>(j, "num_keys");
    out.known_order.chains = chains_from_json(member(j, "chains"));
    out.known_order.prior = field<std::vector<double>>(j, "prior");
    out.known_order.validate();
  } else if (out.kind == "scenarios") {
    out.scenarios.num_keys = field<int>(j, "num_keys");
    if (!j.contains("scenarios") || !j.at("scenarios").is_array())
      throw ValidationError("schema: missing scenario array");
    for (const auto& js : j.at("scenarios")) {
      Scenario s;
      s.chains = chains_from_json(member(js, "chains"));
      s.correct_key = field<int>(js, "correct_key");
      s.prob = field<double>(js, "prob");
      out.scenarios.scenarios.push_back(std::move(s));
    }
    out.merged_scenarios = merge_duplicate_scenarios(out.scenarios);
    out.scenarios.validate();
  } else if (out.kind == "multi_key") {
    out.multi_key.num_keys = field<int>(j, "num_keys");
    out.multi_key.chains = chains_from_json(member(j, "chains"));
    std::string mode = field<std::string>(j, "mode");
    if (mode == "dueling") {
      out.multi_key.mode = MultiKeyInstance::Mode::Dueling;
      out.multi_key.pair_prob = field<std::vector<double>>(j, "pair_prob");
    } else if (mode == "independent") {
      out.multi_key.mode = MultiKeyInstance::Mode::Independent;
      out.multi_key.accept_prob = field<std::vector<double>>(j, "accept_prob");
    } else {
      throw ValidationError("schema: mode must be 'dueling' or 'independent'");
    }
    out.multi_key.validate();
  } else if (out.kind == "order_selection") {
    out.order.num_keys = field<int>(j, "num_keys");
    out.order.chains = chains_from_json(member(j, "chains"));
    out.order.prior = field<std::vector<double>>(j, "prior");
    out.order.validate();
  } else if (out.kind == "wobm") {
    out.wobm.num_offline = field<int>(j, "num_offline");
    out.wobm.capacity = field<std::vector<int>>(j, "capacity");
    out.wobm.num_arrivals = field<int>(j, "num_arrivals");
    if (!j.contains("support") || !j.at("support").is_array())
      throw ValidationError("schema: missing support array");
    for (const auto& js : j.at("support")) {
      WobmInstance::Support s;
      for (const auto& row : member(js, "weight"))
        s.weight.push_back(row.get<std::vector<double>>());
      s.prob = field<double>(js, "prob");
      out.wobm.support.push_back(std::move(s));
    }
    out.wobm.validate();
  } else {
    throw ValidationError("schema: unknown kind '" + out.kind + "'");
  }
  return out;
}

LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_instance(text);
}

void save_instance(const std::string& path, const std::string& json_text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << json_text << "\n";
}

}  // namespace keychain
