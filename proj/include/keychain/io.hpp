#pragma once

#include <string>

#include "keychain/model.hpp"
#include "keychain/obm.hpp"
#include "keychain/order.hpp"

namespace keychain {

// Tagged union for the shared instance schema (docs/schema.md).
struct LoadedInstance {
  std::string kind;  // known_order | scenarios | multi_key | order_selection | wobm
  KnownOrderInstance known_order;
  ScenarioInstance scenarios;
  MultiKeyInstance multi_key;
  OrderInstance order;
  WobmInstance wobm;
  int merged_scenarios = 0;  // duplicate scenarios merged at load
};

LoadedInstance parse_instance(const std::string& json_text);
LoadedInstance load_instance(const std::string& path);

std::string instance_to_json(const KnownOrderInstance& inst);
std::string instance_to_json(const ScenarioInstance& inst);
std::string instance_to_json(const MultiKeyInstance& inst);
std::string instance_to_json(const OrderInstance& inst);
std::string instance_to_json(const WobmInstance& inst);
std::string instance_to_json(const LoadedInstance& inst);

void save_instance(const std::string& path, const std::string& json_text);

}  // namespace keychain
