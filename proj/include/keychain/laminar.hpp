#pragma once

#include <vector>

#include "keychain/common.hpp"

namespace keychain {

using TypeSet = std::vector<int>;  // sorted element ids

// Per-element type sets; every pair must be nested or disjoint. An empty type
// set counts as disjoint from everything.
struct LaminarFamily {
  std::vector<TypeSet> types;

  void validate() const;  // throws naming the first offending pair
};

struct ForestNode {
  int element = -1;  // index into the family
  double weight = 0.0;
  int parent = -1;
  std::vector<int> children;
};

// Containment forest over a subset of elements. Duplicated type sets become a
// parent-child chain ordered by element id (smaller id on top).
struct LaminarForest {
  std::vector<ForestNode> nodes;
  std::vector<int> roots;
};

LaminarForest build_forest(const LaminarFamily& family, const std::vector<int>& subset,
                           const std::vector<double>& weights);

struct AntichainSelection {
  double value = 0.0;
  std::vector<std::vector<int>> antichains;  // element ids, levels 1..k
};

// Max-weight union of at most k disjoint antichains. Handles negative
// weights; on value ties a node is included rather than skipped.
AntichainSelection disjoint_antichains(const LaminarForest& forest, int k);

// Valuation: weight per element, laminar type sets, antichain budget k.
struct AntichainValuation {
  std::vector<double> weights;
  LaminarFamily family;
  int k = 1;
};

double value_query(const AntichainValuation& v, const std::vector<int>& S);

// Utility-maximizing bundle at the given prices; only elements with strictly
// positive adjusted weight are demanded.
std::vector<int> demand_query(const AntichainValuation& v,
                              const std::vector<double>& prices);

// Additive prices supporting v at S: the element's weight when it lies in the
// maximizing antichain union, zero otherwise.
std::vector<double> supporting_prices(const AntichainValuation& v,
                                      const std::vector<int>& S);

}  // namespace keychain
