#pragma once

#include <utility>
#include <vector>

#include "keychain/laminar.hpp"

namespace keychain {

// Bipartite matching where each right node carries a type set from a laminar
// family. A left node i may take at most capacity[i] matched neighbors whose
// type sets share any given element; right nodes have degree at most one.
struct LaminarMatchingInstance {
  int num_left = 0;
  std::vector<int> capacity;            // per left node
  std::vector<TypeSet> types;           // per right node
  std::vector<std::vector<double>> weight;  // [left][right]

  int num_right() const { return static_cast<int>(types.size()); }
  void validate() const;
};

struct LaminarMatching {
  std::vector<std::pair<int, int>> edges;  // (left, right)
};

double matching_weight(const LaminarMatchingInstance& inst,
                       const LaminarMatching& matching);

// Throws ValidationError describing the first violated constraint.
void validate_matching(const LaminarMatchingInstance& inst,
                       const LaminarMatching& matching);

}  // namespace keychain
