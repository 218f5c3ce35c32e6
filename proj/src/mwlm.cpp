#include "keychain/mwlm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace keychain {

void LaminarMatchingInstance::validate() const {
  if (num_left <= 0) throw ValidationError("mwlm: num_left must be positive");
  if (static_cast<int>(capacity.size()) != num_left)
    throw ValidationError("mwlm: capacity size mismatch");
  for (int b : capacity)
    if (b < 1) throw ValidationError("mwlm: capacities must be at least 1");
  LaminarFamily family{types};
  family.validate();
  if (static_cast<int>(weight.size()) != num_left)
    throw ValidationError("mwlm: weight matrix must have num_left rows");
  for (const auto& row : weight) {
    if (row.size() != types.size())
      throw ValidationError("mwlm: weight matrix must have one column per right node");
    for (double w : row)
      if (!std::isfinite(w) || w < 0.0)
        throw ValidationError("mwlm: weights must be finite and nonnegative");
  }
}

double matching_weight(const LaminarMatchingInstance& inst,
                       const LaminarMatching& matching) {
  double total = 0.0;
  for (auto [i, o] : matching.edges) total += inst.weight[i][o];
  return total;
}

void validate_matching(const LaminarMatchingInstance& inst,
                       const LaminarMatching& matching) {
  std::vector<char> right_used(inst.types.size(), 0);
  std::vector<std::map<int, int>> load(inst.num_left);  // element -> count
  for (auto [i, o] : matching.edges) {
    if (i < 0 || i >= inst.num_left || o < 0 || o >= inst.num_right())
      throw ValidationError("mwlm: edge endpoint out of range");
    if (right_used[o])
      throw ValidationError("mwlm: right node " + std::to_string(o) +
                            " matched twice");
    right_used[o] = 1;
    for (int e : inst.types[o]) {
      int c = ++load[i][e];
      if (c > inst.capacity[i])
        throw ValidationError("mwlm: left node " + std::to_string(i) +
                              " exceeds capacity on element " + std::to_string(e));
    }
  }
}

}  // namespace keychain
