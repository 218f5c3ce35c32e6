#include "keychain/laminar.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace keychain {

namespace {

bool is_subset(const TypeSet& a, const TypeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const TypeSet& a, const TypeSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return false;
  }
  return true;
}

}  // namespace

void LaminarFamily::validate() const {
  for (std::size_t i = 0; i < types.size(); ++i)
    if (!std::is_sorted(types[i].begin(), types[i].end()))
      throw ValidationError("laminar: type set " + std::to_string(i) + " not sorted");
  for (std::size_t i = 0; i < types.size(); ++i) {
    for (std::size_t j = i + 1; j < types.size(); ++j) {
      const TypeSet& a = types[i];
      const TypeSet& b = types[j];
      if (disjoint(a, b) || is_subset(a, b) || is_subset(b, a)) continue;
      throw ValidationError("laminar: type sets " + std::to_string(i) + " and " +
                            std::to_string(j) + " cross");
    }
  }
}

LaminarForest build_forest(const LaminarFamily& family, const std::vector<int>& subset,
                           const std::vector<double>& weights) {
  for (int e : subset)
    if (e < 0 || e >= static_cast<int>(family.types.size()))
      throw ValidationError("laminar: subset element " + std::to_string(e) +
                            " out of range");
  if (weights.size() != subset.size())
    throw ValidationError("laminar: weight count does not match subset");

  std::vector<int> order(subset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    std::size_t sa = family.types[subset[a]].size();
    std::size_t sb = family.types[subset[b]].size();
    if (sa != sb) return sa > sb;
    return subset[a] < subset[b];
  });

  LaminarForest forest;
  forest.nodes.resize(subset.size());
  std::vector<int> depth(subset.size(), 0);
  std::vector<int> placed;  // node ids in processing order
  for (int idx : order) {
    ForestNode& node = forest.nodes[idx];
    node.element = subset[idx];
    node.weight = weights[idx];
    const TypeSet& t = family.types[subset[idx]];
    int parent = -1;
    if (!t.empty()) {
      // Minimal superset among placed nodes; equal sets chain by element id,
      // so among equal candidates pick the deepest.
      for (int cand : placed) {
        const TypeSet& tc = family.types[forest.nodes[cand].element];
        if (!is_subset(t, tc)) continue;
        if (parent < 0) {
          parent = cand;
          continue;
        }
        const TypeSet& tp = family.types[forest.nodes[parent].element];
        if (tc.size() < tp.size() ||
            (tc.size() == tp.size() && depth[cand] > depth[parent]))
          parent = cand;
      }
    }
    node.parent = parent;
    if (parent < 0) {
      forest.roots.push_back(idx);
    } else {
      forest.nodes[parent].children.push_back(idx);
      depth[idx] = depth[parent] + 1;
    }
    placed.push_back(idx);
  }
  return forest;
}

AntichainSelection disjoint_antichains(const LaminarForest& forest, int k) {
  if (k < 0) throw ValidationError("laminar: negative antichain budget");
  AntichainSelection sel;
  sel.antichains.assign(k, {});
  if (k == 0) return sel;

  std::size_t n = forest.nodes.size();
  // opt[i][u]: best weight in the subtree of i using at most u antichain levels.
  std::vector<std::vector<double>> opt(n, std::vector<double>(k + 1, 0.0));
  std::vector<std::vector<char>> take(n, std::vector<char>(k + 1, 0));

  std::function<void(int)> down = [&](int i) {
    for (int c : forest.nodes[i].children) down(c);
    for (int u = 1; u <= k; ++u) {
      double skip = 0.0, inner = 0.0;
      for (int c : forest.nodes[i].children) {
        skip += opt[c][u];
        inner += opt[c][u - 1];
      }
      double with = forest.nodes[i].weight + inner;
      if (with >= skip) {
        opt[i][u] = with;
        take[i][u] = 1;
      } else {
        opt[i][u] = skip;
      }
    }
  };
  std::function<void(int, int)> collect = [&](int i, int u) {
    if (u == 0) return;
    if (take[i][u]) {
      sel.antichains[u - 1].push_back(forest.nodes[i].element);
      for (int c : forest.nodes[i].children) collect(c, u - 1);
    } else {
      for (int c : forest.nodes[i].children) collect(c, u);
    }
  };
  for (int r : forest.roots) {
    down(r);
    sel.value += opt[r][k];
    collect(r, k);
  }
  for (auto& level : sel.antichains) std::sort(level.begin(), level.end());
  return sel;
}

namespace {

void check_valuation(const AntichainValuation& v) {
  if (v.weights.size() != v.family.types.size())
    throw ValidationError("laminar: weight count does not match family");
  if (v.k < 1) throw ValidationError("laminar: antichain budget must be positive");
  v.family.validate();
}

}  // namespace

double value_query(const AntichainValuation& v, const std::vector<int>& S) {
  check_valuation(v);
  std::vector<double> w(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i] < 0 || S[i] >= static_cast<int>(v.weights.size()))
      throw ValidationError("laminar: element out of range in value query");
    w[i] = v.weights[S[i]];
  }
  return disjoint_antichains(build_forest(v.family, S, w), v.k).value;
}

std::vector<int> demand_query(const AntichainValuation& v,
                              const std::vector<double>& prices) {
  check_valuation(v);
  if (prices.size() != v.weights.size())
    throw ValidationError("laminar: price count does not match family");
  std::vector<int> all(v.weights.size());
  std::vector<double> adjusted(v.weights.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = static_cast<int>(i);
    adjusted[i] = v.weights[i] - prices[i];
  }
  AntichainSelection sel = disjoint_antichains(build_forest(v.family, all, adjusted), v.k);
  std::vector<int> demanded;
  for (const auto& level : sel.antichains)
    for (int e : level)
      if (adjusted[e] > 0.0) demanded.push_back(e);
  std::sort(demanded.begin(), demanded.end());
  return demanded;
}

std::vector<double> supporting_prices(const AntichainValuation& v,
                                      const std::vector<int>& S) {
  check_valuation(v);
  std::vector<double> w(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i] < 0 || S[i] >= static_cast<int>(v.weights.size()))
      throw ValidationError("laminar: element out of range in price query");
    w[i] = v.weights[S[i]];
  }
  AntichainSelection sel = disjoint_antichains(build_forest(v.family, S, w), v.k);
  std::vector<double> prices(v.weights.size(), 0.0);
  for (const auto& level : sel.antichains)
    for (int e : level) prices[e] = v.weights[e];
  return prices;
}

}  // namespace keychain
