#pragma once

#include <functional>
#include <vector>

#include "keychain/model.hpp"

namespace keychain {

// Feasible priors: the probability simplex intersected with A p <= b.
struct PriorSet {
  int num_scenarios = 0;
  std::vector<std::vector<double>> A;
  std::vector<double> b;

  void validate() const;
  // Certifies nonemptiness; throws SolverError when the set is empty.
  std::vector<double> feasible_point() const;
};

// Minimize c . p over the prior set; optionally returns the argmin.
double min_over_priors(const PriorSet& set, const std::vector<double>& c,
                       std::vector<double>* argmin = nullptr);

// Entropy-regularized leader: argmin over the set of
// cumulative . p + (1/eta) sum p ln p, solved by exponentiated-gradient steps
// with cyclic Bregman projections, to duality gap <= 1e-7.
std::vector<double> leader_step_from_utilities(const std::vector<double>& cumulative,
                                               double eta, const PriorSet& set);

std::vector<double> ftrl_leader_step(const InformationForest& forest,
                                     const std::vector<Policy>& history, double eta,
                                     const PriorSet& set);

struct MixedPolicy {
  std::vector<Policy> components;  // uniform mixture
};

using BestResponse = std::function<Policy(const std::vector<double>& prior)>;

struct FtrlResult {
  MixedPolicy mixture;
  double worst_case_value = 0.0;
  std::vector<double> worst_prior;
  double regret = 0.0;
  double regret_bound = 0.0;
  int rounds = 0;
  double eta = 0.0;
};

// Round count 4 m^2 ln|S| / eps^2 with eta = sqrt(ln|S|) / (m sqrt(T)).
// The forest carries structure only; priors come from the leader each round.
FtrlResult ftrl_solve(const InformationForest& forest, const PriorSet& set,
                      double epsilon, const BestResponse& best_response);

// Exact worst-case value of a uniform mixture: an LP over the prior set.
double mixture_worst_case(const InformationForest& forest, const PriorSet& set,
                          const MixedPolicy& mixture,
                          std::vector<double>* argmin = nullptr);

}  // namespace keychain
