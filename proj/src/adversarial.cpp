#include "keychain/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "keychain/lp.hpp"

namespace keychain {

namespace {

constexpr double kGapTol = 1e-7;
constexpr int kMaxPasses = 200000;
constexpr double kFloor = 1e-12;  // keeps iterates away from the log boundary

double logsumexp(const std::vector<double>& v) {
  double hi = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// LP over {p >= 0, sum p = 1, A p <= b}.
LinearProgram prior_lp(const PriorSet& set, const std::vector<double>& objective) {
  LinearProgram lp;
  lp.num_vars = set.num_scenarios;
  lp.objective = objective;
  LinearProgram::Row simplex;
  simplex.coeffs.assign(set.num_scenarios, 1.0);
  simplex.rhs = 1.0;
  simplex.equality = true;
  lp.rows.push_back(std::move(simplex));
  for (std::size_t i = 0; i < set.A.size(); ++i)
    lp.rows.push_back({set.A[i], set.b[i], false});
  return lp;
}

}  // namespace

void PriorSet::validate() const {
  if (num_scenarios <= 0)
    throw ValidationError("prior set: num_scenarios must be positive");
  if (A.size() != b.size())
    throw ValidationError("prior set: A and b row counts differ");
  for (const auto& row : A) {
    if (static_cast<int>(row.size()) != num_scenarios)
      throw ValidationError("prior set: constraint row size mismatch");
    for (double v : row)
      if (!std::isfinite(v))
        throw ValidationError("prior set: constraints must be finite");
  }
  for (double v : b)
    if (!std::isfinite(v)) throw ValidationError("prior set: rhs must be finite");
}

std::vector<double> PriorSet::feasible_point() const {
  validate();
  try {
    LpSolution sol = solve_lp(prior_lp(*this, std::vector<double>(num_scenarios, 0.0)));
    return sol.x;
  } catch (const SolverError&) {
    throw SolverError("prior set is empty");
  }
}

double min_over_priors(const PriorSet& set, const std::vector<double>& c,
                       std::vector<double>* argmin) {
  if (static_cast<int>(c.size()) != set.num_scenarios)
    throw ValidationError("prior set: objective size mismatch");
  std::vector<double> neg(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
  LpSolution sol = solve_lp(prior_lp(set, neg));
  if (argmin) *argmin = sol.x;
  return -sol.value;
}

std::vector<double> leader_step_from_utilities(const std::vector<double>& cumulative,
                                               double eta, const PriorSet& set) {
  set.validate();
  if (eta <= 0.0) throw ValidationError("leader step: eta must be positive");
  int n = set.num_scenarios;
  if (static_cast<int>(cumulative.size()) != n)
    throw ValidationError("leader step: utility vector size mismatch");
  set.feasible_point();  // certify nonemptiness up front

  // Work in the log domain: lx = log p up to an additive constant.
  std::vector<double> base(n);
  for (int i = 0; i < n; ++i) base[i] = -eta * cumulative[i];
  std::vector<double> lx(base);
  {
    double z = logsumexp(lx);
    for (double& v : lx) v -= z;
  }

  int rows = static_cast<int>(set.A.size());
  std::vector<double> theta(rows, 0.0);

  auto primal_value = [&](const std::vector<double>& lv) {
    double f = 0.0;
    for (int s = 0; s < n; ++s) {
      double p = std::exp(lv[s]);
      f += cumulative[s] * p + (p > 0.0 ? p * lv[s] / eta : 0.0);
    }
    return f;
  };
  auto dual_value = [&](const std::vector<double>& th) {
    std::vector<double> expo(n);
    for (int s = 0; s < n; ++s) {
      double shift = 0.0;
      for (int i = 0; i < rows; ++i) shift += th[i] * set.A[i][s];
      expo[s] = base[s] - shift;
    }
    double q = -logsumexp(expo) / eta;
    for (int i = 0; i < rows; ++i) q -= th[i] / eta * set.b[i];
    return q;
  };

  double gap = 0.0;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    for (int i = 0; i < rows; ++i) {
      // Undo this constraint's previous correction (Dykstra step).
      for (int s = 0; s < n; ++s) lx[s] += theta[i] * set.A[i][s];
      const std::vector<double>& a = set.A[i];
      auto lhs_at = [&](double th) {
        double acc = 0.0;
        for (int s = 0; s < n; ++s) acc += a[s] * std::exp(lx[s] - th * a[s]);
        return acc;
      };
      if (lhs_at(0.0) <= set.b[i] + 1e-15) {
        theta[i] = 0.0;
        continue;
      }
      double hi = 1.0;
      int grow = 0;
      while (lhs_at(hi) > set.b[i] && grow++ < 200) hi *= 2.0;
      if (grow >= 200)
        throw SolverError("leader step: halfspace projection diverged");
      double lo = 0.0;
      for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (lo + hi);
        (lhs_at(mid) > set.b[i] ? lo : hi) = mid;
      }
      theta[i] = 0.5 * (lo + hi);
      for (int s = 0; s < n; ++s) lx[s] -= theta[i] * a[s];
    }
    // Simplex projection: renormalize, keeping mass off the boundary.
    double z = logsumexp(lx);
    for (double& v : lx) v = std::max(v - z, std::log(kFloor));
    z = logsumexp(lx);
    for (double& v : lx) v -= z;

    double viol = 0.0;
    for (int i = 0; i < rows; ++i) {
      double lhs = 0.0;
      for (int s = 0; s < n; ++s) lhs += set.A[i][s] * std::exp(lx[s]);
      viol = std::max(viol, lhs - set.b[i]);
    }
    gap = primal_value(lx) - dual_value(theta);
    if (viol <= 1e-9 && gap <= kGapTol) {
      std::vector<double> p(n);
      for (int s = 0; s < n; ++s) p[s] = std::exp(lx[s]);
      return p;
    }
  }
  throw SolverError("leader step: no convergence, duality gap " + std::to_string(gap));
}

std::vector<double> ftrl_leader_step(const InformationForest& forest,
                                     const std::vector<Policy>& history, double eta,
                                     const PriorSet& set) {
  std::vector<double> cumulative(set.num_scenarios, 0.0);
  for (const Policy& policy : history)
    for (int s = 0; s < set.num_scenarios; ++s)
      cumulative[s] += scenario_utility(forest, policy, s);
  return leader_step_from_utilities(cumulative, eta, set);
}

FtrlResult ftrl_solve(const InformationForest& forest, const PriorSet& set,
                      double epsilon, const BestResponse& best_response) {
  set.validate();
  if (epsilon <= 0.0) throw ValidationError("ftrl: epsilon must be positive");
  if (set.num_scenarios != static_cast<int>(forest.paths.size()))
    throw ValidationError("ftrl: prior set does not match the scenario count");
  int m = 0;
  for (const auto& path : forest.paths)
    m = std::max<int>(m, static_cast<int>(path.size()));
  double ln_s = std::log(static_cast<double>(set.num_scenarios));

  FtrlResult result;
  result.rounds = std::max<long long>(
      1, static_cast<long long>(std::ceil(4.0 * m * m * ln_s / (epsilon * epsilon))));
  result.eta =
      ln_s > 0.0 ? std::sqrt(ln_s) / (m * std::sqrt(double(result.rounds))) : 1.0;

  std::vector<double> cumulative(set.num_scenarios, 0.0);
  double played_total = 0.0;
  double squared_total = 0.0;
  for (int t = 0; t < result.rounds; ++t) {
    std::vector<double> prior =
        leader_step_from_utilities(cumulative, result.eta, set);
    Policy policy = best_response(prior);
    AdmissibilityReport rep = validate_admissible(forest, policy);
    if (!rep.ok)
      throw ValidationError("ftrl: inadmissible best response: " + rep.message);
    for (int s = 0; s < set.num_scenarios; ++s) {
      double u = scenario_utility(forest, policy, s);
      cumulative[s] += u;
      played_total += prior[s] * u;
      squared_total += prior[s] * u * u;
    }
    result.mixture.components.push_back(std::move(policy));
  }

  double best_fixed = min_over_priors(set, cumulative, &result.worst_prior);
  result.worst_case_value = best_fixed / result.rounds;
  result.regret = played_total - best_fixed;
  result.regret_bound = ln_s / result.eta + result.eta * squared_total;
  return result;
}

double mixture_worst_case(const InformationForest& forest, const PriorSet& set,
                          const MixedPolicy& mixture, std::vector<double>* argmin) {
  if (mixture.components.empty())
    throw ValidationError("mixture: no component policies");
  std::vector<double> c(set.num_scenarios, 0.0);
  for (const Policy& policy : mixture.components)
    for (int s = 0; s < set.num_scenarios; ++s)
      c[s] += scenario_utility(forest, policy, s);
  for (double& v : c) v /= static_cast<double>(mixture.components.size());
  return min_over_priors(set, c, argmin);
}

}  // namespace keychain
