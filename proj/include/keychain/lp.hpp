#pragma once

#include <string>
#include <vector>

#include "keychain/common.hpp"

namespace keychain {

// Maximize objective . x subject to the rows and x >= 0.
struct LinearProgram {
  struct Row {
    std::vector<double> coeffs;
    double rhs = 0.0;
    bool equality = false;  // default sense is <=
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;

  void validate() const;
};

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> dual;          // one multiplier per row
  double max_infeasibility = 0.0;    // residual check on the returned point
  double comp_slack_residual = 0.0;  // complementary slackness certificate
  int iterations = 0;
};

// Dense two-phase primal simplex with Bland's rule. Throws SolverError on an
// infeasible or unbounded program or when the iteration cap is exceeded.
LpSolution solve_lp(const LinearProgram& lp);

std::string dump_lp(const LinearProgram& lp);

}  // namespace keychain
