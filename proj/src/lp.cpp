#include "keychain/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace keychain {

namespace {

constexpr double kPivotTol = 1e-9;  // degeneracy / pivot tolerance

struct Tableau {
  int m = 0;            // rows
  int cols = 0;         // total columns (structural + slack + artificial)
  int art_begin = 0;    // first artificial column
  std::vector<std::vector<double>> a;  // m x cols
  std::vector<double> rhs;
  std::vector<int> basis;  // basis[i] = column basic in row i
  std::vector<char> active_row;
  int iterations = 0;
  int cap = 0;

  void pivot(int row, int col) {
    double p = a[row][col];
    for (int j = 0; j < cols; ++j) a[row][j] /= p;
    rhs[row] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row || !active_row[i]) continue;
      double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }

  // Reduced costs for objective c (maximization), returned by value.
  std::vector<double> reduced_costs(const std::vector<double>& c) const {
    std::vector<double> y(m, 0.0);
    std::vector<double> red(c);
    for (int i = 0; i < m; ++i) {
      if (!active_row[i]) continue;
      double cb = c[basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < cols; ++j) red[j] -= cb * a[i][j];
    }
    return red;
  }

  // One simplex phase maximizing c; allow_col filters entering candidates.
  // Returns false when unbounded.
  template <typename Filter>
  bool run(const std::vector<double>& c, Filter allow_col) {
    for (;;) {
      if (++iterations > cap)
        throw SolverError("simplex iteration cap exceeded (" +
                          std::to_string(cap) + ")");
      std::vector<double> red = reduced_costs(c);
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allow_col(j)) continue;
        if (red[j] > kPivotTol) {  // Bland: first improving index
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (!active_row[i] || a[i][enter] <= kPivotTol) continue;
        double ratio = rhs[i] / a[i][enter];
        if (leave < 0 || ratio < best - kPivotTol ||
            (ratio < best + kPivotTol && basis[i] < basis[leave]))
          leave = i, best = ratio;
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

void LinearProgram::validate() const {
  if (num_vars <= 0) throw ValidationError("lp: num_vars must be positive");
  if (static_cast<int>(objective.size()) != num_vars)
    throw ValidationError("lp: objective size mismatch");
  for (double v : objective)
    if (!std::isfinite(v)) throw ValidationError("lp: objective must be finite");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].coeffs.size()) != num_vars)
      throw ValidationError("lp: row " + std::to_string(i) + " size mismatch");
    if (!std::isfinite(rows[i].rhs))
      throw ValidationError("lp: row " + std::to_string(i) + " rhs must be finite");
    for (double v : rows[i].coeffs)
      if (!std::isfinite(v))
        throw ValidationError("lp: row " + std::to_string(i) + " must be finite");
  }
}

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  int n = lp.num_vars;
  int m = static_cast<int>(lp.rows.size());

  // Normalize to rhs >= 0; remember the applied sign per row.
  std::vector<double> sign(m, 1.0);
  int num_ineq = 0;
  for (int i = 0; i < m; ++i) {
    if (lp.rows[i].rhs < 0.0) sign[i] = -1.0;
    if (!lp.rows[i].equality) ++num_ineq;
  }

  Tableau t;
  t.m = m;
  t.art_begin = n + num_ineq;
  t.cols = n + num_ineq + m;  // artificial column reserved per row
  t.cap = 10 * (m + n + num_ineq) * (m + n + num_ineq);
  t.a.assign(m, std::vector<double>(t.cols, 0.0));
  t.rhs.assign(m, 0.0);
  t.basis.assign(m, -1);
  t.active_row.assign(m, 1);

  int slack = n;
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.a[i][j] = sign[i] * lp.rows[i].coeffs[j];
    t.rhs[i] = sign[i] * lp.rows[i].rhs;
    if (!lp.rows[i].equality) {
      slack_col[i] = slack;
      t.a[i][slack] = sign[i];  // slack for <=, surplus for the flipped row
      ++slack;
    }
    if (!lp.rows[i].equality && sign[i] > 0.0) {
      t.basis[i] = slack_col[i];
    } else {
      t.a[i][t.art_begin + i] = 1.0;
      t.basis[i] = t.art_begin + i;
    }
  }

  // Phase 1: drive artificials to zero.
  bool need_phase1 = false;
  std::vector<double> c1(t.cols, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= t.art_begin) {
      c1[t.basis[i]] = -1.0;
      need_phase1 = true;
    }
  if (need_phase1) {
    if (!t.run(c1, [&](int j) { return j < t.art_begin || c1[j] < 0.0; }))
      throw SolverError("simplex: phase 1 unbounded");
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= t.art_begin) art_sum += t.rhs[i];
    if (art_sum > 1e-7) throw SolverError("lp infeasible");
    // Pivot leftover zero-level artificials out; drop redundant rows.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < t.art_begin) continue;
      int col = -1;
      for (int j = 0; j < t.art_begin; ++j)
        if (std::abs(t.a[i][j]) > kPivotTol) {
          col = j;
          break;
        }
      if (col >= 0)
        t.pivot(i, col);
      else
        t.active_row[i] = 0;
    }
  }

  // Phase 2.
  std::vector<double> c2(t.cols, 0.0);
  for (int j = 0; j < n; ++j) c2[j] = lp.objective[j];
  if (!t.run(c2, [&](int j) { return j < t.art_begin; }))
    throw SolverError("lp unbounded");

  LpSolution sol;
  sol.iterations = t.iterations;
  sol.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.active_row[i] && t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
  for (int j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];

  std::vector<double> red = t.reduced_costs(c2);
  sol.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double y_norm = t.active_row[i] ? -red[t.art_begin + i] : 0.0;
    sol.dual[i] = sign[i] * y_norm;
  }

  for (int i = 0; i < m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += lp.rows[i].coeffs[j] * sol.x[j];
    double viol = lp.rows[i].equality ? std::abs(lhs - lp.rows[i].rhs)
                                      : std::max(0.0, lhs - lp.rows[i].rhs);
    sol.max_infeasibility = std::max(sol.max_infeasibility, viol);
    if (!lp.rows[i].equality)
      sol.comp_slack_residual = std::max(
          sol.comp_slack_residual, std::abs(sol.dual[i] * (lp.rows[i].rhs - lhs)));
  }
  for (int j = 0; j < n; ++j) {
    sol.max_infeasibility = std::max(sol.max_infeasibility, -sol.x[j]);
    sol.comp_slack_residual =
        std::max(sol.comp_slack_residual, std::abs(sol.x[j] * red[j]));
  }
  return sol;
}

std::string dump_lp(const LinearProgram& lp) {
  std::ostringstream os;
  os << "max";
  for (int j = 0; j < lp.num_vars; ++j) os << " " << lp.objective[j] << "*x" << j;
  os << "\n";
  for (const auto& row : lp.rows) {
    for (int j = 0; j < lp.num_vars; ++j) os << " " << row.coeffs[j] << "*x" << j;
    os << (row.equality ? " == " : " <= ") << row.rhs << "\n";
  }
  return os.str();
}

}  // namespace keychain
