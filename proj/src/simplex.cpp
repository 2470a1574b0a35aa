#include "lacuna/simplex.hpp"

#include <cmath>

#include "lacuna/common.hpp"

namespace lacuna {

LpResult solve_lp_max(const Eigen::MatrixXd& constraints, const Eigen::VectorXd& bounds,
                      const Eigen::VectorXd& objective, int max_iterations) {
  const int m = static_cast<int>(constraints.rows());
  const int n = static_cast<int>(constraints.cols());
  if (bounds.size() != m || objective.size() != n) {
    throw PreconditionError("solve_lp_max: dimension mismatch");
  }
  for (int i = 0; i < m; ++i) {
    if (bounds(i) < 0.0) {
      throw PreconditionError("solve_lp_max: bounds must be nonnegative (origin feasible)");
    }
  }

  // Free variables are split, x = u - v, and slacks complete the basis:
  // columns [u(0..n-1) | v(0..n-1) | s(0..m-1)].
  const int total = 2 * n + m;
  Eigen::MatrixXd tableau(m, total + 1);
  tableau.block(0, 0, m, n) = constraints;
  tableau.block(0, n, m, n) = -constraints;
  tableau.block(0, 2 * n, m, m) = Eigen::MatrixXd::Identity(m, m);
  tableau.col(total) = bounds;

  Eigen::VectorXd cost(total);
  cost.head(n) = objective;
  cost.segment(n, n) = -objective;
  cost.tail(m).setZero();

  Eigen::VectorXd reduced = cost;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = 2 * n + i;

  constexpr double kEnterTol = 1e-9;
  constexpr double kPivotTol = 1e-11;

  LpResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    // Bland: smallest improving column.
    int enter = -1;
    for (int j = 0; j < total; ++j) {
      if (reduced(j) > kEnterTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      result.status = LpResult::Status::Optimal;
      result.iterations = iter;
      Eigen::VectorXd full = Eigen::VectorXd::Zero(total);
      for (int i = 0; i < m; ++i) full(basis[i]) = tableau(i, total);
      result.x = full.head(n) - full.segment(n, n);
      result.objective = objective.dot(result.x);
      return result;
    }

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = tableau(i, enter);
      if (a > kPivotTol) {
        double ratio = std::max(tableau(i, total), 0.0) / a;
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      result.status = LpResult::Status::Unbounded;
      result.iterations = iter;
      return result;
    }

    double pivot = tableau(leave, enter);
    tableau.row(leave) /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double factor = tableau(i, enter);
      if (factor != 0.0) tableau.row(i) -= factor * tableau.row(leave);
    }
    double rfactor = reduced(enter);
    if (rfactor != 0.0) {
      reduced -= rfactor * tableau.row(leave).head(total).transpose();
    }
    basis[leave] = enter;
  }
  result.status = LpResult::Status::IterationLimit;
  result.iterations = max_iterations;
  return result;
}

}  // namespace lacuna
