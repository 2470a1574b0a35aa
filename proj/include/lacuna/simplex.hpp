#pragma once

#include <Eigen/Dense>

namespace lacuna {

// Dense primal simplex for small masters:
//   maximize objective . x   subject to   constraints * x <= bounds,  x free.
// Requires bounds >= 0 so the slack basis is feasible.  Bland pivoting keeps
// the iteration deterministic and cycle-free.
struct LpResult {
  enum class Status { Optimal, Unbounded, IterationLimit };
  Status status = Status::Optimal;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

LpResult solve_lp_max(const Eigen::MatrixXd& constraints, const Eigen::VectorXd& bounds,
                      const Eigen::VectorXd& objective, int max_iterations = 50000);

}  // namespace lacuna
