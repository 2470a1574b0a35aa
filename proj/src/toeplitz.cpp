#include "lacuna/toeplitz.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace lacuna {

KernelBasis kernel_basis(const TrigPoly& phi, int degree_cap) {
  if (phi.is_zero()) throw PreconditionError("kernel_basis: zero symbol");
  if (degree_cap < 0) throw PreconditionError("kernel_basis: degree cap must be >= 0");

  KernelBasis out;
  out.symbol = phi;
  out.degree_cap = degree_cap;

  const int cols = degree_cap + 1;
  const std::int64_t top = phi.max_freq() + degree_cap;

  // Constraint rows: (phi * f)^(k) = sum_j phi^(k - j) f_j for k = 0..top.
  const int rows = top >= 0 ? static_cast<int>(top) + 1 : 0;
  Eigen::MatrixXcd constraints = Eigen::MatrixXcd::Zero(std::max(rows, 1), cols);
  for (int k = 0; k < rows; ++k) {
    for (int j = 0; j < cols; ++j) {
      constraints(k, j) = phi.coeff(static_cast<std::int64_t>(k) - j);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(constraints, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) out.singular_values.push_back(sigma(i));
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = std::max(1e-12 * sigma_max, 1e-14);

  int rank = 0;
  if (rows > 0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > tol) ++rank;
    }
  }

  for (int i = rank; i < cols; ++i) {
    Eigen::VectorXcd col = svd.matrixV().col(i);
    // Phase convention: largest-magnitude coefficient is real positive.
    Eigen::Index lead = 0;
    col.cwiseAbs().maxCoeff(&lead);
    Complex pivot = col(lead);
    if (std::abs(pivot) > 0.0) col *= std::conj(pivot) / std::abs(pivot);
    TrigPoly b;
    for (int j = 0; j < cols; ++j) {
      if (std::abs(col(j)) > 1e-15) b.add_term(j, col(j));
    }
    out.basis.push_back(b);
    out.residual = std::max(out.residual, kernel_membership(phi, b).residual);
  }
  return out;
}

KernelMembership kernel_membership(const TrigPoly& phi, const TrigPoly& f) {
  if (!f.is_analytic()) {
    throw PreconditionError("kernel_membership: f must be analytic");
  }
  TrigPoly product = multiply(phi, f);
  KernelMembership out;
  for (const auto& [k, c] : product.coeffs()) {
    if (k >= 0) out.residual = std::max(out.residual, std::abs(c));
  }
  out.member = out.residual <= 1e-12;
  return out;
}

}  // namespace lacuna
