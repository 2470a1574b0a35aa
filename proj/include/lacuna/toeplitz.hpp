#pragma once

#include <vector>

#include "lacuna/common.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Truncated kernel of the Toeplitz operator with trig-polynomial symbol phi:
// all analytic polynomials b of degree <= degree_cap with (phi*b)^(k) = 0 for
// every k >= 0.  The basis is orthonormal in the coefficient inner product.
struct KernelBasis {
  TrigPoly symbol;
  int degree_cap = 0;
  std::vector<TrigPoly> basis;
  double residual = 0.0;  // max |(phi*b)^(k)|, k >= 0, over all basis elements
  std::vector<double> singular_values;

  int dimension() const { return static_cast<int>(basis.size()); }
};

// The cap truncates: for non-polynomial symbols the full kernel may be
// larger; dimensions reported here are exact for the truncated problem only.
KernelBasis kernel_basis(const TrigPoly& phi, int degree_cap);

struct KernelMembership {
  bool member = false;
  double residual = 0.0;  // max |(phi*f)^(k)| over k >= 0
};

KernelMembership kernel_membership(const TrigPoly& phi, const TrigPoly& f);

}  // namespace lacuna
