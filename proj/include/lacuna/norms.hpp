#pragma once

#include "lacuna/common.hpp"
#include "lacuna/grid.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

struct L1Result {
  double value = 0.0;
  int grid_exp = 0;        // exponent of the accepted (finer) quadrature
  double previous = 0.0;   // value at grid_exp - 1, for the certificate
  bool certified = false;  // |value - previous| <= kQuadratureCertTol
};

// L1 norm by quadrature of |f| on the dyadic grid.  Starts at `grid_exp`,
// compares against the next refinement, and escalates until the two agree to
// kQuadratureCertTol; throws QuadratureNotConverged past kMaxGridExp.
L1Result norm_l1(const TrigPoly& f, int grid_exp = kDefaultGridExp);

struct SupResult {
  double lower = 0.0;  // largest evaluated |f|, refined around the grid argmax
  double upper = 0.0;  // rigorous bound from the Bernstein sampling inequality
  double arg_angle = 0.0;
  int grid_exp = 0;

  double width() const { return upper - lower; }
  // The enclosure admits `target` up to `slack` on both sides.
  bool encloses(double target, double slack) const {
    return lower <= target + slack && upper >= target - slack;
  }
};

// Sup norm: grid maximum of |f| polished by golden-section refinement in the
// best cells, plus an upper bound valid for the full circle.
SupResult norm_linf(const TrigPoly& f, int grid_exp = kDefaultGridExp);

double grid_l1(const GridFunction& u);   // mean of |u|
double grid_sup(const GridFunction& u);  // max of |u| over the samples

}  // namespace lacuna
