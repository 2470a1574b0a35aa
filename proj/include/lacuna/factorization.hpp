#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lacuna/common.hpp"
#include "lacuna/norms.hpp"
#include "lacuna/spectra.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Roots of the complex polynomial c[0] + c[1] x + ... + c[d] x^d (c[d] != 0),
// via the companion-matrix eigenvalues polished by Newton steps.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

struct RootCluster {
  Complex location;
  int multiplicity = 1;
  double residual = 0.0;  // |P(location)| / max|coeff|
};

struct FactorizationReport {
  std::vector<RootCluster> roots_inside;    // |root| < 1 - boundary_tol
  std::vector<RootCluster> roots_on_boundary;
  std::vector<RootCluster> roots_outside;
  bool is_outer = false;      // no roots in the open disk
  int blaschke_degree = 0;    // multiplicity count of the inside roots
  int degree = 0;
  double boundary_tol = kBoundaryRootTol;
  double max_residual = 0.0;
  bool ill_conditioned = false;  // some cluster exceeded the residual bound
  std::string note;
};

// Inner/outer split of an analytic trig polynomial (spectrum in Zplus, f != 0).
FactorizationReport factorize(const TrigPoly& f);

enum class H1Verdict { Extreme, NonExtreme, NotUnitNorm };

struct H1Classification {
  H1Verdict verdict;
  double l1_norm = 0.0;
  FactorizationReport factorization;
};

// Unit ball of H^1: extreme iff outer and of unit norm.
H1Classification classify_h1_extreme(const TrigPoly& f, int grid_exp = kDefaultGridExp);

struct LogIntegralReport {
  bool divergent = false;
  bool suspect = false;  // vanishing order >= 20 or no clean power law
  double value = 0.0;    // meaningful only when !divergent
  double error_estimate = 0.0;

  struct VanishingPoint {
    double angle = 0.0;
    double order = 0.0;  // least-squares slope of log(1-|f|) vs log(radius)
  };
  std::vector<VanishingPoint> vanishing_points;

  struct Arc {
    double start = 0.0;
    double end = 0.0;  // start <= end after unwrapping
  };
  std::vector<Arc> unimodular_arcs;  // 1-|f| below tolerance throughout

  std::string note;
};

// Mean of log(1 - |f|) over the circle with singularity handling: isolated
// near-unimodular points get their vanishing order estimated by log-log
// regression and are absorbed by subtracting ord * log|2 sin((t - t0)/2)|,
// whose exact mean is zero; arcs of near-unimodular values flag divergence.
// Requires sup|f| <= 1 + kNormGateTol.
LogIntegralReport log_integral(const TrigPoly& f, int grid_exp = kDefaultGridExp);

enum class HinfVerdict { Extreme, NonExtreme };

struct HinfClassification {
  HinfVerdict verdict;
  std::string scope;  // which criterion validity class the set fell into
  SupResult sup_norm;
  LogIntegralReport log_report;
};

// Unit ball of the sup-norm space over an admissible set: extreme iff the sup
// norm is one and the log integral diverges.  Valid when the set lies in
// Zplus with finite complement there, or equals the even nonnegative
// integers; anything else is refused rather than extrapolated.
HinfClassification classify_hinf_extreme(const TrigPoly& f, const SpectralSet& set,
                                         int grid_exp = kDefaultGridExp);

}  // namespace lacuna
