#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lacuna/common.hpp"
#include "lacuna/grid.hpp"
#include "lacuna/norms.hpp"
#include "lacuna/spectra.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Midpoint decomposition f = (u + v)/2 in the L1 ball, driven by a bounded
// real multiplier h with spec(f*h) inside the admissible set and h
// nonconstant where f lives.  u = f*(1 + eps*(h - c)), v = f*(1 - eps*(h - c)).
struct L1Witness {
  TrigPoly h;
  double shift = 0.0;    // c, the |f|-weighted mean of h
  double epsilon = 0.0;  // in (0, 1/sup|h - c|]
  TrigPoly u, v;
  double residual_max = 0.0;  // max |(f h)^(k)| over admissible-set violations
  std::map<std::int64_t, double> residuals;
  double nonconstancy = 0.0;  // variance of h over the support of f
  double u_l1 = 0.0, v_l1 = 0.0;
  double f_l1 = 0.0;
  int grid_exp = 0;
  std::string method;  // "periodic(n)", "cofinite", "search(D)"
};

// Sup-norm midpoint pair u = f + g p, v = f - g p with g = 1 - |f| and p an
// analytic polynomial of unit sup norm killing the excluded frequencies of
// g p.  The pair stays in the ball pointwise: |f| + g|p| <= 1.
struct LinfWitness {
  TrigPoly p;
  GridFunction g;  // 1 - |f| on the verification grid
  GridFunction u, v;
  std::vector<std::pair<std::int64_t, double>> residuals;  // |(g p)^(k)| at excluded k
  double residual_max = 0.0;
  double u_sup = 0.0, v_sup = 0.0;  // grid sup of the pair
  double pointwise_bound = 0.0;     // max over grid of |f| + g|p|
  double p_sup_lower = 0.0, p_sup_upper = 0.0;
  int grid_exp = 0;
  std::string note;
};

struct OracleWitness {
  TrigPoly p;               // coefficient polynomial found by the LP
  bool weighted = true;     // perturbation is (1-|f|)*p; otherwise p itself
  double perturbation_sup = 0.0;
  double pair_sup = 0.0;
  double spectral_residual = 0.0;
  int objective_index = -1;
  int grid_exp = 0;
};

struct SearchDiagnostics {
  int parameter_count = 0;
  int constraint_count = 0;
  int rank = 0;
  int nullity = 0;
  std::vector<double> singular_values;
};

enum class Verdict {
  NonExtreme,
  ExtremeByUnimodular,
  ExtremeByDSet,
  ExtremeByOuter,
  ExtremeByLogIntegral,
  Inconclusive,
};

std::string to_string(Verdict v);

struct ExtremalityCertificate {
  Verdict verdict = Verdict::Inconclusive;
  std::string space_p;  // "1" or "inf"
  std::string set_descriptor;
  std::optional<L1Witness> l1_witness;
  std::optional<LinfWitness> linf_witness;
  std::optional<OracleWitness> oracle_witness;
  std::optional<SearchDiagnostics> diagnostics;
  double measure_low = 0.0, measure_high = 0.0;  // D-set verdicts only
  std::string note;
};

// --- L1 constructions -------------------------------------------------------

// Multiplier h = Re(z^n) for a set with translation period n.
L1Witness periodic_witness(const TrigPoly& f, const SpectralSet& set,
                           int grid_exp = kDefaultGridExp);

// Z \ set = {k_1..k_N}: a real combination of z^1..z^{2N+1} annihilating the
// excluded frequencies of f*h exists by dimension count; found by SVD.
L1Witness cofinite_l1_witness(const TrigPoly& f, const SpectralSet& set,
                              int grid_exp = kDefaultGridExp);

struct GeneralSearchResult {
  std::optional<L1Witness> witness;
  SearchDiagnostics diagnostics;
  ExtremalityCertificate certificate(const SpectralSet& set) const;
};

// Degree-capped multiplier search: h real with spectrum in [-D, D] and
// (f h)^(k) = 0 for every excluded k in the product band.  Constants always
// solve the system and are projected away; Inconclusive when nothing else
// survives.
GeneralSearchResult general_l1_witness_search(const TrigPoly& f, const SpectralSet& set,
                                              int degree, bool allow_constant = true,
                                              int grid_exp = kDefaultGridExp);

// --- Linf constructions ------------------------------------------------------

LinfWitness cofinite_linf_witness(const TrigPoly& f, const SpectralSet& set,
                                  int grid_exp = kDefaultGridExp);

// Unimodular => extreme; otherwise produce a verified midpoint pair.
ExtremalityCertificate classify_linf_cofinite(const TrigPoly& f, const SpectralSet& set,
                                              int grid_exp = kDefaultGridExp);

// Sufficient criterion for sets carrying the D-set citation tag: |f| = 1 on a
// set of positive measure forces extremality.  The measure is enclosed by
// arc bisection; Inconclusive when the lower enclosure is zero.
ExtremalityCertificate dset_extreme_certificate(const TrigPoly& f, const SpectralSet& set,
                                                int grid_exp = kDefaultGridExp);
// Grid-defined variant for functions that are unimodular on arcs (trig
// polynomials never are); the declared band is where genuine spectral content
// may live, everything else is held to the aliasing floor.
ExtremalityCertificate dset_extreme_certificate(const GridFunction& f, const SpectralSet& set,
                                                Band declared_band);

struct ParallelogramReport {
  bool hypothesis_ok = false;   // sup|f + g|, sup|f - g| <= 1 on the grid
  double hypothesis_excess = 0.0;
  double max_violation = 0.0;   // max over grid of |g|^2 - (1 - |f|^2)
  bool bound_holds = false;     // meaningful only when hypothesis_ok
};

ParallelogramReport parallelogram_bound(const GridFunction& f, const GridFunction& g,
                                        double tol = 1e-12);

// --- Brute-force feasibility oracle ------------------------------------------

struct OracleOptions {
  int grid_exp = 12;
  int polygon_sides = 64;
  int objectives = 8;
  std::uint64_t seed = 1;
  double witness_tol = kOracleWitnessTol;
};

// Independent check for non-extremality in the sup-norm ball.  When the set
// is cofinite in Z the perturbation is (1-|f|)*p with p drawn from the basis
// span and the excluded frequencies imposed as linear equalities (the
// midpoint bound then holds pointwise everywhere).  Otherwise the basis
// polynomials themselves are the perturbations and must already live in the
// set.  Modulus constraints are inscribed regular polygons at the grid
// points; every returned witness is re-verified on a finer grid before it is
// believed.
ExtremalityCertificate linf_feasibility_oracle(const TrigPoly& f, const SpectralSet& set,
                                               const std::vector<TrigPoly>& basis,
                                               const OracleOptions& options = {});

// Helpers shared by the witness constructors and the CLI.
bool spectrum_in(const TrigPoly& f, const SpectralSet& set,
                 std::vector<std::int64_t>* offenders = nullptr);

}  // namespace lacuna
