#include "lacuna/extremality.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/simplex.hpp"

namespace lacuna {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NonExtreme: return "NonExtreme";
    case Verdict::ExtremeByUnimodular: return "ExtremeByUnimodular";
    case Verdict::ExtremeByDSet: return "ExtremeByDSet";
    case Verdict::ExtremeByOuter: return "ExtremeByOuter";
    case Verdict::ExtremeByLogIntegral: return "ExtremeByLogIntegral";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool spectrum_in(const TrigPoly& f, const SpectralSet& set,
                 std::vector<std::int64_t>* offenders) {
  bool ok = true;
  for (const auto& [k, c] : f.coeffs()) {
    if (!set.contains(k)) {
      ok = false;
      if (offenders) {
        offenders->push_back(k);
      } else {
        return false;
      }
    }
  }
  return ok;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int fit_grid_exp(int q, std::int64_t bandwidth) {
  while ((std::int64_t(1) << (q - 1)) <= bandwidth) ++q;
  return q;
}

void gate_unit_l1(const TrigPoly& f, int q, double* measured) {
  L1Result nf = norm_l1(f, q);
  if (std::abs(nf.value - 1.0) > kNormGateTol) {
    throw PreconditionError("witness constructor: L1 norm differs from 1 beyond tolerance (" +
                            std::to_string(nf.value) + ")");
  }
  if (measured) *measured = nf.value;
}

void gate_unit_sup(const TrigPoly& f, int q, SupResult* out) {
  SupResult sup = norm_linf(f, q);
  if (!sup.encloses(1.0, kNormGateTol)) {
    throw PreconditionError("witness constructor: sup norm enclosure excludes 1 [" +
                            std::to_string(sup.lower) + ", " + std::to_string(sup.upper) + "]");
  }
  if (out) *out = sup;
}

void gate_spectrum(const TrigPoly& f, const SpectralSet& set) {
  std::vector<std::int64_t> offenders;
  if (!spectrum_in(f, set, &offenders)) {
    std::string what = "witness constructor: spectrum leaves the admissible set at";
    for (std::int64_t k : offenders) what += " " + std::to_string(k);
    throw PreconditionError(what);
  }
}

// Reduced row echelon form with deterministic pivoting; rows ordered by
// leading column so the first row is supported on the lowest coordinates.
Eigen::MatrixXd rref(Eigen::MatrixXd m, double tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int i = row; i < rows; ++i) {
      if (std::abs(m(i, col)) > best) {
        best = std::abs(m(i, col));
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      double factor = m(i, col);
      if (factor != 0.0) m.row(i) -= factor * m.row(row);
    }
    ++row;
  }
  return m.topRows(row);
}

Eigen::MatrixXcd rref_complex(Eigen::MatrixXcd m, double tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    double best = tol;
    for (int i = row; i < rows; ++i) {
      if (std::abs(m(i, col)) > best) {
        best = std::abs(m(i, col));
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    m.row(pivot).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      Complex factor = m(i, col);
      if (factor != Complex(0.0, 0.0)) m.row(i) -= factor * m.row(row);
    }
    ++row;
  }
  return m.topRows(row);
}

void sign_normalize(Eigen::VectorXd& v) {
  Eigen::Index lead = 0;
  v.cwiseAbs().maxCoeff(&lead);
  if (v(lead) < 0.0) v = -v;
}

// Completes h into the midpoint pair and verifies every piece of the witness.
L1Witness finish_l1_witness(const TrigPoly& f, const SpectralSet& set, const TrigPoly& h,
                            int q, const std::string& method) {
  L1Witness w;
  w.h = h;
  w.method = method;

  if (!h.is_real_valued(1e-12)) {
    throw NumericalAnomaly("l1 witness: multiplier is not real-valued");
  }

  gate_unit_l1(f, q, &w.f_l1);
  gate_spectrum(f, set);

  // Weighted shift c = (|f| h) / (|f|), both by the same quadrature and the
  // grid escalated until the ratio is stable, so the decomposition identity
  // integrates to zero at the accuracy of the certified norms.
  int qq = fit_grid_exp(q, std::max(f.bandwidth(), h.bandwidth()) + 1);
  GridFunction fg(1), hg(1);
  double shift_prev = 0.0;
  bool have_prev = false;
  bool converged = false;
  for (; qq <= kMaxGridExp + 1; ++qq) {
    fg = to_grid(f, qq);
    hg = to_grid(h, qq);
    double wsum = 0.0, hsum = 0.0;
    for (std::size_t j = 0; j < fg.size(); ++j) {
      double a = std::abs(fg[j]);
      wsum += a;
      hsum += a * hg[j].real();
    }
    if (wsum <= 0.0) throw PreconditionError("l1 witness: f vanishes on the whole grid");
    w.shift = hsum / wsum;
    if (have_prev && std::abs(w.shift - shift_prev) <= 1e-11) {
      converged = true;
      break;
    }
    shift_prev = w.shift;
    have_prev = true;
  }
  if (!converged) {
    throw QuadratureNotConverged("l1 witness: shift quadrature not converged", shift_prev,
                                 w.shift);
  }
  w.grid_exp = std::min<int>(qq, kMaxGridExp + 1);
  const std::size_t n = fg.size();

  TrigPoly h_centered = h - TrigPoly::constant(Complex(w.shift, 0.0));
  SupResult sup_hc = norm_linf(h_centered, std::min(q, kDefaultGridExp));
  if (sup_hc.upper <= 0.0) {
    throw NumericalAnomaly("l1 witness: multiplier is constant after centering");
  }
  w.epsilon = 1.0 / sup_hc.upper;

  // Nonconstancy of h where f is supported.
  double fmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) fmax = std::max(fmax, std::abs(fg[j]));
  double mean = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(fg[j]) > 1e-8 * fmax) {
      mean += hg[j].real();
      ++count;
    }
  }
  if (count == 0) throw PreconditionError("l1 witness: support of f is empty on the grid");
  mean /= static_cast<double>(count);
  double var = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(fg[j]) > 1e-8 * fmax) {
      double d = hg[j].real() - mean;
      var += d * d;
    }
  }
  var /= static_cast<double>(count);
  w.nonconstancy = var;
  SupResult sup_h = norm_linf(h, std::min(q, kDefaultGridExp));
  if (var <= 1e-12 * sup_h.upper * sup_h.upper) {
    throw NumericalAnomaly("l1 witness: multiplier is constant on the support of f");
  }

  TrigPoly fh = multiply(f, h);
  TrigPoly delta = w.epsilon * (fh - w.shift * f);
  w.u = f + delta;
  w.v = f - delta;

  // Spectral residuals over every excluded frequency in the product band.
  Band product_band(std::min(f.min_freq(), f.min_freq() + h.min_freq()),
                    std::max(f.max_freq(), f.max_freq() + h.max_freq()));
  for (std::int64_t k : set.complement_in(product_band)) {
    double r = std::abs(fh.coeff(k));
    w.residuals[k] = r;
    w.residual_max = std::max(w.residual_max, r);
  }
  if (w.residual_max > kSpectralResidualTolL1) {
    throw NumericalAnomaly("l1 witness: spectral residual " + std::to_string(w.residual_max) +
                           " exceeds tolerance");
  }

  w.u_l1 = norm_l1(w.u, q).value;
  w.v_l1 = norm_l1(w.v, q).value;
  if (std::abs(w.u_l1 - w.f_l1) > 1e-9 || std::abs(w.v_l1 - w.f_l1) > 1e-9) {
    throw NumericalAnomaly("l1 witness: midpoint pair norms drift from the norm of f");
  }
  if ((w.u - w.v).max_abs_coeff() <= 0.0) {
    throw NumericalAnomaly("l1 witness: decomposition is degenerate (u == v)");
  }
  return w;
}

}  // namespace

L1Witness periodic_witness(const TrigPoly& f, const SpectralSet& set, int grid_exp) {
  auto period = set.period(kDefaultBandHalfWidth);
  if (!period) {
    throw PreconditionError("periodic_witness: no translation period found for the set");
  }
  TrigPoly h = real_combination({1.0}, {period->value});
  std::string method = "periodic(" + std::to_string(period->value) +
                       (period->exact ? "" : ",band-verified") + ")";
  return finish_l1_witness(f, set, h, grid_exp, method);
}

L1Witness cofinite_l1_witness(const TrigPoly& f, const SpectralSet& set, int grid_exp) {
  auto excluded = set.finite_complement_in_z();
  if (!excluded) {
    throw PreconditionError("cofinite_l1_witness: the set complement in Z is not finite");
  }
  gate_unit_l1(f, grid_exp, nullptr);
  gate_spectrum(f, set);

  const int n_excl = static_cast<int>(excluded->size());
  const int cols = 2 * n_excl + 1;

  // Rows: real and imaginary part of (f h)^(k) for each excluded k, where
  // h = sum_j alpha_j (z^j + conj(z)^j)/2 over j = 1..2N+1.
  Eigen::MatrixXd s_matrix = Eigen::MatrixXd::Zero(std::max(2 * n_excl, 1), cols);
  if (n_excl > 0) {
    for (int nu = 0; nu < n_excl; ++nu) {
      std::int64_t k = (*excluded)[static_cast<std::size_t>(nu)];
      for (int j = 1; j <= cols; ++j) {
        Complex gamma = 0.5 * (f.coeff(k - j) + f.coeff(k + j));
        s_matrix(2 * nu, j - 1) = gamma.real();
        s_matrix(2 * nu + 1, j - 1) = gamma.imag();
      }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s_matrix, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = std::max(1e-9 * sigma_max, 1e-13);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++rank;
  }
  const int nullity = cols - rank;
  if (nullity < 1) {
    std::string what = "cofinite_l1_witness: construction failed, singular values";
    for (Eigen::Index i = 0; i < sigma.size(); ++i) what += " " + std::to_string(sigma(i));
    throw NumericalAnomaly(what);
  }

  Eigen::VectorXd alpha;
  if (nullity == 1) {
    alpha = svd.matrixV().col(cols - 1);
  } else {
    Eigen::MatrixXd null_rows(nullity, cols);
    for (int i = 0; i < nullity; ++i) null_rows.row(i) = svd.matrixV().col(rank + i).transpose();
    Eigen::MatrixXd reduced = rref(null_rows, 1e-10);
    alpha = reduced.row(0).transpose();
    alpha.normalize();
  }
  sign_normalize(alpha);

  double check = (s_matrix * alpha).cwiseAbs().maxCoeff();
  if (check > std::max(1e-9 * std::max(sigma_max, 1.0), 1e-12)) {
    throw NumericalAnomaly("cofinite_l1_witness: null vector residual " +
                           std::to_string(check));
  }

  std::vector<double> weights(static_cast<std::size_t>(cols));
  std::vector<std::int64_t> freqs(static_cast<std::size_t>(cols));
  for (int j = 0; j < cols; ++j) {
    weights[static_cast<std::size_t>(j)] = alpha(j);
    freqs[static_cast<std::size_t>(j)] = j + 1;
  }
  TrigPoly h = real_combination(weights, freqs);
  return finish_l1_witness(f, set, h, grid_exp, "cofinite");
}

ExtremalityCertificate GeneralSearchResult::certificate(const SpectralSet& set) const {
  ExtremalityCertificate cert;
  cert.space_p = "1";
  cert.set_descriptor = set.to_string();
  cert.diagnostics = diagnostics;
  if (witness) {
    cert.verdict = Verdict::NonExtreme;
    cert.l1_witness = witness;
  } else {
    cert.verdict = Verdict::Inconclusive;
    cert.note = "no nonconstant multiplier within the degree cap";
  }
  return cert;
}

GeneralSearchResult general_l1_witness_search(const TrigPoly& f, const SpectralSet& set,
                                              int degree, bool allow_constant, int grid_exp) {
  if (degree < 1) throw PreconditionError("general_l1_witness_search: degree must be >= 1");
  gate_unit_l1(f, grid_exp, nullptr);
  gate_spectrum(f, set);

  // Parameters: optional constant a0, then (Re c_j, Im c_j) for j = 1..D with
  // h = a0 + sum_j (c_j z^j + conj(c_j) conj(z)^j).
  const int dim = 2 * degree + (allow_constant ? 1 : 0);
  const int off = allow_constant ? 1 : 0;

  std::vector<std::int64_t> constraints_at;
  if (!f.is_zero()) {
    Band product_band(f.min_freq() - degree, f.max_freq() + degree);
    constraints_at = set.complement_in(product_band);
  }
  const int n_rows = 2 * static_cast<int>(constraints_at.size());

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(std::max(n_rows, 1), dim);
  for (std::size_t idx = 0; idx < constraints_at.size(); ++idx) {
    std::int64_t k = constraints_at[idx];
    int re_row = static_cast<int>(2 * idx);
    int im_row = re_row + 1;
    if (allow_constant) {
      Complex fk = f.coeff(k);
      m(re_row, 0) = fk.real();
      m(im_row, 0) = fk.imag();
    }
    for (int j = 1; j <= degree; ++j) {
      Complex a = f.coeff(k - j);  // multiplies c_j
      Complex b = f.coeff(k + j);  // multiplies conj(c_j)
      int pcol = off + 2 * (j - 1);
      int qcol = pcol + 1;
      m(re_row, pcol) = a.real() + b.real();
      m(re_row, qcol) = -a.imag() + b.imag();
      m(im_row, pcol) = a.imag() + b.imag();
      m(im_row, qcol) = a.real() - b.real();
    }
  }

  GeneralSearchResult result;
  result.diagnostics.parameter_count = dim;
  result.diagnostics.constraint_count = n_rows;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = std::max(1e-10 * sigma_max, 1e-13);
  int rank = 0;
  if (n_rows > 0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > tol) ++rank;
    }
  }
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    result.diagnostics.singular_values.push_back(sigma(i));
  }
  result.diagnostics.rank = rank;
  result.diagnostics.nullity = dim - rank;

  if (result.diagnostics.nullity == 0) return result;

  Eigen::MatrixXd null_rows(result.diagnostics.nullity, dim);
  for (int i = 0; i < result.diagnostics.nullity; ++i) {
    null_rows.row(i) = svd.matrixV().col(rank + i).transpose();
  }
  Eigen::MatrixXd reduced = rref(null_rows, 1e-10);

  for (int i = 0; i < reduced.rows(); ++i) {
    Eigen::VectorXd cand = reduced.row(i).transpose();
    if (allow_constant) cand(0) = 0.0;  // constants solve the system; strip them
    if (cand.norm() <= 1e-10) continue;
    cand.normalize();
    sign_normalize(cand);

    TrigPoly h;
    for (int j = 1; j <= degree; ++j) {
      Complex c(cand(off + 2 * (j - 1)), cand(off + 2 * (j - 1) + 1));
      if (std::abs(c) > 0.0) {
        h.add_term(j, c);
        h.add_term(-j, std::conj(c));
      }
    }
    if (h.is_zero()) continue;
    try {
      result.witness =
          finish_l1_witness(f, set, h, grid_exp, "search(" + std::to_string(degree) + ")");
      return result;
    } catch (const NumericalAnomaly&) {
      continue;  // degenerate on the support of f; try the next null direction
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Sup-norm constructions
// ---------------------------------------------------------------------------


namespace {

std::vector<double> deficit_samples(const GridFunction& fg) {
  std::vector<double> out(fg.size());
  for (std::size_t j = 0; j < fg.size(); ++j) {
    out[j] = std::max(0.0, 1.0 - std::abs(fg[j]));
  }
  return out;
}

}  // namespace

LinfWitness cofinite_linf_witness(const TrigPoly& f, const SpectralSet& set, int grid_exp) {
  auto excluded = set.finite_complement_in_z();
  if (!excluded) {
    throw PreconditionError("cofinite_linf_witness: the set complement in Z is not finite");
  }
  gate_unit_sup(f, grid_exp, nullptr);
  gate_spectrum(f, set);

  // The spectral side always runs at the default grid or finer: 1-|f| is not
  // band-limited and its aliasing floor must sit below the residual gate.
  const int qq = fit_grid_exp(std::max(grid_exp, kDefaultGridExp), f.bandwidth() + 1);
  GridFunction fg = to_grid(f, qq);
  std::vector<double> deficit = deficit_samples(fg);
  std::size_t nonuni = 0;
  for (double d : deficit) {
    if (d > kMeasureTol) ++nonuni;
  }
  if (nonuni < 2) {
    throw PreconditionError(
        "cofinite_linf_witness: |f| = 1 a.e. on the grid; such f is extreme "
        "(see classify_linf_cofinite)");
  }

  const int n_excl = static_cast<int>(excluded->size());
  GridFunction gg(qq);
  for (std::size_t j = 0; j < gg.size(); ++j) gg[j] = Complex(deficit[j], 0.0);
  std::vector<Complex> g_hat = grid_spectrum(gg);

  Eigen::VectorXcd beta;
  std::string note;
  if (n_excl == 0) {
    beta = Eigen::VectorXcd::Ones(1);
  } else {
    Eigen::MatrixXcd t_matrix(n_excl, n_excl + 1);
    for (int nu = 0; nu < n_excl; ++nu) {
      std::int64_t k = (*excluded)[static_cast<std::size_t>(nu)];
      for (int j = 0; j <= n_excl; ++j) t_matrix(nu, j) = spectrum_at(g_hat, k - j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t_matrix, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double sigma_max = sigma(0);
    const double tol = std::max(1e-9 * sigma_max, 1e-15);
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > tol) ++rank;
    }
    int nullity = n_excl + 1 - rank;
    if (nullity > 1) {
      note = "annihilator system is rank-deficient (nullity " + std::to_string(nullity) + ")";
      Eigen::MatrixXcd null_rows(nullity, n_excl + 1);
      for (int i = 0; i < nullity; ++i) {
        null_rows.row(i) = svd.matrixV().col(rank + i).transpose();
      }
      Eigen::MatrixXcd reduced = rref_complex(null_rows, 1e-10);
      beta = reduced.row(0).transpose();
    } else {
      beta = svd.matrixV().col(n_excl);
    }
    double check = (t_matrix * beta).cwiseAbs().maxCoeff() / std::max(sigma_max, 1.0);
    if (check > 1e-9) {
      throw NumericalAnomaly("cofinite_linf_witness: null vector residual " +
                             std::to_string(check));
    }
  }

  // Phase convention, then normalize to unit sup norm using the certified
  // upper bound so the true sup of p cannot exceed one.
  Eigen::Index lead = 0;
  beta.cwiseAbs().maxCoeff(&lead);
  Complex pivot = beta(lead);
  if (std::abs(pivot) > 0.0) beta *= std::conj(pivot) / std::abs(pivot);

  TrigPoly p;
  for (int j = 0; j < beta.size(); ++j) {
    if (std::abs(beta(j)) > 1e-15) p.add_term(j, beta(j));
  }
  if (p.is_zero()) throw NumericalAnomaly("cofinite_linf_witness: null vector vanished");
  SupResult p_sup = norm_linf(p, std::min(grid_exp, kDefaultGridExp));
  p = (1.0 / p_sup.upper) * p;

  // Verification on the refined grid.
  const int qv = qq + 1;
  GridFunction fv = to_grid(f, qv);
  GridFunction pv = to_grid(p, qv);
  LinfWitness w;
  w.p = p;
  w.grid_exp = qv;
  w.note = note;
  SupResult p_sup2 = norm_linf(p, std::min(grid_exp, kDefaultGridExp));
  w.p_sup_lower = p_sup2.lower;
  w.p_sup_upper = p_sup2.upper;

  GridFunction gv(qv);
  GridFunction pert(qv);
  double bound = 0.0;
  for (std::size_t j = 0; j < gv.size(); ++j) {
    double d = std::max(0.0, 1.0 - std::abs(fv[j]));
    gv[j] = Complex(d, 0.0);
    pert[j] = d * pv[j];
    bound = std::max(bound, std::abs(fv[j]) + d * std::abs(pv[j]));
  }
  w.g = gv;
  w.pointwise_bound = bound;

  std::vector<Complex> pert_hat = grid_spectrum(pert);
  for (std::int64_t k : *excluded) {
    double r = std::abs(spectrum_at(pert_hat, k));
    w.residuals.emplace_back(k, r);
    w.residual_max = std::max(w.residual_max, r);
  }
  if (w.residual_max > kSpectralResidualTolLinf) {
    throw NumericalAnomaly("cofinite_linf_witness: spectral residual " +
                           std::to_string(w.residual_max) + " exceeds tolerance");
  }
  if (grid_sup(pert) <= 1e-10) {
    throw NumericalAnomaly("cofinite_linf_witness: perturbation g*p vanishes");
  }

  w.u = fv + pert;
  w.v = fv - pert;
  w.u_sup = grid_sup(w.u);
  w.v_sup = grid_sup(w.v);
  if (w.u_sup > 1.0 + kSpectralResidualTolLinf || w.v_sup > 1.0 + kSpectralResidualTolLinf) {
    throw NumericalAnomaly("cofinite_linf_witness: midpoint pair leaves the ball");
  }
  return w;
}

ExtremalityCertificate classify_linf_cofinite(const TrigPoly& f, const SpectralSet& set,
                                              int grid_exp) {
  if (!set.finite_complement_in_z()) {
    throw PreconditionError("classify_linf_cofinite: the set complement in Z is not finite");
  }
  gate_unit_sup(f, grid_exp, nullptr);
  gate_spectrum(f, set);

  ExtremalityCertificate cert;
  cert.space_p = "inf";
  cert.set_descriptor = set.to_string();

  const int qq = fit_grid_exp(grid_exp, f.bandwidth() + 1);
  GridFunction fg = to_grid(f, qq);
  std::vector<double> deficit = deficit_samples(fg);
  std::size_t offenders = 0;
  for (double d : deficit) {
    if (d > kMeasureTol) ++offenders;
  }

  if (offenders == 0) {
    // Refine the deepest dips before declaring unimodularity.
    const double h = kTwoPi / static_cast<double>(fg.size());
    std::vector<std::size_t> order(fg.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::partial_sort(order.begin(), order.begin() + 8, order.end(),
                      [&](std::size_t a, std::size_t b) { return deficit[a] > deficit[b]; });
    double refined = 0.0;
    for (int c = 0; c < 8; ++c) {
      double center = fg.angle(order[static_cast<std::size_t>(c)]);
      for (int s = -32; s <= 32; ++s) {
        double theta = center + h * static_cast<double>(s) / 32.0;
        refined = std::max(refined, 1.0 - std::abs(f.eval_angle(theta)));
      }
    }
    if (refined <= kMeasureTol) {
      cert.verdict = Verdict::ExtremeByUnimodular;
      cert.measure_low = 1.0;
      cert.measure_high = 1.0;
      cert.note = "|f| = 1 on the whole grid (exact for band-limited f at this density)";
      return cert;
    }
  }

  try {
    cert.linf_witness = cofinite_linf_witness(f, set, grid_exp);
    cert.verdict = Verdict::NonExtreme;
  } catch (const PreconditionError& e) {
    cert.verdict = Verdict::Inconclusive;
    cert.note = std::string("witness construction refused: ") + e.what();
  }
  return cert;
}

namespace {

ExtremalityCertificate dset_measure_certificate(const std::vector<double>& deficit,
                                                const TrigPoly* refiner, double grid_h,
                                                const SpectralSet& set) {
  ExtremalityCertificate cert;
  cert.space_p = "inf";
  cert.set_descriptor = set.to_string();

  const std::size_t n = deficit.size();
  std::vector<bool> flat(n);
  std::size_t flat_count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    flat[j] = deficit[j] <= kMeasureTol;
    if (flat[j]) ++flat_count;
  }
  if (flat_count == n) {
    cert.verdict = Verdict::ExtremeByDSet;
    cert.measure_low = 1.0;
    cert.measure_high = 1.0;
    cert.note = "unimodular on the whole grid";
    return cert;
  }

  double low = 0.0, high = 0.0;
  std::size_t start = 0;
  while (start < n && flat[start]) ++start;
  for (std::size_t step = 0; step < n;) {
    std::size_t j = (start + step) % n;
    if (!flat[j]) {
      ++step;
      continue;
    }
    std::size_t len = 0;
    std::size_t begin = j;
    while (step < n && flat[(start + step) % n]) {
      ++step;
      ++len;
    }
    if (len >= 2) {
      double inner = static_cast<double>(len - 1) * grid_h;
      double slack = 2.0 * grid_h;
      if (refiner) {
        // Bisect each endpoint toward the true crossing of the tolerance.
        auto crossing = [&](double inside, double outside) {
          for (int it = 0; it < 20; ++it) {
            double mid = 0.5 * (inside + outside);
            double d = std::max(0.0, 1.0 - std::abs(refiner->eval_angle(mid)));
            (d <= kMeasureTol ? inside : outside) = mid;
          }
          return inside;
        };
        double a0 = begin * grid_h;
        double b0 = a0 + inner;
        double a = crossing(a0, a0 - grid_h);
        double b = crossing(b0, b0 + grid_h);
        inner = b - a;
        slack = 2.0 * grid_h / (1 << 20);
      }
      low += inner / kTwoPi;
      high += (inner + slack) / kTwoPi;
    } else {
      high += 2.0 * grid_h / kTwoPi;
    }
  }

  cert.measure_low = low;
  cert.measure_high = std::min(1.0, high);
  if (low > 0.0) {
    cert.verdict = Verdict::ExtremeByDSet;
  } else {
    cert.verdict = Verdict::Inconclusive;
    cert.note =
        "no arc of unimodularity found (the criterion is sufficient only; for trig "
        "polynomials positive measure would force |f| = 1 everywhere)";
  }
  return cert;
}

void gate_dset_tag(const SpectralSet& set) {
  auto tags = set.classify();
  if (std::find(tags.begin(), tags.end(), "dset-by-citation") == tags.end()) {
    throw PreconditionError(
        "dset_extreme_certificate: the set carries no D-set citation tag; the hypothesis "
        "is not checkable computationally");
  }
}

}  // namespace

ExtremalityCertificate dset_extreme_certificate(const TrigPoly& f, const SpectralSet& set,
                                                int grid_exp) {
  gate_dset_tag(set);
  gate_unit_sup(f, grid_exp, nullptr);
  gate_spectrum(f, set);
  const int qq = fit_grid_exp(grid_exp, f.bandwidth() + 1);
  GridFunction fg = to_grid(f, qq);
  std::vector<double> deficit = deficit_samples(fg);
  return dset_measure_certificate(deficit, &f, kTwoPi / static_cast<double>(fg.size()), set);
}

ExtremalityCertificate dset_extreme_certificate(const GridFunction& f, const SpectralSet& set,
                                                Band declared_band) {
  gate_dset_tag(set);
  double sup = grid_sup(f);
  if (std::abs(sup - 1.0) > kNormGateTol) {
    throw PreconditionError("dset_extreme_certificate: grid sup norm differs from 1");
  }
  // Spectral content must respect the set inside the declared band and stay
  // at the aliasing floor outside it.
  std::vector<Complex> hat = grid_spectrum(f);
  const std::int64_t half = static_cast<std::int64_t>(f.size()) / 2;
  for (std::int64_t k = -half + 1; k < half; ++k) {
    double mag = std::abs(spectrum_at(hat, k));
    if (declared_band.contains(k)) {
      if (!set.contains(k) && mag > kSpectralResidualTolLinf) {
        throw PreconditionError("dset_extreme_certificate: spectral leakage at frequency " +
                                std::to_string(k));
      }
    } else if (mag > 1e-6) {
      throw PreconditionError(
          "dset_extreme_certificate: spectral content outside the declared band at " +
          std::to_string(k));
    }
  }
  std::vector<double> deficit(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    deficit[j] = std::max(0.0, 1.0 - std::abs(f[j]));
  }
  return dset_measure_certificate(deficit, nullptr, kTwoPi / static_cast<double>(f.size()),
                                  set);
}

ParallelogramReport parallelogram_bound(const GridFunction& f, const GridFunction& g,
                                        double tol) {
  if (f.grid_exp() != g.grid_exp()) {
    throw PreconditionError("parallelogram_bound: grids differ");
  }
  ParallelogramReport report;
  double excess = 0.0;
  double violation = -1e300;
  for (std::size_t j = 0; j < f.size(); ++j) {
    double plus = std::abs(f[j] + g[j]);
    double minus = std::abs(f[j] - g[j]);
    excess = std::max({excess, plus - 1.0, minus - 1.0});
    double mf = std::abs(f[j]);
    double mg = std::abs(g[j]);
    violation = std::max(violation, mg * mg - (1.0 - mf * mf));
  }
  report.hypothesis_excess = std::max(0.0, excess);
  report.hypothesis_ok = excess <= 1e-12;
  report.max_violation = violation;
  report.bound_holds = !report.hypothesis_ok || violation <= tol;
  return report;
}

// ---------------------------------------------------------------------------
// Feasibility oracle
// ---------------------------------------------------------------------------

namespace {

struct PolygonLp {
  // Maximizes objective over y subject to the inscribed-polygon rows generated
  // lazily from |values(y)| <= radius at every grid sample.
  Eigen::MatrixXcd value_map;  // samples x dims: complex value per sample
  double radius = 1.0;
  int sides = 64;

  // Extra fixed rows (boxes etc).
  Eigen::MatrixXd fixed_rows;
  Eigen::VectorXd fixed_bounds;

  struct Outcome {
    bool ok = false;
    Eigen::VectorXd y;
  };

  Outcome maximize(const Eigen::VectorXd& objective) const {
    const int dim = static_cast<int>(value_map.cols());
    const std::size_t samples = static_cast<std::size_t>(value_map.rows());
    const double support = radius * std::cos(std::numbers::pi / sides);
    const Eigen::Index n_fixed = fixed_rows.rows();

    Eigen::MatrixXd rows = fixed_rows;
    Eigen::VectorXd bounds = fixed_bounds;

    Outcome out;
    for (int round = 0; round < 200; ++round) {
      LpResult lp = solve_lp_max(rows, bounds, objective);
      if (lp.status != LpResult::Status::Optimal) return out;

      // Most violated polygon half-plane per sample.
      Eigen::VectorXcd vals = value_map * lp.x.cast<Complex>();
      struct Violation {
        double excess;
        std::size_t sample;
        int side;
      };
      std::vector<Violation> violations;
      for (std::size_t j = 0; j < samples; ++j) {
        Complex v = vals(static_cast<Eigen::Index>(j));
        double mag = std::abs(v);
        if (mag <= support) continue;
        double ang = std::arg(v);
        int side = static_cast<int>(std::llround(
            (ang * sides / std::numbers::pi - 1.0) / 2.0));
        double best_excess = 0.0;
        int best_side = 0;
        for (int s = side - 1; s <= side + 1; ++s) {
          int sw = ((s % sides) + sides) % sides;
          double normal = std::numbers::pi * (2.0 * sw + 1.0) / sides;
          double val = (v * std::polar(1.0, -normal)).real();
          if (val - support > best_excess) {
            best_excess = val - support;
            best_side = sw;
          }
        }
        if (best_excess > 1e-10) violations.push_back({best_excess, j, best_side});
      }
      if (violations.empty()) {
        out.ok = true;
        out.y = lp.x;
        return out;
      }
      std::sort(violations.begin(), violations.end(), [](const Violation& a, const Violation& b) {
        if (a.excess != b.excess) return a.excess > b.excess;
        if (a.sample != b.sample) return a.sample < b.sample;
        return a.side < b.side;
      });
      std::size_t add = std::min<std::size_t>(violations.size(), 48);

      // Keep the master small: fixed rows, near-binding cut rows, new cuts.
      std::vector<Eigen::Index> keep;
      Eigen::VectorXd slack = bounds - rows * lp.x;
      for (Eigen::Index i = n_fixed; i < rows.rows(); ++i) {
        if (slack(i) <= 1e-7 * (1.0 + std::abs(bounds(i)))) keep.push_back(i);
      }
      if (keep.size() > 400) keep.resize(400);

      Eigen::MatrixXd new_rows(n_fixed + static_cast<Eigen::Index>(keep.size() + add), dim);
      Eigen::VectorXd new_bounds(new_rows.rows());
      new_rows.topRows(n_fixed) = fixed_rows;
      new_bounds.head(n_fixed) = fixed_bounds;
      Eigen::Index at = n_fixed;
      for (Eigen::Index i : keep) {
        new_rows.row(at) = rows.row(i);
        new_bounds(at) = bounds(i);
        ++at;
      }
      for (std::size_t i = 0; i < add; ++i) {
        const Violation& viol = violations[i];
        double normal = std::numbers::pi * (2.0 * viol.side + 1.0) / sides;
        Complex rot = std::polar(1.0, -normal);
        for (int d = 0; d < dim; ++d) {
          new_rows(at, d) =
              (value_map(static_cast<Eigen::Index>(viol.sample), d) * rot).real();
        }
        new_bounds(at) = support;
        // Normalize cut rows so wildly scaled value maps stay conditioned.
        double norm = new_rows.row(at).norm();
        if (norm > 1.0) {
          new_rows.row(at) /= norm;
          new_bounds(at) /= norm;
        }
        ++at;
      }
      rows.swap(new_rows);
      bounds.swap(new_bounds);
    }
    return out;
  }
};

}  // namespace

ExtremalityCertificate linf_feasibility_oracle(const TrigPoly& f, const SpectralSet& set,
                                               const std::vector<TrigPoly>& basis,
                                               const OracleOptions& options) {
  if (basis.empty()) throw PreconditionError("linf_feasibility_oracle: empty basis");
  gate_unit_sup(f, options.grid_exp, nullptr);

  ExtremalityCertificate cert;
  cert.space_p = "inf";
  cert.set_descriptor = set.to_string();
  cert.verdict = Verdict::Inconclusive;

  auto excluded = set.finite_complement_in_z();
  const bool weighted = excluded.has_value();

  std::int64_t basis_bw = 0;
  for (const TrigPoly& b : basis) basis_bw = std::max(basis_bw, b.bandwidth());
  int qq = fit_grid_exp(options.grid_exp, std::max(f.bandwidth(), basis_bw) + 1);
  // Keep the sampling inequality factor close to one.
  {
    const double target = std::max<double>(basis_bw, 1);
    while (qq < kMaxGridExp && target * kTwoPi / std::pow(2.0, qq) > 0.02) ++qq;
  }
  const std::size_t n = std::size_t(1) << qq;
  const double h = kTwoPi / static_cast<double>(n);

  GridFunction fg = to_grid(f, qq);
  std::vector<GridFunction> bg;
  bg.reserve(basis.size());
  for (const TrigPoly& b : basis) bg.push_back(to_grid(b, qq));

  const int nb = static_cast<int>(basis.size());
  const int dim_c = 2 * nb;

  if (!weighted) {
    for (const TrigPoly& b : basis) {
      if (!spectrum_in(b, set)) {
        throw PreconditionError(
            "linf_feasibility_oracle: basis polynomial leaves the admissible set (direct "
            "mode requires spectrum inside the set)");
      }
    }
  }

  const int q_fine = std::min(std::max(qq + 3, kDefaultGridExp), kMaxGridExp + 2);
  GridFunction f_fine = to_grid(f, q_fine);

  std::vector<double> w_fine(f_fine.size(), 1.0);
  if (weighted) {
    double wmax = 0.0;
    for (std::size_t j = 0; j < f_fine.size(); ++j) {
      w_fine[j] = std::max(0.0, 1.0 - std::abs(f_fine[j]));
      wmax = std::max(wmax, w_fine[j]);
    }
    if (wmax <= kMeasureTol) {
      cert.note = "perturbation weight 1-|f| vanishes on the grid; f is unimodular";
      return cert;
    }
  }

  // Equality constraints (weighted mode): (w * p)^(k) = 0 at the excluded
  // frequencies, assembled on the verification grid so the aliasing floor of
  // the kinked weight stays below the residual tolerance.  Projected out
  // exactly so the LP variables are free.
  Eigen::MatrixXd basis_map = Eigen::MatrixXd::Identity(dim_c, dim_c);
  int dim = dim_c;
  if (weighted && !excluded->empty()) {
    std::vector<std::vector<Complex>> wb_hat;
    wb_hat.reserve(basis.size());
    for (int i = 0; i < nb; ++i) {
      GridFunction wb = to_grid(basis[static_cast<std::size_t>(i)], q_fine);
      for (std::size_t j = 0; j < wb.size(); ++j) wb[j] *= w_fine[j];
      wb_hat.push_back(grid_spectrum(wb));
    }
    const int ne = static_cast<int>(excluded->size());
    Eigen::MatrixXd eq(2 * ne, dim_c);
    for (int r = 0; r < ne; ++r) {
      std::int64_t k = (*excluded)[static_cast<std::size_t>(r)];
      for (int i = 0; i < nb; ++i) {
        Complex e = spectrum_at(wb_hat[static_cast<std::size_t>(i)], k);
        // c_i = x_{2i} + i x_{2i+1} multiplies e.
        eq(2 * r, 2 * i) = e.real();
        eq(2 * r, 2 * i + 1) = -e.imag();
        eq(2 * r + 1, 2 * i) = e.imag();
        eq(2 * r + 1, 2 * i + 1) = e.real();
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(eq, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double tol = std::max(1e-10 * (sigma.size() ? sigma(0) : 0.0), 1e-13);
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > tol) ++rank;
    }
    dim = dim_c - rank;
    if (dim == 0) {
      cert.note = "spectral equalities leave no free perturbation direction";
      return cert;
    }
    basis_map = Eigen::MatrixXd(dim_c, dim);
    for (int i = 0; i < dim; ++i) basis_map.col(i) = svd.matrixV().col(rank + i);
  }

  // Complex value map per sample: weighted mode constrains p itself, direct
  // mode constrains f +- g via two shifted copies handled below.
  Eigen::MatrixXcd value_map(n, dim);
  for (std::size_t j = 0; j < n; ++j) {
    for (int d = 0; d < dim; ++d) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < nb; ++i) {
        Complex c(basis_map(2 * i, d), basis_map(2 * i + 1, d));
        acc += c * bg[static_cast<std::size_t>(i)][j];
      }
      value_map(static_cast<Eigen::Index>(j), d) = acc;
    }
  }

  PolygonLp lp;
  lp.sides = options.polygon_sides;
  lp.value_map = value_map;

  const double bern = std::min(0.5, double(basis_bw) * double(basis_bw) * h * h / 2.0);
  lp.radius = weighted ? std::sqrt(1.0 - bern) : 1.0;

  // Box rows keep every master bounded.
  const double box = 4.0 * std::sqrt(static_cast<double>(dim_c));
  lp.fixed_rows = Eigen::MatrixXd::Zero(2 * dim, dim);
  lp.fixed_bounds = Eigen::VectorXd::Constant(2 * dim, box);
  for (int d = 0; d < dim; ++d) {
    lp.fixed_rows(2 * d, d) = 1.0;
    lp.fixed_rows(2 * d + 1, d) = -1.0;
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double best_sup_seen = 0.0;
  for (int objective_index = 0; objective_index < options.objectives; ++objective_index) {
    Eigen::VectorXd objective(dim);
    for (int d = 0; d < dim; ++d) objective(d) = gauss(rng);
    double norm = objective.norm();
    if (norm > 0.0) objective /= norm;

    PolygonLp::Outcome outcome;
    if (weighted) {
      outcome = lp.maximize(objective);
    } else {
      // Direct mode: polygon constraints act on f +- g; run with the vertex
      // frame aligned to f at each sample by constraining g against the
      // residual polygon slack of f.  Conservative: |g_j| <= 1 - |f_j|.
      PolygonLp direct = lp;
      direct.radius = 1.0;
      Eigen::MatrixXcd scaled = value_map;
      for (std::size_t j = 0; j < n; ++j) {
        double slack = std::max(0.0, 1.0 - std::abs(fg[j]));
        double inv = 1.0 / std::max(slack, 1e-6);
        scaled.row(static_cast<Eigen::Index>(j)) *= inv;
      }
      direct.value_map = scaled;
      outcome = direct.maximize(objective);
    }
    if (!outcome.ok) continue;

    Eigen::VectorXd coeff_vec = basis_map * outcome.y;
    TrigPoly p;
    for (int i = 0; i < nb; ++i) {
      Complex c(coeff_vec(2 * i), coeff_vec(2 * i + 1));
      if (std::abs(c) > 1e-14) {
        for (const auto& [k, bc] : basis[static_cast<std::size_t>(i)].coeffs()) {
          p.add_term(k, c * bc);
        }
      }
    }
    if (p.is_zero()) continue;

    if (weighted) {
      // Re-verify on the fine grid before believing the LP; the sup bound
      // also follows pointwise from |f| + (1-|f|)|p| with ||p|| <= 1, so pin
      // the polynomial under the certified upper bound.
      SupResult p_sup = norm_linf(p, std::min(options.grid_exp, kDefaultGridExp));
      if (p_sup.upper > 1.0) p = (1.0 / p_sup.upper) * p;
      GridFunction pv = to_grid(p, q_fine);
      GridFunction pert(q_fine);
      double pert_sup = 0.0;
      double pair_sup = 0.0;
      for (std::size_t j = 0; j < pert.size(); ++j) {
        double wj = std::max(0.0, 1.0 - std::abs(f_fine[j]));
        pert[j] = wj * pv[j];
        pert_sup = std::max(pert_sup, std::abs(pert[j]));
        pair_sup = std::max({pair_sup, std::abs(f_fine[j] + pert[j]),
                             std::abs(f_fine[j] - pert[j])});
      }
      best_sup_seen = std::max(best_sup_seen, pert_sup);
      if (pert_sup < options.witness_tol) continue;
      if (pair_sup > 1.0 + kSpectralResidualTolLinf) continue;

      double spectral_residual = 0.0;
      std::vector<Complex> pert_hat = grid_spectrum(pert);
      for (std::int64_t k : *excluded) {
        spectral_residual = std::max(spectral_residual, std::abs(spectrum_at(pert_hat, k)));
      }
      if (spectral_residual > kSpectralResidualTolLinf) continue;

      OracleWitness ow;
      ow.p = p;
      ow.weighted = true;
      ow.perturbation_sup = pert_sup;
      ow.pair_sup = pair_sup;
      ow.spectral_residual = spectral_residual;
      ow.objective_index = objective_index;
      ow.grid_exp = q_fine;
      cert.oracle_witness = ow;
      cert.verdict = Verdict::NonExtreme;
      return cert;
    }

    // Direct mode: the perturbation is the polynomial itself, so certified
    // sup norms decide; shrink toward zero when between-sample excursions
    // push the pair outside the ball.
    for (double s : {1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3}) {
      TrigPoly scaled = s * p;
      SupResult scaled_sup = norm_linf(scaled, std::min(options.grid_exp, kDefaultGridExp));
      best_sup_seen = std::max(best_sup_seen, scaled_sup.lower);
      if (scaled_sup.lower < options.witness_tol) break;
      SupResult plus = norm_linf(f + scaled, kDefaultGridExp);
      SupResult minus = norm_linf(f - scaled, kDefaultGridExp);
      if (plus.upper > 1.0 + kSpectralResidualTolLinf ||
          minus.upper > 1.0 + kSpectralResidualTolLinf) {
        continue;
      }
      OracleWitness ow;
      ow.p = scaled;
      ow.weighted = false;
      ow.perturbation_sup = scaled_sup.lower;
      ow.pair_sup = std::max(plus.upper, minus.upper);
      ow.spectral_residual = 0.0;  // exact: spectrum lives in the basis span
      ow.objective_index = objective_index;
      ow.grid_exp = kDefaultGridExp;
      cert.oracle_witness = ow;
      cert.verdict = Verdict::NonExtreme;
      return cert;
    }
  }

  cert.note = "no perturbation above tolerance over " + std::to_string(options.objectives) +
              " objectives (largest sup " + std::to_string(best_sup_seen) + ")";
  return cert;
}

}  // namespace lacuna
