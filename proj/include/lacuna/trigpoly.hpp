#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lacuna/common.hpp"

namespace lacuna {

// Sparse Laurent trigonometric polynomial on the unit circle:
//   f(z) = sum_k coeff(k) z^k,   z = e^{i theta},
// stored as a finite frequency -> coefficient map.  Zero coefficients are
// never stored, so the key set *is* the spectrum of f.
class TrigPoly {
 public:
  using CoeffMap = std::map<std::int64_t, Complex>;

  TrigPoly() = default;

  static TrigPoly constant(Complex c);
  static TrigPoly monomial(std::int64_t freq, Complex coeff = Complex(1.0, 0.0));
  static TrigPoly from_terms(const std::vector<std::pair<std::int64_t, Complex>>& terms);

  const CoeffMap& coeffs() const { return coeffs_; }
  Complex coeff(std::int64_t k) const;
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const;
  std::size_t term_count() const { return coeffs_.size(); }

  std::vector<std::int64_t> spectrum() const;
  std::int64_t min_freq() const;  // 0 for the zero polynomial
  std::int64_t max_freq() const;
  std::int64_t bandwidth() const;  // max |k| over the spectrum

  // Spectrum contained in {0, 1, 2, ...}.
  bool is_analytic() const;
  // coeff(-k) == conj(coeff(k)) for all k, i.e. real-valued on the circle.
  bool is_real_valued(double tol = 1e-14) const;

  Complex eval_angle(double theta) const;  // f(e^{i theta})
  Complex eval(Complex z) const;           // needs z != 0 when min_freq < 0

  double max_abs_coeff() const;

  // Builder access: accumulates into the coefficient at k, dropping exact zeros.
  TrigPoly& add_term(std::int64_t k, Complex c);

  bool operator==(const TrigPoly& other) const { return coeffs_ == other.coeffs_; }

 private:
  CoeffMap coeffs_;
};

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a);
TrigPoly operator*(Complex s, const TrigPoly& a);
TrigPoly operator*(double s, const TrigPoly& a);

// Complex conjugate on the circle: coefficient at k becomes conj(coeff(-k)).
TrigPoly conjugate(const TrigPoly& a);

struct MultiplyReport {
  std::size_t dropped_terms = 0;
  double drop_threshold = 0.0;
};

// Exact sparse convolution of coefficient maps.  Terms that cancel to below
// kCancellationDropTol of the largest intermediate product are dropped (and
// counted in the report) so roundoff ghosts cannot pollute the spectrum.
TrigPoly multiply(const TrigPoly& a, const TrigPoly& b, MultiplyReport* report = nullptr);

inline TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) { return multiply(a, b); }

// Real-valued combination sum_j w_j (z^{k_j} + conj(z)^{k_j}) / 2 over distinct
// nonnegative frequencies; frequency 0 contributes the real constant w_j.
TrigPoly real_combination(const std::vector<double>& weights,
                          const std::vector<std::int64_t>& freqs);

}  // namespace lacuna
