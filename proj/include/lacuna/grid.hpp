#pragma once

#include <cstdint>
#include <vector>

#include "lacuna/common.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Samples of a function at the 2^q dyadic grid points e^{2 pi i j / 2^q}.
// The numerical carrier for everything that is not band-limited: |f|, 1-|f|,
// quadrature weights, pointwise products.
class GridFunction {
 public:
  GridFunction() : GridFunction(1) {}
  explicit GridFunction(int grid_exp, Complex fill = Complex(0.0, 0.0));
  static GridFunction from_samples(int grid_exp, std::vector<Complex> samples);

  int grid_exp() const { return grid_exp_; }
  std::size_t size() const { return samples_.size(); }
  double angle(std::size_t j) const;

  const std::vector<Complex>& samples() const { return samples_; }
  Complex& operator[](std::size_t j) { return samples_[j]; }
  const Complex& operator[](std::size_t j) const { return samples_[j]; }

  GridFunction abs() const;  // pointwise modulus, real-valued samples
  double max_abs() const;
  Complex mean() const;  // trapezoid rule == plain average on the periodic grid

 private:
  int grid_exp_;
  std::vector<Complex> samples_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const GridFunction& a, const GridFunction& b);  // pointwise
GridFunction operator*(Complex s, const GridFunction& a);

// In-place power-of-two DFT; forward uses exponent e^{-2 pi i jk/n}.
// Inverse is unnormalized (no 1/n factor).
void dft_pow2(std::vector<Complex>& a, bool inverse);

// Evaluate f at all 2^q grid points.  Requires bandwidth(f) < 2^{q-1};
// otherwise throws AliasingError carrying the smallest admissible q.
GridFunction to_grid(const TrigPoly& f, int grid_exp);

// Fourier coefficients of the sampled function for frequencies in `band`
// (each |k| must stay below 2^{q-1}).  Exact for band-limited input.
TrigPoly from_grid(const GridFunction& u, Band band);

// All 2^q discrete Fourier coefficients of the samples, index wrapped mod 2^q.
std::vector<Complex> grid_spectrum(const GridFunction& u);
Complex spectrum_at(const std::vector<Complex>& spectrum, std::int64_t k);

}  // namespace lacuna
