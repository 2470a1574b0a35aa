#include "lacuna/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lacuna {

namespace {

void check_grid_exp(int q) {
  if (q < 1 || q > 26) {
    throw PreconditionError("grid exponent out of range: " + std::to_string(q));
  }
}

}  // namespace

GridFunction::GridFunction(int grid_exp, Complex fill) : grid_exp_(grid_exp) {
  check_grid_exp(grid_exp);
  samples_.assign(std::size_t(1) << grid_exp, fill);
}

GridFunction GridFunction::from_samples(int grid_exp, std::vector<Complex> samples) {
  check_grid_exp(grid_exp);
  if (samples.size() != (std::size_t(1) << grid_exp)) {
    throw PreconditionError("sample count does not match grid exponent");
  }
  GridFunction g(grid_exp);
  g.samples_ = std::move(samples);
  return g;
}

double GridFunction::angle(std::size_t j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size());
}

GridFunction GridFunction::abs() const {
  GridFunction out(grid_exp_);
  for (std::size_t j = 0; j < size(); ++j) out.samples_[j] = Complex(std::abs(samples_[j]), 0.0);
  return out;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const Complex& s : samples_) m = std::max(m, std::abs(s));
  return m;
}

Complex GridFunction::mean() const {
  Complex acc(0.0, 0.0);
  for (const Complex& s : samples_) acc += s;
  return acc / static_cast<double>(size());
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (a.grid_exp() != b.grid_exp()) throw PreconditionError("grid exponents differ");
  GridFunction out(a.grid_exp());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (a.grid_exp() != b.grid_exp()) throw PreconditionError("grid exponents differ");
  GridFunction out(a.grid_exp());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  if (a.grid_exp() != b.grid_exp()) throw PreconditionError("grid exponents differ");
  GridFunction out(a.grid_exp());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
  return out;
}

GridFunction operator*(Complex s, const GridFunction& a) {
  GridFunction out(a.grid_exp());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = s * a[j];
  return out;
}

void dft_pow2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw PreconditionError("dft_pow2: length must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const Complex wlen = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        // Refresh the twiddle periodically to keep accumulated drift below ~1e-15.
        if ((j & 31u) == 0) w = std::polar(1.0, ang * static_cast<double>(j));
        Complex u = a[i + j];
        Complex t = w * a[i + j + len / 2];
        a[i + j] = u + t;
        a[i + j + len / 2] = u - t;
        w *= wlen;
      }
    }
  }
}

GridFunction to_grid(const TrigPoly& f, int grid_exp) {
  check_grid_exp(grid_exp);
  const std::int64_t n = std::int64_t(1) << grid_exp;
  const std::int64_t half = n / 2;
  if (!f.is_zero() && f.bandwidth() >= half) {
    int needed = grid_exp;
    while ((std::int64_t(1) << (needed - 1)) <= f.bandwidth()) ++needed;
    throw AliasingError("to_grid: bandwidth " + std::to_string(f.bandwidth()) +
                            " needs grid exponent >= " + std::to_string(needed),
                        needed);
  }
  std::vector<Complex> bins(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (const auto& [k, c] : f.coeffs()) {
    std::int64_t idx = ((k % n) + n) % n;
    bins[static_cast<std::size_t>(idx)] += c;
  }
  dft_pow2(bins, /*inverse=*/true);
  return GridFunction::from_samples(grid_exp, std::move(bins));
}

TrigPoly from_grid(const GridFunction& u, Band band) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  const std::int64_t half = n / 2;
  if (!band.empty() && (band.lo <= -half || band.hi >= half)) {
    throw PreconditionError("from_grid: band exceeds the aliasing limit of the grid");
  }
  std::vector<Complex> bins = u.samples();
  dft_pow2(bins, /*inverse=*/false);
  TrigPoly out;
  for (std::int64_t k = band.lo; k <= band.hi; ++k) {
    std::int64_t idx = ((k % n) + n) % n;
    out.add_term(k, bins[static_cast<std::size_t>(idx)] / static_cast<double>(n));
  }
  return out;
}

std::vector<Complex> grid_spectrum(const GridFunction& u) {
  std::vector<Complex> bins = u.samples();
  dft_pow2(bins, /*inverse=*/false);
  const double n = static_cast<double>(bins.size());
  for (Complex& c : bins) c /= n;
  return bins;
}

Complex spectrum_at(const std::vector<Complex>& spectrum, std::int64_t k) {
  const std::int64_t n = static_cast<std::int64_t>(spectrum.size());
  std::int64_t idx = ((k % n) + n) % n;
  return spectrum[static_cast<std::size_t>(idx)];
}

}  // namespace lacuna
