#include "lacuna/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace lacuna {

namespace {

void check_exp_range(int q) {
  if (q < kMinGridExp || q > kMaxGridExp) {
    throw PreconditionError("grid exponent must lie in [" + std::to_string(kMinGridExp) +
                            ", " + std::to_string(kMaxGridExp) + "], got " + std::to_string(q));
  }
}

// Smallest exponent whose grid resolves the bandwidth (strict Nyquist margin).
int fitting_exp(const TrigPoly& f, int q) {
  std::int64_t bw = f.bandwidth();
  while ((std::int64_t(1) << (q - 1)) <= bw) ++q;
  return q;
}

double quad_l1(const TrigPoly& f, int q) {
  GridFunction g = to_grid(f, q);
  double acc = 0.0;
  for (const Complex& s : g.samples()) acc += std::abs(s);
  return acc / static_cast<double>(g.size());
}

// Golden-section maximization of |f| on [a, b].
double golden_max(const TrigPoly& f, double a, double b, double* arg) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = std::abs(f.eval_angle(x1));
  double f2 = std::abs(f.eval_angle(x2));
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = std::abs(f.eval_angle(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = std::abs(f.eval_angle(x1));
    }
  }
  double mid = 0.5 * (a + b);
  double fm = std::abs(f.eval_angle(mid));
  if (arg) *arg = mid;
  return std::max({f1, f2, fm});
}

}  // namespace

L1Result norm_l1(const TrigPoly& f, int grid_exp) {
  check_exp_range(grid_exp);
  if (f.is_zero()) return L1Result{0.0, grid_exp, 0.0, true};
  int q = fitting_exp(f, std::min(grid_exp, kMaxGridExp - 1));
  double prev = quad_l1(f, q);
  for (int qq = q + 1; qq <= kMaxGridExp; ++qq) {
    double cur = quad_l1(f, qq);
    if (std::abs(cur - prev) <= kQuadratureCertTol) {
      return L1Result{cur, qq, prev, true};
    }
    if (qq == kMaxGridExp) {
      throw QuadratureNotConverged("norm_l1: quadrature not converged at max grid exponent",
                                   prev, cur);
    }
    prev = cur;
  }
  throw QuadratureNotConverged("norm_l1: grid exponent exhausts the supported range", prev,
                               prev);
}

SupResult norm_linf(const TrigPoly& f, int grid_exp) {
  check_exp_range(grid_exp);
  SupResult out;
  out.grid_exp = grid_exp;
  if (f.is_zero()) return out;

  int q = fitting_exp(f, grid_exp);
  // Keep n*h comfortably small so the sampling bound below is tight.
  const double bw = static_cast<double>(f.bandwidth());
  while (q < kMaxGridExp + 2 && bw * (2.0 * std::numbers::pi / std::pow(2.0, q)) > 0.25) ++q;
  out.grid_exp = q;

  GridFunction g = to_grid(f, q);
  const std::size_t n = g.size();
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);

  std::vector<double> mags(n);
  double grid_max = 0.0;
  std::size_t arg_j = 0;
  for (std::size_t j = 0; j < n; ++j) {
    mags[j] = std::abs(g[j]);
    if (mags[j] > grid_max) {
      grid_max = mags[j];
      arg_j = j;
    }
  }

  // |f|^2 is a trig polynomial of degree 2*bw; between samples the max can
  // exceed the grid max by at most the factor below.
  const double s = std::min(0.5, bw * bw * h * h / 2.0);
  out.upper = grid_max / std::sqrt(1.0 - s);

  // Candidate cells whose samples could hide the true max.
  std::vector<std::size_t> candidates;
  const double floor = grid_max * std::sqrt(1.0 - s) - 1e-300;
  for (std::size_t j = 0; j < n; ++j) {
    if (mags[j] >= floor) candidates.push_back(j);
  }
  if (candidates.size() > 16) {
    std::partial_sort(candidates.begin(), candidates.begin() + 16, candidates.end(),
                      [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
    candidates.resize(16);
  }
  double best = grid_max;
  double best_arg = g.angle(arg_j);
  for (std::size_t j : candidates) {
    double center = g.angle(j);
    double arg = center;
    double val = golden_max(f, center - h, center + h, &arg);
    if (val > best) {
      best = val;
      best_arg = arg;
    }
  }
  out.lower = best;
  out.upper = std::max(out.upper, out.lower);
  out.arg_angle = best_arg;
  return out;
}

double grid_l1(const GridFunction& u) {
  double acc = 0.0;
  for (const Complex& s : u.samples()) acc += std::abs(s);
  return acc / static_cast<double>(u.size());
}

double grid_sup(const GridFunction& u) { return u.max_abs(); }

}  // namespace lacuna
