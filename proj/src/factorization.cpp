#include "lacuna/factorization.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lacuna/grid.hpp"

namespace lacuna {

namespace {

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& c, Complex x) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 1;) {
    acc = acc * x + static_cast<double>(i) * c[i];
  }
  return acc;
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  if (coeffs.size() < 2) throw PreconditionError("polynomial_roots: degree must be >= 1");
  if (std::abs(coeffs.back()) == 0.0) {
    throw PreconditionError("polynomial_roots: leading coefficient is zero");
  }
  const std::size_t d = coeffs.size() - 1;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) companion(i + 1, i) = Complex(1.0, 0.0);
  for (std::size_t i = 0; i < d; ++i) companion(i, d - 1) = -coeffs[i] / coeffs.back();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalAnomaly("polynomial_roots: eigenvalue iteration failed");
  }

  std::vector<Complex> roots(d);
  for (std::size_t i = 0; i < d; ++i) {
    Complex r = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    // Newton polishing; keep the raw eigenvalue if the step misbehaves.
    Complex best = r;
    double best_val = std::abs(horner(coeffs, r));
    for (int it = 0; it < 8; ++it) {
      Complex dp = horner_derivative(coeffs, r);
      if (std::abs(dp) < 1e-300) break;
      Complex step = horner(coeffs, r) / dp;
      if (std::abs(step) > 0.5 * (1.0 + std::abs(r))) break;
      r -= step;
      double val = std::abs(horner(coeffs, r));
      if (val < best_val) {
        best_val = val;
        best = r;
      }
      if (val == 0.0) break;
    }
    roots[i] = best;
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

FactorizationReport factorize(const TrigPoly& f) {
  if (f.is_zero()) throw PreconditionError("factorize: zero polynomial");
  if (!f.is_analytic()) {
    throw PreconditionError("factorize: spectrum must lie in the nonnegative integers");
  }

  FactorizationReport report;
  const std::int64_t deg = f.max_freq();
  report.degree = static_cast<int>(deg);

  std::vector<Complex> coeffs(static_cast<std::size_t>(deg) + 1, Complex(0.0, 0.0));
  for (const auto& [k, c] : f.coeffs()) coeffs[static_cast<std::size_t>(k)] = c;

  // Zeros at the origin are exact: strip leading zero coefficients.
  std::size_t origin_mult = 0;
  while (origin_mult < coeffs.size() && std::abs(coeffs[origin_mult]) == 0.0) ++origin_mult;
  std::vector<Complex> reduced(coeffs.begin() + static_cast<std::ptrdiff_t>(origin_mult),
                               coeffs.end());

  std::vector<Complex> roots;
  if (reduced.size() >= 2) roots = polynomial_roots(reduced);

  const double scale = f.max_abs_coeff();

  // Cluster nearby roots into multiplicities.
  std::vector<RootCluster> clusters;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(roots[j] - roots[i]) <= 1e-7 * (1.0 + std::abs(roots[i]))) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    RootCluster cl;
    cl.location = sum / static_cast<double>(count);
    cl.multiplicity = count;
    double denom = scale * std::pow(std::max(1.0, std::abs(cl.location)),
                                    static_cast<double>(reduced.size() - 1));
    cl.residual = std::abs(horner(reduced, cl.location)) / denom;
    clusters.push_back(cl);
  }
  if (origin_mult > 0) {
    RootCluster cl;
    cl.location = Complex(0.0, 0.0);
    cl.multiplicity = static_cast<int>(origin_mult);
    cl.residual = 0.0;
    clusters.push_back(cl);
  }

  for (const RootCluster& cl : clusters) {
    report.max_residual = std::max(report.max_residual, cl.residual);
    double mod = std::abs(cl.location);
    if (std::abs(mod - 1.0) <= report.boundary_tol) {
      report.roots_on_boundary.push_back(cl);
    } else if (mod < 1.0) {
      report.roots_inside.push_back(cl);
      report.blaschke_degree += cl.multiplicity;
    } else {
      report.roots_outside.push_back(cl);
    }
  }
  report.is_outer = report.roots_inside.empty();
  if (report.max_residual > 1e-10) {
    report.ill_conditioned = true;
    report.note = "root cluster residual exceeds 1e-10; classification is reported with "
                  "residual bounds";
  }
  return report;
}

H1Classification classify_h1_extreme(const TrigPoly& f, int grid_exp) {
  H1Classification out{H1Verdict::NonExtreme, 0.0, factorize(f)};
  out.l1_norm = norm_l1(f, grid_exp).value;
  if (std::abs(out.l1_norm - 1.0) > kNormGateTol) {
    out.verdict = H1Verdict::NotUnitNorm;
  } else if (out.factorization.is_outer) {
    out.verdict = H1Verdict::Extreme;
  } else {
    out.verdict = H1Verdict::NonExtreme;
  }
  return out;
}

// ---------------------------------------------------------------------------
// log integral of 1 - |f|
// ---------------------------------------------------------------------------

namespace {

struct Run {
  std::size_t begin = 0;  // first index of a circular run of flagged samples
  std::size_t length = 0;
};

std::vector<Run> circular_runs(const std::vector<bool>& flag) {
  const std::size_t n = flag.size();
  std::vector<Run> runs;
  std::size_t start = 0;
  while (start < n && flag[start]) ++start;
  if (start == n) return {{0, n}};
  for (std::size_t step = 0; step < n;) {
    std::size_t j = (start + step) % n;
    if (!flag[j]) {
      ++step;
      continue;
    }
    Run r;
    r.begin = j;
    while (step < n && flag[(start + step) % n]) {
      ++step;
      ++r.length;
    }
    runs.push_back(r);
  }
  return runs;
}

double deficit_at(const TrigPoly& f, double theta) {
  return std::max(0.0, 1.0 - std::abs(f.eval_angle(theta)));
}

double golden_min_deficit(const TrigPoly& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = deficit_at(f, x1);
  double f2 = deficit_at(f, x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = deficit_at(f, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = deficit_at(f, x1);
    }
  }
  return 0.5 * (a + b);
}

double log_2sin_half(double t) {
  double s = std::abs(2.0 * std::sin(0.5 * t));
  return std::log(std::max(s, 1e-300));
}

struct SingularPoint {
  double angle = 0.0;
  double raw_order = 0.0;
  int order = 0;
  int probe_tmin = 6;    // largest usable dyadic probe radius is 2^-probe_tmin
  bool arc = false;      // deficit below tolerance on a whole neighborhood
  bool suspect = false;  // no usable power law
};

LogIntegralReport log_integral_at(const TrigPoly& f, int q) {
  LogIntegralReport report;
  GridFunction g = to_grid(f, q);
  const std::size_t n = g.size();
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);

  std::vector<double> deficit(n);
  std::vector<bool> near(n, false);
  std::size_t near_count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    deficit[j] = std::max(0.0, 1.0 - std::abs(g[j]));
    near[j] = deficit[j] <= kUnimodularPointTol;
    if (near[j]) ++near_count;
  }

  if (near_count == 0) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::log(deficit[j]);
    report.value = acc / static_cast<double>(n);
    return report;
  }
  if (near_count == n) {
    report.divergent = true;
    report.unimodular_arcs.push_back({0.0, 2.0 * std::numbers::pi});
    report.note = "1-|f| below tolerance on the whole circle";
    return report;
  }

  // Locate every zero first so the probe radii can stay clear of neighbors.
  std::vector<Run> runs = circular_runs(near);
  std::vector<double> zero_angles;
  for (const Run& run : runs) {
    double a = g.angle(run.begin) - h;
    double b = a + static_cast<double>(run.length + 1) * h;
    zero_angles.push_back(golden_min_deficit(f, a, b));
  }
  auto neighbor_gap = [&](std::size_t self) {
    double best = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < zero_angles.size(); ++i) {
      if (i == self) continue;
      double d = std::abs(std::remainder(zero_angles[i] - zero_angles[self],
                                         2.0 * std::numbers::pi));
      best = std::min(best, d);
    }
    return best;
  };

  std::vector<SingularPoint> points;
  for (std::size_t run_index = 0; run_index < runs.size(); ++run_index) {
    const Run& run = runs[run_index];
    SingularPoint sp;
    sp.angle = zero_angles[run_index];

    // Dyadic probe radii: the core range plus larger radii when flat zeros
    // leave too few samples above the tolerance, capped away from neighbors.
    int t_min = 6;
    const double gap = neighbor_gap(run_index);
    while (t_min > 3 && std::pow(2.0, -(t_min - 1)) < 0.25 * gap &&
           deficit_at(f, sp.angle + std::pow(2.0, -t_min)) <= 1e2 * kUnimodularPointTol) {
      --t_min;
    }
    sp.probe_tmin = t_min;
    std::vector<double> log_r, log_y;
    double probe_max = 0.0;
    for (int t = t_min; t <= 12; ++t) {
      double r = std::pow(2.0, -t);
      for (double side : {+1.0, -1.0}) {
        double y = deficit_at(f, sp.angle + side * r);
        probe_max = std::max(probe_max, y);
        if (y > kUnimodularPointTol) {
          log_r.push_back(std::log(r));
          log_y.push_back(std::log(y));
        }
      }
    }
    if (probe_max <= kUnimodularPointTol) {
      sp.arc = true;
      double start = g.angle(run.begin);
      report.unimodular_arcs.push_back(
          {start, start + static_cast<double>(run.length - 1) * h});
      points.push_back(sp);
      continue;
    }
    if (log_r.size() < 6) {
      sp.suspect = true;
      points.push_back(sp);
      continue;
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
      mx += log_r[i];
      my += log_y[i];
    }
    mx /= static_cast<double>(log_r.size());
    my /= static_cast<double>(log_r.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
      sxx += (log_r[i] - mx) * (log_r[i] - mx);
      sxy += (log_r[i] - mx) * (log_y[i] - my);
    }
    sp.raw_order = sxy / sxx;
    double rms = 0.0;
    for (std::size_t i = 0; i < log_r.size(); ++i) {
      double pred = my + sp.raw_order * (log_r[i] - mx);
      rms += (log_y[i] - pred) * (log_y[i] - pred);
    }
    rms = std::sqrt(rms / static_cast<double>(log_r.size()));

    if (sp.raw_order >= 20.0 || sp.raw_order < 0.5 || rms > 0.25) {
      sp.suspect = true;
    } else {
      double even = 2.0 * std::round(sp.raw_order / 2.0);
      double nearest = std::round(sp.raw_order);
      if (even >= 2.0 && std::abs(sp.raw_order - even) <= 0.4) {
        sp.order = static_cast<int>(even);
      } else if (nearest >= 1.0 && std::abs(sp.raw_order - nearest) <= 0.25) {
        sp.order = static_cast<int>(nearest);
      } else {
        sp.suspect = true;
      }
    }
    report.vanishing_points.push_back({sp.angle, sp.raw_order});
    points.push_back(sp);
  }

  for (const SingularPoint& sp : points) {
    if (sp.arc) report.divergent = true;
    if (sp.suspect) {
      report.divergent = true;
      report.suspect = true;
      report.note = "vanishing order too high or not a power law; divergent-suspect";
    }
  }
  if (report.divergent) return report;

  // Subtract sum_i ord_i log|2 sin((t - t_i)/2)|, whose mean over the circle
  // is exactly zero; the remainder is regular enough for the periodic
  // trapezoid rule.
  auto kernel_sum = [&](double theta) {
    double acc = 0.0;
    for (const SingularPoint& sp : points) {
      acc += static_cast<double>(sp.order) * log_2sin_half(theta - sp.angle);
    }
    return acc;
  };

  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double theta = g.angle(j);
    double rj;
    if (!near[j]) {
      rj = std::log(deficit[j]) - kernel_sum(theta);
    } else {
      // Remainder value at a singular sample: average the probe estimates
      // around the owning zero.
      const SingularPoint* owner = &points.front();
      double best = 1e300;
      for (const SingularPoint& sp : points) {
        double d = std::abs(std::remainder(theta - sp.angle, 2.0 * std::numbers::pi));
        if (d < best) {
          best = d;
          owner = &sp;
        }
      }
      double est = 0.0;
      int cnt = 0;
      for (int t = owner->probe_tmin; t <= 12; ++t) {
        double r = std::pow(2.0, -t);
        for (double side : {+1.0, -1.0}) {
          double y = deficit_at(f, owner->angle + side * r);
          if (y > kUnimodularPointTol) {
            est += std::log(y) - kernel_sum(owner->angle + side * r);
            ++cnt;
          }
        }
      }
      rj = (cnt > 0) ? est / cnt : 0.0;
    }
    acc += rj;
  }
  report.value = acc / static_cast<double>(n);
  return report;
}

}  // namespace

LogIntegralReport log_integral(const TrigPoly& f, int grid_exp) {
  if (grid_exp < kMinGridExp || grid_exp > kMaxGridExp) {
    throw PreconditionError("log_integral: grid exponent out of range");
  }
  SupResult sup = norm_linf(f, std::min(grid_exp, kDefaultGridExp));
  if (sup.lower > 1.0 + kNormGateTol) {
    throw PreconditionError("log_integral: sup norm exceeds 1 beyond tolerance");
  }
  LogIntegralReport fine = log_integral_at(f, grid_exp);
  if (fine.divergent) return fine;
  LogIntegralReport coarse = log_integral_at(f, grid_exp - 1);
  fine.error_estimate = coarse.divergent ? 0.0 : std::abs(fine.value - coarse.value);
  return fine;
}

HinfClassification classify_hinf_extreme(const TrigPoly& f, const SpectralSet& set,
                                         int grid_exp) {
  if (!set.subset_of_nonnegative()) {
    throw PreconditionError(
        "classify_hinf_extreme: criterion not established for this set (not within Zplus)");
  }
  std::string scope;
  if (set.finite_complement_in_zplus()) {
    scope = "Zplus minus a finite set";
  } else if (set.is_even_nonnegative()) {
    scope = "even nonnegative integers";
  } else {
    throw PreconditionError(
        "classify_hinf_extreme: criterion not established for this set (gap set neither "
        "finite nor the even-integers case)");
  }
  for (const auto& [k, c] : f.coeffs()) {
    if (!set.contains(k)) {
      throw PreconditionError("classify_hinf_extreme: spectrum leaves the admissible set");
    }
  }
  HinfClassification out{HinfVerdict::NonExtreme, scope, norm_linf(f, grid_exp), {}};
  if (!out.sup_norm.encloses(1.0, kNormGateTol)) {
    out.log_report.note = "sup norm differs from 1; not extreme";
    return out;
  }
  out.log_report = log_integral(f, grid_exp);
  out.verdict = out.log_report.divergent ? HinfVerdict::Extreme : HinfVerdict::NonExtreme;
  return out;
}

}  // namespace lacuna
