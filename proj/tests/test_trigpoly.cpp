#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/expr.hpp"
#include "lacuna/grid.hpp"
#include "lacuna/norms.hpp"
#include "lacuna/trigpoly.hpp"

using namespace lacuna;

namespace {

// Independent oracle: dense convolution over full coefficient arrays.
TrigPoly dense_multiply(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out;
  for (std::int64_t ka = a.min_freq(); ka <= a.max_freq(); ++ka) {
    for (std::int64_t kb = b.min_freq(); kb <= b.max_freq(); ++kb) {
      Complex term = a.coeff(ka) * b.coeff(kb);
      if (term != Complex(0.0, 0.0)) out.add_term(ka + kb, term);
    }
  }
  return out;
}

// Independent quadrature oracle: composite Simpson on [0, 2pi].
double simpson_mean(const std::function<double(double)>& fn, int n) {
  double acc = 0.0;
  const double h = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    double a = j * h;
    acc += fn(a) + 4.0 * fn(a + h / 2.0) + fn(a + h);
  }
  return acc * h / 6.0 / (2.0 * std::numbers::pi);
}

TrigPoly random_poly(std::mt19937_64& rng, int terms, std::int64_t band) {
  std::uniform_int_distribution<std::int64_t> freq(-band, band);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TrigPoly f;
  for (int i = 0; i < terms; ++i) f.add_term(freq(rng), Complex(gauss(rng), gauss(rng)));
  return f;
}

}  // namespace

TEST_CASE("multiply matches hand expansions") {
  TrigPoly z2 = TrigPoly::monomial(2);
  TrigPoly re_z2 = real_combination({1.0}, {2});

  TrigPoly prod = multiply(z2, re_z2);  // z^2 * Re(z^2) = (z^4 + 1)/2
  CHECK(prod.spectrum() == std::vector<std::int64_t>{0, 4});
  CHECK(prod.coeff(0) == Complex(0.5, 0.0));
  CHECK(prod.coeff(4) == Complex(0.5, 0.0));

  TrigPoly f = parse_function("0.25*z + (1+2*z^3)*0.5");
  CHECK(multiply(f, TrigPoly::constant(1.0)) == f);

  TrigPoly zre = multiply(TrigPoly::monomial(1), re_z2);  // (z^3 + conj z)/2
  CHECK(zre.spectrum() == std::vector<std::int64_t>{-1, 3});
  CHECK(zre.coeff(-1) == Complex(0.5, 0.0));
  CHECK(zre.coeff(3) == Complex(0.5, 0.0));
}

TEST_CASE("multiply agrees with the dense convolution oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    TrigPoly a = random_poly(rng, 6, 12);
    TrigPoly b = random_poly(rng, 5, 9);
    TrigPoly fast = multiply(a, b);
    TrigPoly dense = dense_multiply(a, b);
    // Spectrum inclusion in the sumset.
    for (std::int64_t k : fast.spectrum()) {
      bool found = false;
      for (std::int64_t ka : a.spectrum()) {
        for (std::int64_t kb : b.spectrum()) {
          found = found || (ka + kb == k);
        }
      }
      CHECK(found);
    }
    double scale = std::max(dense.max_abs_coeff(), 1e-30);
    CHECK((fast - dense).max_abs_coeff() / scale < 1e-14);
  }
}

TEST_CASE("real_combination builds real-valued polynomials") {
  TrigPoly h = real_combination({1.0}, {5});
  CHECK(h.coeff(5) == Complex(0.5, 0.0));
  CHECK(h.coeff(-5) == Complex(0.5, 0.0));
  CHECK(h.is_real_valued());

  TrigPoly re2 = real_combination({0.0, 1.0, 0.0}, {1, 2, 3});
  CHECK(re2 == real_combination({1.0}, {2}));

  CHECK(real_combination({}, {}).is_zero());

  CHECK_THROWS_AS(real_combination({1.0}, {-1}), PreconditionError);
  CHECK_THROWS_AS(real_combination({1.0, 1.0}, {2, 2}), PreconditionError);
  CHECK_THROWS_AS(real_combination({1.0}, {1, 2}), PreconditionError);

  // Conjugate symmetry on the grid: imaginary parts at roundoff.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w;
    std::vector<std::int64_t> freqs;
    for (int j = 0; j <= 6; ++j) {
      w.push_back(gauss(rng));
      freqs.push_back(j);
    }
    TrigPoly hr = real_combination(w, freqs);
    CHECK(hr.is_real_valued());
    GridFunction g = to_grid(hr, 8);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(std::abs(g[j].imag()) < 1e-13);
    }
  }
}

TEST_CASE("grid transforms: evaluation, round trip, aliasing") {
  GridFunction g = to_grid(TrigPoly::monomial(1), 3);
  for (std::size_t j = 0; j < 8; ++j) {
    Complex expected = std::polar(1.0, 2.0 * std::numbers::pi * double(j) / 8.0);
    CHECK(std::abs(g[j] - expected) < 1e-14);
  }

  TrigPoly f = TrigPoly::from_terms({{3, Complex(0.5, 0.0)}, {-1, Complex(0.5, 0.0)}});
  TrigPoly back = from_grid(to_grid(f, 4), Band(-4, 4));
  CHECK((back - f).max_abs_coeff() < 1e-12);

  CHECK_THROWS_AS(to_grid(TrigPoly::monomial(200), 8), AliasingError);
  try {
    to_grid(TrigPoly::monomial(200), 8);
  } catch (const AliasingError& e) {
    CHECK(e.required_exp() == 9);
  }
}

TEST_CASE("from_grid recovers the mean of 1 - |(z+z^2)/2|") {
  // Closed form: the mean of |1+z|/2 is 2/pi, so the zeroth coefficient of
  // 1 - |f| is 1 - 2/pi; cross-checked by an independent Simpson quadrature.
  TrigPoly f = parse_function("(z+z^2)/2");
  GridFunction fg = to_grid(f, 16);
  GridFunction deficit(16);
  for (std::size_t j = 0; j < fg.size(); ++j) deficit[j] = 1.0 - std::abs(fg[j]);
  TrigPoly coeffs = from_grid(deficit, Band(-8, 8));

  double closed_form = 1.0 - 2.0 / std::numbers::pi;
  double oracle = simpson_mean(
      [](double theta) { return 1.0 - std::abs(std::cos(theta / 2.0)); }, 1 << 16);
  CHECK(std::abs(closed_form - oracle) < 1e-9);
  CHECK(std::abs(coeffs.coeff(0).real() - closed_form) < 1e-9);
  CHECK(std::abs(coeffs.coeff(0).imag()) < 1e-12);
}

TEST_CASE("L1 norms: monomials and 1+z") {
  for (std::int64_t k : {-3, 0, 1, 7}) {
    L1Result r = norm_l1(TrigPoly::monomial(k), 10);
    CHECK(r.certified);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
  }
  // ||1+z||_1 = 4/pi: closed form for the mean of |2 cos(theta/2)|.
  double closed_form = 4.0 / std::numbers::pi;
  double oracle =
      simpson_mean([](double theta) { return std::abs(2.0 * std::cos(theta / 2.0)); }, 1 << 16);
  CHECK(std::abs(closed_form - oracle) < 1e-9);
  L1Result r = norm_l1(parse_function("1+z"), 16);
  CHECK(r.certified);
  CHECK(std::abs(r.value - closed_form) < 1e-9);
}

TEST_CASE("sup norms: enclosure and argmax") {
  SupResult r = norm_linf(parse_function("(z+z^2)/2"), 16);
  CHECK(r.lower <= 1.0 + 1e-12);
  CHECK(r.upper >= 1.0 - 1e-12);
  CHECK(r.upper - r.lower < 1e-6);
  // Max attained at angle 0 (mod 2pi).
  double wrapped = std::abs(std::remainder(r.arg_angle, 2.0 * std::numbers::pi));
  CHECK(wrapped < 1e-6);

  SupResult mono = norm_linf(TrigPoly::monomial(5), 12);
  CHECK(mono.encloses(1.0, 1e-10));
}

TEST_CASE("Parseval consistency on random band-limited polynomials") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly f = random_poly(rng, 8, 30);
    double coeff_sum = 0.0;
    for (const auto& [k, c] : f.coeffs()) coeff_sum += std::norm(c);
    GridFunction g = to_grid(f, 10);
    double grid_mean = 0.0;
    for (const Complex& s : g.samples()) grid_mean += std::norm(s);
    grid_mean /= double(g.size());
    CHECK(std::abs(coeff_sum - grid_mean) < 1e-12 * std::max(1.0, coeff_sum));
  }
}

TEST_CASE("non-converging quadrature reports both trailing values") {
  // A zero this close to the circle stalls the trapezoid rule past the
  // certification tolerance at every supported grid.
  TrigPoly f = multiply(parse_function("z - 1.000002"), parse_function("z + 0.73"));
  try {
    norm_l1(f, 16);
    // Converging is acceptable too (the bound is input-dependent)...
  } catch (const QuadratureNotConverged& e) {
    // ...but a refusal must carry two distinct trailing quadrature values.
    CHECK(e.coarse_value() > 0.0);
    CHECK(e.fine_value() > 0.0);
    CHECK(std::abs(e.coarse_value() - e.fine_value()) > kQuadratureCertTol);
  }
}

TEST_CASE("quadrature refinement shrinks the certificate gap") {
  TrigPoly f = parse_function("1+z");  // conical zero: polynomial-rate convergence
  double prev_gap = 1e9;
  for (int q = 14; q <= 17; ++q) {
    GridFunction a = to_grid(f, q);
    GridFunction b = to_grid(f, q + 1);
    double gap = std::abs(grid_l1(a) - grid_l1(b));
    CHECK(gap < prev_gap + 1e-15);
    prev_gap = gap;
  }
}

TEST_CASE("function expression grammar corpus") {
  CHECK(parse_function("z^2") == TrigPoly::monomial(2));
  CHECK(parse_function("zbar^3") == TrigPoly::monomial(-3));
  CHECK(parse_function("z^-2") == TrigPoly::monomial(-2));

  TrigPoly p = parse_function("(pi/4)*(1+z)");
  CHECK(std::abs(p.coeff(0).real() - std::numbers::pi / 4.0) < 1e-15);
  CHECK(std::abs(p.coeff(1).real() - std::numbers::pi / 4.0) < 1e-15);

  TrigPoly q = parse_function("0.5*z + 0.25*z^2 - zbar");
  CHECK(q.coeff(1) == Complex(0.5, 0.0));
  CHECK(q.coeff(2) == Complex(0.25, 0.0));
  CHECK(q.coeff(-1) == Complex(-1.0, 0.0));

  CHECK(parse_function("(1+z)*(1-z)") == parse_function("1 - z^2"));
  CHECK(parse_function("3/4") == TrigPoly::constant(Complex(0.75, 0.0)));
  CHECK(parse_function("(1+z)^2") == parse_function("1 + 2*z + z^2"));

  CHECK_THROWS_AS(parse_function("z^"), ParseError);
  CHECK_THROWS_AS(parse_function("w"), ParseError);
  CHECK_THROWS_AS(parse_function("(1+z"), ParseError);
  CHECK_THROWS_AS(parse_function("1/(z+1)"), ParseError);
  CHECK_THROWS_AS(parse_function("1/0"), ParseError);
}

TEST_CASE("multiply drops cancellation ghosts and reports them") {
  // (1+z)(1-z) cancels the z term entirely; exact zero never stored.
  MultiplyReport report;
  TrigPoly prod = multiply(parse_function("1+z"), parse_function("1-z"), &report);
  CHECK(prod.coeff(1) == Complex(0.0, 0.0));
  CHECK(prod.term_count() == 2);

  // Near-total cancellation below the relative threshold is dropped and counted.
  TrigPoly a = TrigPoly::from_terms({{0, Complex(1.0, 0.0)}, {1, Complex(1e-16, 0.0)}});
  TrigPoly b = TrigPoly::from_terms({{0, Complex(1.0, 0.0)}});
  TrigPoly prod2 = multiply(a, b, &report);
  CHECK(report.dropped_terms == 1);
  CHECK(prod2.term_count() == 1);
}
