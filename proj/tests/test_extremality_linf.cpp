#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "lacuna/expr.hpp"
#include "lacuna/extremality.hpp"
#include "lacuna/scan.hpp"

using namespace lacuna;

namespace {

double simpson_mean(const std::function<Complex(double)>& fn, int n, Complex* out) {
  Complex acc(0.0, 0.0);
  const double h = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < n; ++j) {
    double a = j * h;
    acc += fn(a) + 4.0 * fn(a + h / 2.0) + fn(a + h);
  }
  *out = acc * h / 6.0 / (2.0 * std::numbers::pi);
  return std::abs(*out);
}

void check_linf_witness_sound(const TrigPoly& f, const LinfWitness& w) {
  CHECK(w.u_sup <= 1.0 + kSpectralResidualTolLinf);
  CHECK(w.v_sup <= 1.0 + kSpectralResidualTolLinf);
  CHECK(w.pointwise_bound <= 1.0 + 1e-9);
  CHECK(w.residual_max <= kSpectralResidualTolLinf);
  CHECK(w.p_sup_upper <= 1.0 + 1e-9);
  // u - v = 2 g p is nonzero and u + v = 2 f on the grid.
  GridFunction fg = to_grid(f, w.grid_exp);
  double pair_gap = 0.0;
  double diff = 0.0;
  for (std::size_t j = 0; j < fg.size(); ++j) {
    pair_gap = std::max(pair_gap, std::abs(w.u[j] + w.v[j] - 2.0 * fg[j]));
    diff = std::max(diff, std::abs(w.u[j] - w.v[j]));
  }
  CHECK(pair_gap < 1e-12);
  CHECK(diff > 1e-10);
}

}  // namespace

TEST_CASE("annihilator coefficients match the closed forms for (z+z^2)/2") {
  // g = 1 - |cos(theta/2)| has mean 1 - 2/pi and first moment -2/(3 pi).
  Complex g0, g1;
  simpson_mean([](double t) { return Complex(1.0 - std::abs(std::cos(t / 2.0)), 0.0); },
               1 << 16, &g0);
  simpson_mean(
      [](double t) {
        return Complex(1.0 - std::abs(std::cos(t / 2.0)), 0.0) * std::polar(1.0, t);
      },
      1 << 16, &g1);
  CHECK(std::abs(g0.real() - (1.0 - 2.0 / std::numbers::pi)) < 1e-10);
  CHECK(std::abs(g1.real() - (-2.0 / (3.0 * std::numbers::pi))) < 1e-10);

  TrigPoly f = parse_function("(z+z^2)/2");
  GridFunction fg = to_grid(f, 16);
  GridFunction deficit(16);
  for (std::size_t j = 0; j < fg.size(); ++j) {
    deficit[j] = Complex(1.0 - std::abs(fg[j]), 0.0);
  }
  auto hat = grid_spectrum(deficit);
  CHECK(std::abs(spectrum_at(hat, 0) - g0) < 1e-9);
  CHECK(std::abs(spectrum_at(hat, -1) - g1) < 1e-9);

  SpectralSet set = SpectralSet::cofinite_z({0});
  LinfWitness w = cofinite_linf_witness(f, set);
  // Null vector of [g^(0), g^(-1)] up to phase: ratio beta_1/beta_0 = g^(0)/(2/(3 pi)).
  Complex ratio = w.p.coeff(1) / w.p.coeff(0);
  double expect = (1.0 - 2.0 / std::numbers::pi) / (2.0 / (3.0 * std::numbers::pi));
  CHECK(std::abs(ratio - Complex(expect, 0.0)) < 1e-7);
  CHECK(w.residual_max <= 1e-10);
  check_linf_witness_sound(f, w);
}

TEST_CASE("unimodular inputs are refused by the witness constructor") {
  CHECK_THROWS_AS(cofinite_linf_witness(TrigPoly::monomial(1), SpectralSet::cofinite_z({0})),
                  PreconditionError);
}

TEST_CASE("two excluded frequencies") {
  TrigPoly f = parse_function("(z+z^3)/2");
  SpectralSet set = SpectralSet::cofinite_z({0, 2});
  LinfWitness w = cofinite_linf_witness(f, set);
  CHECK(w.p.max_freq() <= 2);
  check_linf_witness_sound(f, w);
}

TEST_CASE("classify_linf_cofinite") {
  SpectralSet set = SpectralSet::cofinite_z({0});

  ExtremalityCertificate uni = classify_linf_cofinite(TrigPoly::monomial(5), set);
  CHECK(uni.verdict == Verdict::ExtremeByUnimodular);

  ExtremalityCertificate non = classify_linf_cofinite(parse_function("(z+z^2)/2"), set);
  CHECK(non.verdict == Verdict::NonExtreme);
  REQUIRE(non.linf_witness.has_value());
  check_linf_witness_sound(parse_function("(z+z^2)/2"), *non.linf_witness);

  // Real-valued f with nonconstant modulus.
  TrigPoly cosine = normalize_sup(real_combination({1.0}, {1}));
  ExtremalityCertificate realv = classify_linf_cofinite(cosine, set);
  CHECK(realv.verdict == Verdict::NonExtreme);

  CHECK_THROWS_AS(classify_linf_cofinite(TrigPoly::monomial(1), SpectralSet::nonnegative()),
                  PreconditionError);
}

TEST_CASE("D-set certificate") {
  SpectralSet lac = SpectralSet::parse("negpow(2)+Zplus");

  ExtremalityCertificate full = dset_extreme_certificate(TrigPoly::monomial(1), lac);
  CHECK(full.verdict == Verdict::ExtremeByDSet);
  CHECK(full.measure_low == doctest::Approx(1.0));

  ExtremalityCertificate point = dset_extreme_certificate(parse_function("(1+z)/2"), lac);
  CHECK(point.verdict == Verdict::Inconclusive);
  CHECK(point.measure_low == 0.0);

  CHECK_THROWS_AS(dset_extreme_certificate(TrigPoly::monomial(1), SpectralSet::integers()),
                  PreconditionError);
}

TEST_CASE("D-set certificate accepts declared-band grid functions") {
  SpectralSet lac = SpectralSet::parse("negpow(2)+Zplus");
  GridFunction samples = to_grid(TrigPoly::monomial(1), 10);
  ExtremalityCertificate cert = dset_extreme_certificate(samples, lac, Band(-16, 16));
  CHECK(cert.verdict == Verdict::ExtremeByDSet);
  CHECK(cert.measure_low == doctest::Approx(1.0));

  // Spectral leakage at an excluded frequency is refused.
  GridFunction leaky = to_grid(parse_function("z + 0.001*zbar^3"), 10);
  for (std::size_t j = 0; j < leaky.size(); ++j) {
    leaky[j] /= std::abs(leaky[j]);  // renormalize pointwise to unimodular
  }
  CHECK_THROWS_AS(dset_extreme_certificate(leaky, lac, Band(-16, 16)), PreconditionError);
}

TEST_CASE("parallelogram bound") {
  // f = z forces g = 0.
  GridFunction f = to_grid(TrigPoly::monomial(1), 8);
  GridFunction zero(8);
  ParallelogramReport trivial = parallelogram_bound(f, zero);
  CHECK(trivial.hypothesis_ok);
  CHECK(trivial.bound_holds);
  CHECK(trivial.max_violation <= 1e-12);

  // f = (1+z)/2, g = (1-z)/2: |f+g| = 1 and |f-g| = |z| = 1 pointwise.
  GridFunction f2 = to_grid(parse_function("(1+z)/2"), 8);
  GridFunction g2 = to_grid(parse_function("(1-z)/2"), 8);
  ParallelogramReport tight = parallelogram_bound(f2, g2);
  CHECK(tight.hypothesis_ok);
  CHECK(tight.bound_holds);

  // Hypothesis violation is flagged and the bound is not asserted.
  GridFunction big = to_grid(parse_function("2*z"), 8);
  ParallelogramReport bad = parallelogram_bound(f2, big);
  CHECK_FALSE(bad.hypothesis_ok);

  CHECK_THROWS_AS(parallelogram_bound(f2, to_grid(TrigPoly::monomial(1), 9)),
                  PreconditionError);
}

TEST_CASE("parallelogram bound on random midpoint pairs") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u(8), v(8);
    for (std::size_t j = 0; j < u.size(); ++j) {
      u[j] = std::polar(unit(rng), angle(rng));
      v[j] = std::polar(unit(rng), angle(rng));
    }
    GridFunction f(8), g(8);
    for (std::size_t j = 0; j < u.size(); ++j) {
      f[j] = 0.5 * (u[j] + v[j]);
      g[j] = 0.5 * (u[j] - v[j]);
    }
    ParallelogramReport rep = parallelogram_bound(f, g);
    CHECK(rep.hypothesis_ok);
    CHECK(rep.bound_holds);
    CHECK(rep.max_violation <= 1e-12);
  }
}

TEST_CASE("feasibility oracle agrees with the annihilator construction") {
  TrigPoly f = parse_function("(z+z^2)/2");
  SpectralSet set = SpectralSet::cofinite_z({0});
  std::vector<TrigPoly> basis = {TrigPoly::monomial(0), TrigPoly::monomial(1)};
  OracleOptions opt;
  opt.grid_exp = 10;
  opt.seed = 5;
  ExtremalityCertificate cert = linf_feasibility_oracle(f, set, basis, opt);
  CHECK(cert.verdict == Verdict::NonExtreme);
  REQUIRE(cert.oracle_witness.has_value());
  CHECK(cert.oracle_witness->perturbation_sup >= kOracleWitnessTol);
  CHECK(cert.oracle_witness->pair_sup <= 1.0 + kSpectralResidualTolLinf);
  CHECK(cert.oracle_witness->spectral_residual <= kSpectralResidualTolLinf);
}

TEST_CASE("feasibility oracle is inconclusive on unimodular f") {
  for (int degree : {1, 3}) {
    std::vector<TrigPoly> basis;
    for (int j = 0; j <= degree; ++j) basis.push_back(TrigPoly::monomial(j));
    OracleOptions opt;
    opt.grid_exp = 10;
    ExtremalityCertificate cert =
        linf_feasibility_oracle(TrigPoly::monomial(1), SpectralSet::cofinite_z({0}), basis, opt);
    CHECK(cert.verdict == Verdict::Inconclusive);
  }
}

TEST_CASE("feasibility oracle rejects an empty basis") {
  CHECK_THROWS_AS(linf_feasibility_oracle(TrigPoly::monomial(1), SpectralSet::integers(), {},
                                          OracleOptions{}),
                  PreconditionError);
}

TEST_CASE("feasibility oracle, direct mode over analytic perturbations") {
  // Non-cofinite set: perturbations are the basis polynomials themselves.
  TrigPoly f = parse_function("(1+z)/2");
  std::vector<TrigPoly> basis;
  for (int j = 0; j <= 4; ++j) basis.push_back(TrigPoly::monomial(j));
  OracleOptions opt;
  opt.grid_exp = 10;
  opt.objectives = 8;
  ExtremalityCertificate cert =
      linf_feasibility_oracle(f, SpectralSet::nonnegative(), basis, opt);
  // Either outcome must be sound; a witness must re-verify.
  if (cert.verdict == Verdict::NonExtreme) {
    REQUIRE(cert.oracle_witness.has_value());
    CHECK_FALSE(cert.oracle_witness->weighted);
    TrigPoly u = f + cert.oracle_witness->p;
    TrigPoly v = f - cert.oracle_witness->p;
    CHECK(norm_linf(u).upper <= 1.0 + kSpectralResidualTolLinf);
    CHECK(norm_linf(v).upper <= 1.0 + kSpectralResidualTolLinf);
  } else {
    CHECK(cert.verdict == Verdict::Inconclusive);
  }
  // Basis leaving the set is refused in direct mode.
  CHECK_THROWS_AS(linf_feasibility_oracle(f, SpectralSet::nonnegative(),
                                          {TrigPoly::monomial(-1)}, opt),
                  PreconditionError);
}
