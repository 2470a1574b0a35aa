#include "lacuna/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lacuna {

namespace {
constexpr double kZeroTol = 0.0;  // exact-zero drop only; cancellation handled in multiply
}

TrigPoly TrigPoly::constant(Complex c) {
  TrigPoly p;
  p.add_term(0, c);
  return p;
}

TrigPoly TrigPoly::monomial(std::int64_t freq, Complex coeff) {
  TrigPoly p;
  p.add_term(freq, coeff);
  return p;
}

TrigPoly TrigPoly::from_terms(const std::vector<std::pair<std::int64_t, Complex>>& terms) {
  TrigPoly p;
  for (const auto& [k, c] : terms) p.add_term(k, c);
  return p;
}

Complex TrigPoly::coeff(std::int64_t k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

bool TrigPoly::is_constant() const {
  return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
}

std::vector<std::int64_t> TrigPoly::spectrum() const {
  std::vector<std::int64_t> keys;
  keys.reserve(coeffs_.size());
  for (const auto& [k, c] : coeffs_) keys.push_back(k);
  return keys;
}

std::int64_t TrigPoly::min_freq() const {
  return coeffs_.empty() ? 0 : coeffs_.begin()->first;
}

std::int64_t TrigPoly::max_freq() const {
  return coeffs_.empty() ? 0 : coeffs_.rbegin()->first;
}

std::int64_t TrigPoly::bandwidth() const {
  if (coeffs_.empty()) return 0;
  return std::max(std::llabs(min_freq()), std::llabs(max_freq()));
}

bool TrigPoly::is_analytic() const { return coeffs_.empty() || min_freq() >= 0; }

bool TrigPoly::is_real_valued(double tol) const {
  for (const auto& [k, c] : coeffs_) {
    Complex mirror = coeff(-k);
    if (std::abs(c - std::conj(mirror)) > tol * (1.0 + std::abs(c))) return false;
  }
  return true;
}

Complex TrigPoly::eval_angle(double theta) const {
  Complex acc(0.0, 0.0);
  for (const auto& [k, c] : coeffs_) {
    acc += c * std::polar(1.0, static_cast<double>(k) * theta);
  }
  return acc;
}

Complex TrigPoly::eval(Complex z) const {
  Complex acc(0.0, 0.0);
  for (const auto& [k, c] : coeffs_) {
    Complex zk = (k >= 0) ? std::pow(z, static_cast<double>(k))
                          : Complex(1.0, 0.0) / std::pow(z, static_cast<double>(-k));
    acc += c * zk;
  }
  return acc;
}

double TrigPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TrigPoly& TrigPoly::add_term(std::int64_t k, Complex c) {
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) {
    if (!(c == Complex(0.0, 0.0))) coeffs_.emplace(k, c);
    return *this;
  }
  it->second += c;
  if (std::abs(it->second) <= kZeroTol) coeffs_.erase(it);
  return *this;
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out = a;
  for (const auto& [k, c] : b.coeffs()) out.add_term(k, c);
  return out;
}

TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out = a;
  for (const auto& [k, c] : b.coeffs()) out.add_term(k, -c);
  return out;
}

TrigPoly operator-(const TrigPoly& a) {
  TrigPoly out;
  for (const auto& [k, c] : a.coeffs()) out.add_term(k, -c);
  return out;
}

TrigPoly operator*(Complex s, const TrigPoly& a) {
  TrigPoly out;
  if (s == Complex(0.0, 0.0)) return out;
  for (const auto& [k, c] : a.coeffs()) out.add_term(k, s * c);
  return out;
}

TrigPoly operator*(double s, const TrigPoly& a) { return Complex(s, 0.0) * a; }

TrigPoly conjugate(const TrigPoly& a) {
  TrigPoly out;
  for (const auto& [k, c] : a.coeffs()) out.add_term(-k, std::conj(c));
  return out;
}

TrigPoly multiply(const TrigPoly& a, const TrigPoly& b, MultiplyReport* report) {
  TrigPoly out;
  double max_intermediate = 0.0;
  for (const auto& [ka, ca] : a.coeffs()) {
    for (const auto& [kb, cb] : b.coeffs()) {
      Complex term = ca * cb;
      max_intermediate = std::max(max_intermediate, std::abs(term));
      out.add_term(ka + kb, term);
    }
  }
  double threshold = kCancellationDropTol * max_intermediate;
  std::size_t dropped = 0;
  if (threshold > 0.0) {
    std::vector<std::int64_t> doomed;
    for (const auto& [k, c] : out.coeffs()) {
      if (std::abs(c) < threshold) doomed.push_back(k);
    }
    dropped = doomed.size();
    if (!doomed.empty()) {
      TrigPoly cleaned;
      for (const auto& [k, c] : out.coeffs()) {
        if (std::abs(c) >= threshold) cleaned.add_term(k, c);
      }
      out = cleaned;
    }
  }
  if (report) {
    report->dropped_terms = dropped;
    report->drop_threshold = threshold;
  }
  return out;
}

TrigPoly real_combination(const std::vector<double>& weights,
                          const std::vector<std::int64_t>& freqs) {
  if (weights.size() != freqs.size()) {
    throw PreconditionError("real_combination: weight and frequency counts differ");
  }
  std::set<std::int64_t> seen;
  for (std::int64_t k : freqs) {
    if (k < 0) throw PreconditionError("real_combination: negative frequency");
    if (!seen.insert(k).second) {
      throw PreconditionError("real_combination: duplicate frequency");
    }
  }
  TrigPoly out;
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    if (freqs[j] == 0) {
      out.add_term(0, Complex(weights[j], 0.0));
    } else {
      out.add_term(freqs[j], Complex(weights[j] / 2.0, 0.0));
      out.add_term(-freqs[j], Complex(weights[j] / 2.0, 0.0));
    }
  }
  return out;
}

}  // namespace lacuna
