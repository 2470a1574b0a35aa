#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lacuna {

using Complex = std::complex<double>;

inline constexpr const char* kLibraryName = "lacuna";
inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Grid exponents q address the 2^q-point uniform grid on the circle.
inline constexpr int kMinGridExp = 8;
inline constexpr int kMaxGridExp = 20;
inline constexpr int kDefaultGridExp = 16;

// Default half-width of the enumeration band [-B, B] for spectral sets.
inline constexpr std::int64_t kDefaultBandHalfWidth = 64;

// Tolerances used across the library.  Witness constructors gate on unit
// norm, quadrature certifies by comparing adjacent grid exponents, and
// spectral residuals bound leakage outside the admissible frequency set.
inline constexpr double kNormGateTol = 1e-8;
inline constexpr double kQuadratureCertTol = 1e-10;
inline constexpr double kSpectralResidualTolL1 = 1e-9;
inline constexpr double kSpectralResidualTolLinf = 1e-8;
inline constexpr double kMeasureTol = 1e-9;
inline constexpr double kUnimodularPointTol = 1e-10;
inline constexpr double kCancellationDropTol = 1e-15;
inline constexpr double kBoundaryRootTol = 1e-8;
inline constexpr double kOracleWitnessTol = 1e-6;

// Closed integer interval [lo, hi]; empty when hi < lo.
struct Band {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  Band() = default;
  Band(std::int64_t l, std::int64_t h) : lo(l), hi(h) {}

  bool empty() const { return hi < lo; }
  std::int64_t width() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t k) const { return k >= lo && k <= hi; }

  static Band symmetric(std::int64_t half_width) {
    return Band(-half_width, half_width);
  }
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Violated operation precondition or unparseable input: CLI exit code 1.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : PreconditionError(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Bandwidth exceeds what the requested grid can represent.
class AliasingError : public PreconditionError {
 public:
  AliasingError(const std::string& what, int required_exp)
      : PreconditionError(what), required_exp_(required_exp) {}
  int required_exp() const { return required_exp_; }

 private:
  int required_exp_;
};

// Internal numerical pathology (should not happen on sane inputs): exit code 2.
class NumericalAnomaly : public Error {
 public:
  explicit NumericalAnomaly(const std::string& what) : Error(what) {}
};

class QuadratureNotConverged : public NumericalAnomaly {
 public:
  QuadratureNotConverged(const std::string& what, double coarse, double fine)
      : NumericalAnomaly(what), coarse_(coarse), fine_(fine) {}
  double coarse_value() const { return coarse_; }
  double fine_value() const { return fine_; }

 private:
  double coarse_;
  double fine_;
};

}  // namespace lacuna
