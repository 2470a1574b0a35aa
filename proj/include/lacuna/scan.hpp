#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacuna/extremality.hpp"
#include "lacuna/spectra.hpp"
#include "lacuna/trigpoly.hpp"

namespace lacuna {

// Deterministic per-trial seeding.
std::uint64_t splitmix64(std::uint64_t state);

// Random sparse polynomial with frequencies drawn (without replacement) from
// the admissible set inside the band and standard-normal complex
// coefficients.  Throws when the set is too thin for the requested sparsity.
TrigPoly random_sparse_in(const SpectralSet& set, Band band, int sparsity,
                          std::mt19937_64& rng);

TrigPoly normalize_l1(const TrigPoly& f, int grid_exp = kDefaultGridExp);
TrigPoly normalize_sup(const TrigPoly& f, int grid_exp = kDefaultGridExp);

// Analytic polynomial with all roots strictly outside the closed disk,
// unit L1 norm; extreme in the classical H1 ball by construction.
TrigPoly random_outer_unit_l1(int degree, std::mt19937_64& rng,
                              int grid_exp = kDefaultGridExp);

struct ScanConfig {
  std::string task;  // witness-l1 | witness-linf | classify-h1 | classify-linf |
                     // log-integral | search-l1 | oracle
  std::string set_expr = "Z";
  std::optional<std::string> f_expr;  // explicit function; otherwise random
  int sparsity = 4;
  std::int64_t band = 24;
  std::uint64_t seed = 1;
  int reps = 1;
  int degree = 8;        // search cap / basis degree
  int grid_exp = kDefaultGridExp;
  int polygon_sides = 64;

  static ScanConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws PreconditionError
};

struct ScanRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string verdict;
  std::string detail;
  double residual_max = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
  double aux = 0.0;
  double time_ms = 0.0;  // lives in the last CSV column, outside the payload
};

struct ScanOutput {
  ScanConfig config;
  std::vector<ScanRow> rows;
  nlohmann::json summary;

  std::string csv() const;
  static const char* csv_header();
};

ScanOutput run_scan(const ScanConfig& config);

}  // namespace lacuna
