#include "lacuna/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "lacuna/expr.hpp"
#include "lacuna/factorization.hpp"
#include "lacuna/norms.hpp"

namespace lacuna {

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrigPoly random_sparse_in(const SpectralSet& set, Band band, int sparsity,
                          std::mt19937_64& rng) {
  std::vector<std::int64_t> pool = set.elements_in(band);
  if (static_cast<int>(pool.size()) < sparsity) {
    throw PreconditionError("random_sparse_in: set has fewer than " +
                            std::to_string(sparsity) + " frequencies in the band");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  TrigPoly f;
  for (int i = 0; i < sparsity; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::size_t at = pick(rng);
    std::int64_t k = pool[at];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    f.add_term(k, Complex(gauss(rng), gauss(rng)));
  }
  return f;
}

TrigPoly normalize_l1(const TrigPoly& f, int grid_exp) {
  L1Result norm = norm_l1(f, grid_exp);
  if (norm.value <= 0.0) throw PreconditionError("normalize_l1: zero function");
  return (1.0 / norm.value) * f;
}

TrigPoly normalize_sup(const TrigPoly& f, int grid_exp) {
  SupResult sup = norm_linf(f, grid_exp);
  if (sup.lower <= 0.0) throw PreconditionError("normalize_sup: zero function");
  return (1.0 / sup.lower) * f;
}

TrigPoly random_outer_unit_l1(int degree, std::mt19937_64& rng, int grid_exp) {
  std::uniform_real_distribution<double> radius(1.15, 2.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  TrigPoly f = TrigPoly::constant(Complex(1.0, 0.0));
  for (int i = 0; i < degree; ++i) {
    Complex root = std::polar(radius(rng), angle(rng));
    // factor (1 - z/root): no zeros inside or on the circle.
    TrigPoly factor = TrigPoly::constant(Complex(1.0, 0.0)) +
                      TrigPoly::monomial(1, Complex(-1.0, 0.0) / root);
    f = multiply(f, factor);
  }
  return normalize_l1(f, grid_exp);
}

ScanConfig ScanConfig::from_json(const nlohmann::json& j) {
  ScanConfig c;
  c.task = j.at("task").get<std::string>();
  c.set_expr = j.value("set", std::string("Z"));
  if (j.contains("function")) {
    const auto& fn = j.at("function");
    if (fn.contains("expr")) {
      c.f_expr = fn.at("expr").get<std::string>();
    } else if (fn.contains("random")) {
      c.sparsity = fn.at("random").value("sparsity", 4);
      c.band = fn.at("random").value("band", std::int64_t(24));
    }
  }
  c.seed = j.value("seed", std::uint64_t(1));
  c.reps = j.value("reps", 1);
  c.degree = j.value("degree", 8);
  c.grid_exp = j.value("grid_exp", kDefaultGridExp);
  c.polygon_sides = j.value("polygon_sides", 64);
  c.validate();
  return c;
}

nlohmann::json ScanConfig::to_json() const {
  nlohmann::json fn;
  if (f_expr) {
    fn = nlohmann::json{{"expr", *f_expr}};
  } else {
    fn = nlohmann::json{{"random", {{"sparsity", sparsity}, {"band", band}}}};
  }
  return nlohmann::json{{"task", task},       {"set", set_expr},
                        {"function", fn},     {"seed", seed},
                        {"reps", reps},       {"degree", degree},
                        {"grid_exp", grid_exp}, {"polygon_sides", polygon_sides}};
}

void ScanConfig::validate() const {
  static const std::vector<std::string> kTasks = {
      "witness-l1", "witness-linf", "classify-h1", "classify-linf",
      "log-integral", "search-l1",  "oracle"};
  if (std::find(kTasks.begin(), kTasks.end(), task) == kTasks.end()) {
    throw PreconditionError("scan config: unknown task '" + task + "'");
  }
  if (reps < 1) throw PreconditionError("scan config: reps must be >= 1");
  if (sparsity < 1) throw PreconditionError("scan config: sparsity must be >= 1");
  if (band < 1) throw PreconditionError("scan config: band must be >= 1");
  if (degree < 1) throw PreconditionError("scan config: degree must be >= 1");
  if (grid_exp < kMinGridExp || grid_exp > kMaxGridExp) {
    throw PreconditionError("scan config: grid_exp out of range");
  }
  SpectralSet::parse(set_expr);  // throws on bad descriptors
  if (f_expr) parse_function(*f_expr);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// One trial; fills everything except trial index / seed / time.
ScanRow run_trial(const ScanConfig& cfg, const SpectralSet& set, std::mt19937_64& rng) {
  ScanRow row;

  auto make_f = [&](bool l1_normalized) {
    TrigPoly f = cfg.f_expr ? parse_function(*cfg.f_expr)
                            : random_sparse_in(set, Band::symmetric(cfg.band), cfg.sparsity,
                                               rng);
    return l1_normalized ? normalize_l1(f, cfg.grid_exp) : normalize_sup(f, cfg.grid_exp);
  };

  if (cfg.task == "witness-l1") {
    TrigPoly f = make_f(true);
    L1Witness w;
    if (set.period(kDefaultBandHalfWidth)) {
      w = periodic_witness(f, set, cfg.grid_exp);
    } else if (set.finite_complement_in_z()) {
      w = cofinite_l1_witness(f, set, cfg.grid_exp);
    } else {
      auto res = general_l1_witness_search(f, set, cfg.degree, true, cfg.grid_exp);
      if (!res.witness) {
        row.verdict = "Inconclusive";
        row.detail = "search(" + std::to_string(cfg.degree) + ")";
        row.aux = res.diagnostics.nullity;
        return row;
      }
      w = *res.witness;
    }
    row.verdict = "NonExtreme";
    row.detail = w.method;
    row.residual_max = w.residual_max;
    row.norm_u = w.u_l1;
    row.norm_v = w.v_l1;
    row.aux = w.nonconstancy;
    return row;
  }
  if (cfg.task == "search-l1") {
    TrigPoly f = make_f(true);
    auto res = general_l1_witness_search(f, set, cfg.degree, true, cfg.grid_exp);
    if (res.witness) {
      row.verdict = "NonExtreme";
      row.detail = res.witness->method;
      row.residual_max = res.witness->residual_max;
      row.norm_u = res.witness->u_l1;
      row.norm_v = res.witness->v_l1;
      row.aux = res.witness->nonconstancy;
    } else {
      row.verdict = "Inconclusive";
      row.detail = "nullity=" + std::to_string(res.diagnostics.nullity);
      row.aux = res.diagnostics.rank;
    }
    return row;
  }
  if (cfg.task == "witness-linf") {
    TrigPoly f = make_f(false);
    ExtremalityCertificate cert = classify_linf_cofinite(f, set, cfg.grid_exp);
    row.verdict = to_string(cert.verdict);
    if (cert.linf_witness) {
      row.residual_max = cert.linf_witness->residual_max;
      row.norm_u = cert.linf_witness->u_sup;
      row.norm_v = cert.linf_witness->v_sup;
      row.aux = cert.linf_witness->pointwise_bound;
    }
    return row;
  }
  if (cfg.task == "classify-linf") {
    TrigPoly f = make_f(false);
    ExtremalityCertificate cert = classify_linf_cofinite(f, set, cfg.grid_exp);
    row.verdict = to_string(cert.verdict);
    if (cert.linf_witness) {
      row.residual_max = cert.linf_witness->residual_max;
      row.norm_u = cert.linf_witness->u_sup;
      row.norm_v = cert.linf_witness->v_sup;
    }
    return row;
  }
  if (cfg.task == "classify-h1") {
    // Random analytic input over the set (restricted to nonnegative band).
    TrigPoly f = cfg.f_expr
                     ? parse_function(*cfg.f_expr)
                     : random_sparse_in(set, Band(0, cfg.band), cfg.sparsity, rng);
    f = normalize_l1(f, cfg.grid_exp);
    H1Classification cls = classify_h1_extreme(f, cfg.grid_exp);
    row.verdict = cls.verdict == H1Verdict::Extreme
                      ? "Extreme"
                      : (cls.verdict == H1Verdict::NonExtreme ? "NonExtreme" : "NotUnitNorm");
    row.detail = cls.factorization.is_outer ? "outer" : "inner-factor";
    row.residual_max = cls.factorization.max_residual;
    row.norm_u = cls.l1_norm;
    row.aux = cls.factorization.blaschke_degree;
    return row;
  }
  if (cfg.task == "log-integral") {
    TrigPoly f = make_f(false);
    LogIntegralReport rep = log_integral(f, cfg.grid_exp);
    row.verdict = rep.divergent ? "divergent" : "finite";
    row.detail = rep.suspect ? "suspect" : "";
    row.norm_u = rep.divergent ? 0.0 : rep.value;
    row.aux = rep.error_estimate;
    return row;
  }
  if (cfg.task == "oracle") {
    TrigPoly f = make_f(false);
    std::vector<TrigPoly> basis;
    for (int j = 0; j <= cfg.degree; ++j) basis.push_back(TrigPoly::monomial(j));
    OracleOptions opt;
    opt.grid_exp = std::min(cfg.grid_exp, 12);
    opt.polygon_sides = cfg.polygon_sides;
    opt.seed = splitmix64(cfg.seed ^ 0x6f7261636c65ULL);
    ExtremalityCertificate cert = linf_feasibility_oracle(f, set, basis, opt);
    row.verdict = to_string(cert.verdict);
    if (cert.oracle_witness) {
      row.residual_max = cert.oracle_witness->spectral_residual;
      row.norm_u = cert.oracle_witness->pair_sup;
      row.aux = cert.oracle_witness->perturbation_sup;
    }
    return row;
  }
  throw PreconditionError("scan: unhandled task " + cfg.task);
}

}  // namespace

const char* ScanOutput::csv_header() {
  return "trial,seed,task,set,verdict,detail,residual_max,norm_u,norm_v,aux,time_ms";
}

std::string ScanOutput::csv() const {
  auto field = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  std::string out = csv_header();
  out += "\n";
  for (const ScanRow& row : rows) {
    out += std::to_string(row.trial) + "," + std::to_string(row.seed) + "," +
           field(config.task) + "," + field(config.set_expr) + "," + field(row.verdict) +
           "," + field(row.detail) + "," + fmt(row.residual_max) + "," + fmt(row.norm_u) +
           "," + fmt(row.norm_v) + "," + fmt(row.aux) + "," + fmt(row.time_ms) + "\n";
  }
  return out;
}

ScanOutput run_scan(const ScanConfig& config) {
  config.validate();
  ScanOutput out;
  out.config = config;
  SpectralSet set = SpectralSet::parse(config.set_expr);

  std::map<std::string, int> verdict_counts;
  std::vector<double> residuals;

  for (int trial = 0; trial < config.reps; ++trial) {
    std::uint64_t seed = splitmix64(config.seed + 0x7a5c9d3b1e2f4a6bULL * (trial + 1));
    std::mt19937_64 rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    ScanRow row;
    try {
      row = run_trial(config, set, rng);
    } catch (const Error& e) {
      row.verdict = "Error";
      row.detail = e.what();
      // CSV payload must stay parseable.
      std::replace(row.detail.begin(), row.detail.end(), ',', ';');
      std::replace(row.detail.begin(), row.detail.end(), '\n', ' ');
    }
    auto t1 = std::chrono::steady_clock::now();
    row.trial = trial;
    row.seed = seed;
    row.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    verdict_counts[row.verdict]++;
    residuals.push_back(row.residual_max);
    out.rows.push_back(std::move(row));
  }

  std::vector<double> sorted = residuals;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    if (sorted.empty()) return 0.0;
    double at = p * static_cast<double>(sorted.size() - 1);
    return sorted[static_cast<std::size_t>(std::llround(at))];
  };

  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [verdict, count] : verdict_counts) counts[verdict] = count;
  out.summary = nlohmann::json{
      {"schema_version", kSchemaVersion},
      {"library", {{"name", kLibraryName}, {"version", kLibraryVersion}}},
      {"config", config.to_json()},
      {"trials", config.reps},
      {"verdicts", counts},
      {"residual_quantiles",
       {{"p50", quantile(0.5)}, {"p90", quantile(0.9)}, {"max", quantile(1.0)}}},
  };
  return out;
}

}  // namespace lacuna
