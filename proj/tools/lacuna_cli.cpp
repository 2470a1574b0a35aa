// Command-line driver: one subcommand per library operation, JSON reports on
// stdout or --out, CSV rows for scans.  Exit codes: 0 verdict produced
// (including Inconclusive), 1 precondition or parse refusal, 2 numerical
// anomaly.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "lacuna/expr.hpp"
#include "lacuna/factorization.hpp"
#include "lacuna/report.hpp"
#include "lacuna/scan.hpp"
#include "lacuna/toeplitz.hpp"

namespace {

using lacuna::Json;

struct CommonArgs {
  std::string set_expr = "Z";
  std::string f_expr;
  std::string phi_expr;
  int grid_exp = lacuna::kDefaultGridExp;
  int cap = 5;
  int degree = 8;
  std::uint64_t seed = 1;
  int reps = 8;
  std::string out_path;
  bool no_normalize = false;
};

void emit(const Json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream file(out_path);
    if (!file) throw lacuna::PreconditionError("cannot open output file " + out_path);
    file << report.dump(2) << "\n";
  }
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

Json config_echo(const CommonArgs& args, const lacuna::TrigPoly& f_normalized) {
  return Json{{"set", args.set_expr},
              {"f", args.f_expr},
              {"grid_exp", args.grid_exp},
              {"normalized", !args.no_normalize},
              {"f_normalized", lacuna::trigpoly_to_json(f_normalized)}};
}

int run_witness_l1(const CommonArgs& args, const std::string& method) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_l1(f, args.grid_exp);

  lacuna::ExtremalityCertificate cert;
  cert.space_p = "1";
  cert.set_descriptor = set.to_string();
  if (method == "periodic" || (method == "auto" && set.period(lacuna::kDefaultBandHalfWidth))) {
    cert.l1_witness = lacuna::periodic_witness(f, set, args.grid_exp);
    cert.verdict = lacuna::Verdict::NonExtreme;
  } else if (method == "cofinite" || (method == "auto" && set.finite_complement_in_z())) {
    cert.l1_witness = lacuna::cofinite_l1_witness(f, set, args.grid_exp);
    cert.verdict = lacuna::Verdict::NonExtreme;
  } else {
    auto res = lacuna::general_l1_witness_search(f, set, args.degree, true, args.grid_exp);
    cert = res.certificate(set);
  }
  Json result = lacuna::to_json(cert);
  emit(lacuna::make_report("witness-l1", config_echo(args, f), result, ms_since(t0)),
       args.out_path);
  return 0;
}

int run_witness_linf(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_sup(f, args.grid_exp);
  lacuna::ExtremalityCertificate cert;
  cert.space_p = "inf";
  cert.set_descriptor = set.to_string();
  cert.linf_witness = lacuna::cofinite_linf_witness(f, set, args.grid_exp);
  cert.verdict = lacuna::Verdict::NonExtreme;
  emit(lacuna::make_report("witness-linf", config_echo(args, f), lacuna::to_json(cert),
                           ms_since(t0)),
       args.out_path);
  return 0;
}

int run_classify_h1(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  lacuna::H1Classification cls = lacuna::classify_h1_extreme(f, args.grid_exp);
  Json cfg{{"f", args.f_expr},
           {"grid_exp", args.grid_exp},
           {"f_normalized", lacuna::trigpoly_to_json(f)}};
  emit(lacuna::make_report("classify-h1", cfg, lacuna::to_json(cls), ms_since(t0)),
       args.out_path);
  return 0;
}

int run_classify_hinf(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_sup(f, args.grid_exp);
  lacuna::HinfClassification cls = lacuna::classify_hinf_extreme(f, set, args.grid_exp);
  emit(lacuna::make_report("classify-hinf", config_echo(args, f), lacuna::to_json(cls),
                           ms_since(t0)),
       args.out_path);
  return 0;
}

int run_classify_linf(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_sup(f, args.grid_exp);
  lacuna::ExtremalityCertificate cert = lacuna::classify_linf_cofinite(f, set, args.grid_exp);
  emit(lacuna::make_report("classify-linf", config_echo(args, f), lacuna::to_json(cert),
                           ms_since(t0)),
       args.out_path);
  return 0;
}

int run_dset_check(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_sup(f, args.grid_exp);
  lacuna::ExtremalityCertificate cert = lacuna::dset_extreme_certificate(f, set, args.grid_exp);
  emit(lacuna::make_report("dset-check", config_echo(args, f), lacuna::to_json(cert),
                           ms_since(t0)),
       args.out_path);
  return 0;
}

int run_log_integral(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  lacuna::LogIntegralReport rep = lacuna::log_integral(f, args.grid_exp);
  Json cfg{{"f", args.f_expr},
           {"grid_exp", args.grid_exp},
           {"f_normalized", lacuna::trigpoly_to_json(f)}};
  emit(lacuna::make_report("log-integral", cfg, lacuna::to_json(rep), ms_since(t0)),
       args.out_path);
  return 0;
}

int run_toeplitz(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::TrigPoly phi = lacuna::parse_function(args.phi_expr);
  lacuna::KernelBasis basis = lacuna::kernel_basis(phi, args.cap);
  Json cfg{{"phi", args.phi_expr}, {"cap", args.cap}};
  emit(lacuna::make_report("toeplitz-kernel", cfg, lacuna::to_json(basis), ms_since(t0)),
       args.out_path);
  return 0;
}

int run_oracle(const CommonArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::TrigPoly f = lacuna::parse_function(args.f_expr);
  if (!args.no_normalize) f = lacuna::normalize_sup(f, args.grid_exp);
  std::vector<lacuna::TrigPoly> basis;
  for (int j = 0; j <= args.degree; ++j) basis.push_back(lacuna::TrigPoly::monomial(j));
  lacuna::OracleOptions opt;
  opt.grid_exp = std::min(args.grid_exp, 12);
  opt.objectives = args.reps;
  opt.seed = args.seed;
  lacuna::ExtremalityCertificate cert = lacuna::linf_feasibility_oracle(f, set, basis, opt);
  Json cfg = config_echo(args, f);
  cfg["basis_degree"] = args.degree;
  cfg["seed"] = args.seed;
  cfg["objectives"] = args.reps;
  emit(lacuna::make_report("oracle", cfg, lacuna::to_json(cert), ms_since(t0)), args.out_path);
  return 0;
}

int run_set_info(const CommonArgs& args, std::int64_t band) {
  auto t0 = std::chrono::steady_clock::now();
  lacuna::SpectralSet set = lacuna::SpectralSet::parse(args.set_expr);
  lacuna::Band window = lacuna::Band::symmetric(band);
  Json result{{"canonical", set.to_string()},
              {"tags", set.classify()},
              {"complement_in_band", set.complement_in(window)},
              {"band", Json::array({window.lo, window.hi})}};
  if (auto period = set.period(lacuna::kDefaultBandHalfWidth)) {
    result["period"] = Json{{"value", period->value}, {"exact", period->exact}};
  }
  if (auto compl_z = set.finite_complement_in_z()) result["complement_in_Z"] = *compl_z;
  if (auto compl_zp = set.finite_complement_in_zplus()) {
    result["complement_in_Zplus"] = *compl_zp;
  }
  Json cfg{{"set", args.set_expr}, {"band", band}};
  emit(lacuna::make_report("set-info", cfg, result, ms_since(t0)), args.out_path);
  return 0;
}

int run_scan_cmd(const std::string& config_path, const std::string& out_csv,
                 const std::string& out_json, const std::string& format) {
  std::ifstream in(config_path);
  if (!in) throw lacuna::PreconditionError("cannot open scan config " + config_path);
  Json j = Json::parse(in);
  lacuna::ScanConfig config = lacuna::ScanConfig::from_json(j);
  if (format != "csv" && format != "json") {
    throw lacuna::PreconditionError("scan --format must be csv or json");
  }
  lacuna::ScanOutput output = lacuna::run_scan(config);
  if (!out_csv.empty()) {
    std::ofstream csv(out_csv);
    if (!csv) throw lacuna::PreconditionError("cannot open CSV output " + out_csv);
    csv << output.csv();
  } else if (format == "csv") {
    std::cout << output.csv();
  }
  if (!out_json.empty()) {
    std::ofstream js(out_json);
    if (!js) throw lacuna::PreconditionError("cannot open JSON output " + out_json);
    js << output.summary.dump(2) << "\n";
  } else if (format == "json") {
    std::cout << output.summary.dump(2) << "\n";
  } else {
    std::cerr << output.summary.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extreme points of lacunary function-space balls: witnesses, certificates, "
               "Toeplitz kernels"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string method = "auto";
  std::int64_t band = lacuna::kDefaultBandHalfWidth;
  std::string scan_config, scan_csv, scan_json;
  std::string scan_format = "csv";

  auto add_common = [&](CLI::App* cmd, bool wants_set, bool wants_f) {
    if (wants_set) cmd->add_option("--set", args.set_expr, "set descriptor");
    if (wants_f) cmd->add_option("--f", args.f_expr, "function expression")->required();
    cmd->add_option("--grid-exp", args.grid_exp, "grid exponent q (8..20)");
    cmd->add_option("--out", args.out_path, "write the JSON report here");
    cmd->add_flag("--no-normalize", args.no_normalize, "skip input normalization");
  };

  auto* c_info = app.add_subcommand("set-info", "inspect a set descriptor");
  c_info->add_option("--set", args.set_expr)->required();
  c_info->add_option("--band", band, "enumeration band half-width");
  c_info->add_option("--out", args.out_path);

  auto* c_wl1 = app.add_subcommand("witness-l1", "midpoint witness in the L1 ball");
  add_common(c_wl1, true, true);
  c_wl1->add_option("--method", method, "auto|periodic|cofinite|search");
  c_wl1->add_option("--degree", args.degree, "degree cap for the search method");

  auto* c_wlinf = app.add_subcommand("witness-linf", "midpoint witness in the sup-norm ball");
  add_common(c_wlinf, true, true);

  auto* c_h1 = app.add_subcommand("classify-h1", "classical H1 extreme-point test");
  add_common(c_h1, false, true);

  auto* c_hinf = app.add_subcommand("classify-hinf", "log-integral test over gap sets");
  add_common(c_hinf, true, true);

  auto* c_linf = app.add_subcommand("classify-linf", "unimodularity test, cofinite sets");
  add_common(c_linf, true, true);

  auto* c_dset = app.add_subcommand("dset-check", "positive-measure unimodularity certificate");
  add_common(c_dset, true, true);

  auto* c_log = app.add_subcommand("log-integral", "quadrature of log(1-|f|)");
  add_common(c_log, false, true);

  auto* c_toe = app.add_subcommand("toeplitz-kernel", "truncated Toeplitz kernel basis");
  c_toe->add_option("--phi", args.phi_expr, "symbol expression")->required();
  c_toe->add_option("--cap", args.cap, "degree cap");
  c_toe->add_option("--out", args.out_path);

  auto* c_oracle = app.add_subcommand("oracle", "LP feasibility oracle for non-extremality");
  add_common(c_oracle, true, true);
  c_oracle->add_option("--degree", args.degree, "perturbation basis degree");
  c_oracle->add_option("--seed", args.seed, "objective seed");
  c_oracle->add_option("--reps", args.reps, "number of random objectives");

  auto* c_scan = app.add_subcommand("scan", "seeded experiment batch from a JSON config");
  c_scan->add_option("--config", scan_config, "scan config JSON file")->required();
  c_scan->add_option("--out", scan_csv, "CSV output path (default: stdout)");
  c_scan->add_option("--summary", scan_json, "JSON summary path (default: stderr)");
  c_scan->add_option("--format", scan_format, "stdout payload when --out is absent: csv|json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_info->parsed()) return run_set_info(args, band);
    if (c_wl1->parsed()) return run_witness_l1(args, method);
    if (c_wlinf->parsed()) return run_witness_linf(args);
    if (c_h1->parsed()) return run_classify_h1(args);
    if (c_hinf->parsed()) return run_classify_hinf(args);
    if (c_linf->parsed()) return run_classify_linf(args);
    if (c_dset->parsed()) return run_dset_check(args);
    if (c_log->parsed()) return run_log_integral(args);
    if (c_toe->parsed()) return run_toeplitz(args);
    if (c_oracle->parsed()) return run_oracle(args);
    if (c_scan->parsed()) return run_scan_cmd(scan_config, scan_csv, scan_json, scan_format);
  } catch (const lacuna::PreconditionError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 1;
  } catch (const lacuna::NumericalAnomaly& e) {
    std::cerr << "numerical anomaly: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
