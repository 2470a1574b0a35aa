#include "lacuna/report.hpp"

#include <cmath>

#include "lacuna/grid.hpp"

namespace lacuna {

Json trigpoly_to_json(const TrigPoly& f) {
  Json out = Json::array();
  for (const auto& [k, c] : f.coeffs()) {
    out.push_back(Json::array({k, c.real(), c.imag()}));
  }
  return out;
}

TrigPoly trigpoly_from_json(const Json& j) {
  TrigPoly f;
  for (const auto& triple : j) {
    if (!triple.is_array() || triple.size() != 3) {
      throw PreconditionError("trigpoly_from_json: expected [k, re, im] triples");
    }
    f.add_term(triple[0].get<std::int64_t>(),
               Complex(triple[1].get<double>(), triple[2].get<double>()));
  }
  return f;
}

Json to_json(const L1Witness& w) {
  Json residuals = Json::object();
  for (const auto& [k, r] : w.residuals) residuals[std::to_string(k)] = r;
  return Json{{"h", trigpoly_to_json(w.h)},
              {"shift", w.shift},
              {"epsilon", w.epsilon},
              {"u", trigpoly_to_json(w.u)},
              {"v", trigpoly_to_json(w.v)},
              {"residual_max", w.residual_max},
              {"residuals", residuals},
              {"nonconstancy", w.nonconstancy},
              {"u_l1", w.u_l1},
              {"v_l1", w.v_l1},
              {"f_l1", w.f_l1},
              {"grid_exp", w.grid_exp},
              {"method", w.method}};
}

Json to_json(const LinfWitness& w) {
  Json residuals = Json::array();
  for (const auto& [k, r] : w.residuals) residuals.push_back(Json::array({k, r}));
  return Json{{"p", trigpoly_to_json(w.p)},
              {"residuals", residuals},
              {"residual_max", w.residual_max},
              {"u_sup", w.u_sup},
              {"v_sup", w.v_sup},
              {"pointwise_bound", w.pointwise_bound},
              {"p_sup_lower", w.p_sup_lower},
              {"p_sup_upper", w.p_sup_upper},
              {"grid_exp", w.grid_exp},
              {"note", w.note}};
}

Json to_json(const OracleWitness& w) {
  return Json{{"p", trigpoly_to_json(w.p)},
              {"weighted", w.weighted},
              {"perturbation_sup", w.perturbation_sup},
              {"pair_sup", w.pair_sup},
              {"spectral_residual", w.spectral_residual},
              {"objective_index", w.objective_index},
              {"grid_exp", w.grid_exp}};
}

Json to_json(const SearchDiagnostics& d) {
  return Json{{"parameter_count", d.parameter_count},
              {"constraint_count", d.constraint_count},
              {"rank", d.rank},
              {"nullity", d.nullity},
              {"singular_values", d.singular_values}};
}

Json to_json(const ExtremalityCertificate& c) {
  Json out{{"verdict", to_string(c.verdict)},
           {"space", Json{{"p", c.space_p}, {"set", c.set_descriptor}}}};
  if (c.l1_witness) out["l1_witness"] = to_json(*c.l1_witness);
  if (c.linf_witness) out["linf_witness"] = to_json(*c.linf_witness);
  if (c.oracle_witness) out["oracle_witness"] = to_json(*c.oracle_witness);
  if (c.diagnostics) out["diagnostics"] = to_json(*c.diagnostics);
  if (c.verdict == Verdict::ExtremeByDSet) {
    out["measure"] = Json{{"low", c.measure_low}, {"high", c.measure_high}};
  }
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

namespace {

Json roots_to_json(const std::vector<RootCluster>& roots) {
  Json out = Json::array();
  for (const RootCluster& r : roots) {
    out.push_back(Json{{"re", r.location.real()},
                       {"im", r.location.imag()},
                       {"multiplicity", r.multiplicity},
                       {"residual", r.residual}});
  }
  return out;
}

}  // namespace

Json to_json(const FactorizationReport& r) {
  Json out{{"roots_inside", roots_to_json(r.roots_inside)},
           {"roots_on_boundary", roots_to_json(r.roots_on_boundary)},
           {"roots_outside", roots_to_json(r.roots_outside)},
           {"is_outer", r.is_outer},
           {"blaschke_degree", r.blaschke_degree},
           {"degree", r.degree},
           {"boundary_tol", r.boundary_tol},
           {"max_residual", r.max_residual},
           {"ill_conditioned", r.ill_conditioned}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const H1Classification& c) {
  const char* verdict = c.verdict == H1Verdict::Extreme
                            ? "Extreme"
                            : (c.verdict == H1Verdict::NonExtreme ? "NonExtreme"
                                                                  : "NotUnitNorm");
  return Json{{"verdict", verdict},
              {"l1_norm", c.l1_norm},
              {"factorization", to_json(c.factorization)}};
}

Json to_json(const LogIntegralReport& r) {
  Json points = Json::array();
  for (const auto& vp : r.vanishing_points) {
    points.push_back(Json{{"angle", vp.angle}, {"order", vp.order}});
  }
  Json arcs = Json::array();
  for (const auto& arc : r.unimodular_arcs) {
    arcs.push_back(Json{{"start", arc.start}, {"end", arc.end}});
  }
  Json out{{"classification", r.divergent ? "divergent" : "finite"},
           {"suspect", r.suspect},
           {"vanishing_points", points},
           {"unimodular_arcs", arcs}};
  if (!r.divergent) {
    out["value"] = r.value;
    out["error_estimate"] = r.error_estimate;
  }
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

Json to_json(const HinfClassification& c) {
  return Json{{"verdict", c.verdict == HinfVerdict::Extreme ? "Extreme" : "NonExtreme"},
              {"scope", c.scope},
              {"sup_norm", Json{{"lower", c.sup_norm.lower}, {"upper", c.sup_norm.upper}}},
              {"log_integral", to_json(c.log_report)}};
}

Json to_json(const KernelBasis& k) {
  Json basis = Json::array();
  for (const TrigPoly& b : k.basis) basis.push_back(trigpoly_to_json(b));
  return Json{{"symbol", trigpoly_to_json(k.symbol)},
              {"degree_cap", k.degree_cap},
              {"dimension", k.dimension()},
              {"basis", basis},
              {"residual", k.residual},
              {"singular_values", k.singular_values}};
}

Json make_report(const std::string& command, const Json& config, const Json& result,
                 double elapsed_ms) {
  return Json{{"schema_version", kSchemaVersion},
              {"library", Json{{"name", kLibraryName}, {"version", kLibraryVersion}}},
              {"command", command},
              {"config", config},
              {"result", result},
              {"timing_ms", elapsed_ms}};
}

ReverifyResult reverify_report(const Json& report) {
  ReverifyResult out;
  const std::string command = report.at("command").get<std::string>();
  const Json& config = report.at("config");
  const Json& result = report.at("result");
  SpectralSet set = SpectralSet::parse(result.at("space").at("set").get<std::string>());
  TrigPoly f = trigpoly_from_json(config.at("f_normalized"));

  if (command == "witness-l1") {
    const Json& w = result.at("l1_witness");
    TrigPoly h = trigpoly_from_json(w.at("h"));
    TrigPoly u = trigpoly_from_json(w.at("u"));
    TrigPoly v = trigpoly_from_json(w.at("v"));
    double shift = w.at("shift").get<double>();
    double epsilon = w.at("epsilon").get<double>();

    TrigPoly fh = multiply(f, h);
    // Midpoint identity and embedded pair consistency.
    TrigPoly rebuilt_u = f + epsilon * (fh - shift * f);
    double drift = (rebuilt_u - u).max_abs_coeff();
    drift = std::max(drift, ((u + v) - 2.0 * f).max_abs_coeff());

    double residual_max = 0.0;
    double rep_drift = 0.0;
    for (const auto& [key, val] : w.at("residuals").items()) {
      std::int64_t k = std::stoll(key);
      double r = std::abs(fh.coeff(k));
      residual_max = std::max(residual_max, r);
      rep_drift = std::max(rep_drift, std::abs(r - val.get<double>()));
    }
    double u_l1 = norm_l1(u).value;
    double v_l1 = norm_l1(v).value;
    out.norm_drift = std::max(std::abs(u_l1 - w.at("u_l1").get<double>()),
                              std::abs(v_l1 - w.at("v_l1").get<double>()));
    out.residual_max = residual_max;
    out.max_residual_drift = std::max(rep_drift, drift);
    out.ok = out.max_residual_drift <= 1e-12 && out.norm_drift <= 1e-9 &&
             residual_max <= kSpectralResidualTolL1;
    return out;
  }

  if (command == "witness-linf") {
    const Json& w = result.at("linf_witness");
    TrigPoly p = trigpoly_from_json(w.at("p"));
    int q = w.at("grid_exp").get<int>();
    GridFunction fg = to_grid(f, q);
    GridFunction pg = to_grid(p, q);
    GridFunction pert(q);
    double pair_sup = 0.0;
    for (std::size_t j = 0; j < pert.size(); ++j) {
      double d = std::max(0.0, 1.0 - std::abs(fg[j]));
      pert[j] = d * pg[j];
      pair_sup = std::max({pair_sup, std::abs(fg[j] + pert[j]), std::abs(fg[j] - pert[j])});
    }
    std::vector<Complex> hat = grid_spectrum(pert);
    double residual_max = 0.0;
    double rep_drift = 0.0;
    for (const auto& pair : w.at("residuals")) {
      std::int64_t k = pair[0].get<std::int64_t>();
      double r = std::abs(spectrum_at(hat, k));
      residual_max = std::max(residual_max, r);
      rep_drift = std::max(rep_drift, std::abs(r - pair[1].get<double>()));
    }
    out.residual_max = residual_max;
    out.max_residual_drift = rep_drift;
    out.norm_drift = std::max(std::abs(pair_sup - std::max(w.at("u_sup").get<double>(),
                                                           w.at("v_sup").get<double>())),
                              0.0);
    out.ok = rep_drift <= 1e-12 && residual_max <= kSpectralResidualTolLinf &&
             pair_sup <= 1.0 + kSpectralResidualTolLinf;
    return out;
  }

  out.detail = "reverify supports witness-l1 and witness-linf reports";
  return out;
}

}  // namespace lacuna
