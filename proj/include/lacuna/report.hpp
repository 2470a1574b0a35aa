#pragma once

#include <json.hpp>

#include "lacuna/extremality.hpp"
#include "lacuna/factorization.hpp"
#include "lacuna/toeplitz.hpp"

namespace lacuna {

using Json = nlohmann::json;

// TrigPoly <-> sorted [k, re, im] triples; bit-stable for finite doubles.
Json trigpoly_to_json(const TrigPoly& f);
TrigPoly trigpoly_from_json(const Json& j);

Json to_json(const L1Witness& w);
Json to_json(const LinfWitness& w);
Json to_json(const OracleWitness& w);
Json to_json(const SearchDiagnostics& d);
Json to_json(const ExtremalityCertificate& c);
Json to_json(const FactorizationReport& r);
Json to_json(const H1Classification& c);
Json to_json(const LogIntegralReport& r);
Json to_json(const HinfClassification& c);
Json to_json(const KernelBasis& k);

// Report envelope shared by every CLI subcommand: schema/version header,
// config echo, result payload, timing in a separate field.
Json make_report(const std::string& command, const Json& config, const Json& result,
                 double elapsed_ms);

struct ReverifyResult {
  bool ok = false;
  double residual_max = 0.0;       // recomputed spectral residual
  double max_residual_drift = 0.0; // |recomputed - reported| over all residuals
  double norm_drift = 0.0;         // pair-norm recomputation drift
  std::string detail;
};

// Re-runs the embedded witness verification of a witness-l1 / witness-linf
// report from its serialized payload alone (no search repeated).
ReverifyResult reverify_report(const Json& report);

}  // namespace lacuna
