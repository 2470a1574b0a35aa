// End-to-end checks of the command-line driver: exit-code contract, report
// shape, scan determinism.  Drives the real binary through std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string out_path = "/tmp/lacuna_cli_test_" + std::to_string(counter++) + ".out";
  std::string cmd = std::string(LACUNA_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.stdout_text = ss.str();
  std::remove(out_path.c_str());
  return r;
}

nlohmann::json parse_report(const RunResult& r) { return nlohmann::json::parse(r.stdout_text); }

}  // namespace

TEST_CASE("witness-l1 produces a NonExtreme report with the periodic multiplier") {
  RunResult r = run_cli("witness-l1 --set \"AP(2,0)\" --f \"z^2\"");
  REQUIRE(r.exit_code == 0);
  nlohmann::json report = parse_report(r);
  CHECK(report["schema_version"] == 1);
  CHECK(report["result"]["verdict"] == "NonExtreme");
  CHECK(report["result"]["l1_witness"]["method"].get<std::string>().substr(0, 8) ==
        "periodic");
  CHECK(report.contains("timing_ms"));
}

TEST_CASE("toeplitz-kernel reports the truncated dimension") {
  RunResult r = run_cli("toeplitz-kernel --phi \"zbar^3\" --cap 5");
  REQUIRE(r.exit_code == 0);
  CHECK(parse_report(r)["result"]["dimension"] == 3);
}

TEST_CASE("classify-h1 on the normalized outer example") {
  RunResult r = run_cli("classify-h1 --f \"(pi/4)*(1+z)\"");
  REQUIRE(r.exit_code == 0);
  CHECK(parse_report(r)["result"]["verdict"] == "Extreme");
}

TEST_CASE("exit 1 on unparseable descriptors and refusals") {
  CHECK(run_cli("witness-l1 --set \"frob(\" --f \"z\"").exit_code == 1);
  CHECK(run_cli("witness-l1 --set \"Zplus\" --f \"z\" --method periodic").exit_code == 1);
  CHECK(run_cli("witness-l1 --set \"AP(2,0)\" --f \"0.5*z^2\" --no-normalize").exit_code == 1);
  CHECK(run_cli("dset-check --set \"Z\" --f \"z\"").exit_code == 1);
  CHECK(run_cli("log-integral --f \"2*z\"").exit_code == 1);
}

TEST_CASE("inconclusive outcomes still exit 0") {
  RunResult r = run_cli("witness-l1 --set \"Zplus\" --f \"(pi/4)*(1+z)\" --method search "
                        "--degree 4");
  REQUIRE(r.exit_code == 0);
  CHECK(parse_report(r)["result"]["verdict"] == "Inconclusive");
}

TEST_CASE("scan runs are byte-identical apart from the timing column") {
  std::string cfg_path = "/tmp/lacuna_cli_scan_cfg.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"task":"witness-l1","set":"Z \\ {0}","function":{"random":{"sparsity":3,"band":10}},)"
        << R"("seed":99,"reps":4,"grid_exp":12})";
  }
  RunResult a = run_cli("scan --config " + cfg_path + " --summary /dev/null");
  RunResult b = run_cli("scan --config " + cfg_path + " --summary /dev/null");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);

  auto strip_timing = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  CHECK(strip_timing(a.stdout_text) == strip_timing(b.stdout_text));
  CHECK(a.stdout_text.find("NonExtreme") != std::string::npos);
  std::remove(cfg_path.c_str());
}

TEST_CASE("scan refuses invalid configs before running") {
  std::string cfg_path = "/tmp/lacuna_cli_scan_bad.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"task":"witness-l1","set":"Z","reps":0})";
  }
  CHECK(run_cli("scan --config " + cfg_path).exit_code == 1);
  std::remove(cfg_path.c_str());
}

TEST_CASE("set-info emits tags and complements") {
  RunResult r = run_cli("set-info --set \"negpow(2)+Zplus\" --band 16");
  REQUIRE(r.exit_code == 0);
  nlohmann::json report = parse_report(r);
  auto tags = report["result"]["tags"];
  CHECK(std::find(tags.begin(), tags.end(), "dset-by-citation") != tags.end());
}
