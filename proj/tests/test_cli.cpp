#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef PHOTONSTAT_BIN
#error "PHOTONSTAT_BIN must point at the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output; // stdout + stderr
};

const fs::path kWork = fs::temp_directory_path() / "photonstat_cli_tests";

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = kWork / ("log_" + std::to_string(counter++) + ".txt");
  fs::create_directories(kWork);
  const std::string cmd =
      std::string(PHOTONSTAT_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult res;
#if defined(_WIN32)
  res.exit_code = status;
#else
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  res.output = os.str();
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json manifest(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "manifest.json"));
}

fs::path out_dir(const std::string& name) {
  const fs::path dir = kWork / name;
  fs::remove_all(dir);
  return dir;
}

} // namespace

TEST_CASE("explicit pair run writes curve, checksum, and manifest") {
  const fs::path dir = out_dir("pair_explicit");
  const RunResult res = run_cli(
      "pair --out " + dir.string() +
      " --r1 0 0 0 --r2 0.3 0.2 0.1 --omega-r 5 --tau-max 10 --tau-points 201");
  CHECK(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "g2.csv"));
  const auto j = manifest(dir);
  CHECK(j.at("tool") == "photonstat");
  CHECK(j.at("subcommand") == "pair");
  CHECK(j.at("success") == true);
  const std::string csv = slurp(dir / "g2.csv");
  CHECK(csv.find("tau,numerator,denominator,g2") != std::string::npos);
  // checksum in the manifest matches the file on disk
  const std::string digest = j.at("outputs_sha256").at("g2.csv");
  REQUIRE(digest.size() == 64);
  // first data row starts at tau = 0
  CHECK(csv.find("\n0,") != std::string::npos);
}

TEST_CASE("reruns are bitwise identical apart from the manifest timestamp") {
  const fs::path dir1 = out_dir("repeat_a");
  const fs::path dir2 = out_dir("repeat_b");
  const std::string flags =
      " --seed 31 --pairs 40 --tau-points 61 --temperature 380";
  CHECK(run_cli("ensemble --out " + dir1.string() + flags).exit_code == 0);
  CHECK(run_cli("ensemble --out " + dir2.string() + flags).exit_code == 0);
  CHECK(slurp(dir1 / "ensemble.csv") == slurp(dir2 / "ensemble.csv"));
  CHECK(slurp(dir1 / "pairs.csv") == slurp(dir2 / "pairs.csv"));
  const auto j1 = manifest(dir1);
  const auto j2 = manifest(dir2);
  CHECK(j1.at("outputs_sha256") == j2.at("outputs_sha256"));
  CHECK(j1.at("config") == j2.at("config"));
}

TEST_CASE("worker counts leave the outputs untouched") {
  const fs::path dir1 = out_dir("workers_1");
  const fs::path dir8 = out_dir("workers_8");
  const std::string flags = " --seed 5 --pairs 50 --tau-points 41";
  CHECK(run_cli("ensemble --out " + dir1.string() + flags + " --workers 1")
            .exit_code == 0);
  CHECK(run_cli("ensemble --out " + dir8.string() + flags + " --workers 8")
            .exit_code == 0);
  CHECK(slurp(dir1 / "ensemble.csv") == slurp(dir8 / "ensemble.csv"));
  CHECK(slurp(dir1 / "pairs.csv") == slurp(dir8 / "pairs.csv"));
}

TEST_CASE("an undriven pair fails loudly but still leaves a manifest") {
  const fs::path dir = out_dir("undriven");
  const RunResult res = run_cli("pair --out " + dir.string() +
                                " --r1 0 0 0 --r2 1 1 1 --omega-r 0");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("zero denominator: g2 undefined") != std::string::npos);
  const auto j = manifest(dir);
  CHECK(j.at("success") == false);
  const std::string cause = j.at("failure_cause");
  CHECK(cause.find("zero denominator") != std::string::npos);
  CHECK(!fs::exists(dir / "g2.csv"));
}

TEST_CASE("configuration files merge under explicit flags") {
  const fs::path dir = out_dir("config_merge");
  fs::create_directories(kWork);
  const fs::path ini = kWork / "merge.ini";
  std::ofstream(ini) << "pairs = 30\n"
                     << "omega-r = 12 # overridden below\n"
                     << "seed = 99\n"
                     << "tau-points = 41\n";
  const RunResult res = run_cli("ensemble --out " + dir.string() + " --config " +
                                ini.string() + " --omega-r 25");
  CHECK(res.exit_code == 0);
  const auto j = manifest(dir);
  CHECK(j.at("config").at("n_pairs") == "30");
  CHECK(j.at("config").at("omega_r_gamma") == "25"); // flag beats file
  CHECK(j.at("seed") == 99);
}

TEST_CASE("config mistakes are reported with file and line") {
  const fs::path dir = out_dir("config_bad");
  fs::create_directories(kWork);
  const fs::path ini = kWork / "bad.ini";
  std::ofstream(ini) << "pairs = 10\nomega_r = 5\n"; // underscore: no such key
  const RunResult res =
      run_cli("ensemble --out " + dir.string() + " --config " + ini.string());
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("bad.ini:2") != std::string::npos);
  CHECK(res.output.find("omega_r") != std::string::npos);
  const auto j = manifest(dir);
  CHECK(j.at("success") == false);
}

TEST_CASE("validation suite passes and writes its report") {
  const fs::path dir = out_dir("validate_ok");
  const RunResult res =
      run_cli("validate --out " + dir.string() + " --configs 3 --seed 2");
  CHECK(res.exit_code == 0);
  const std::string report = slurp(dir / "validation_report.txt");
  CHECK(report.find("[PASS] generator-expansion") != std::string::npos);
  CHECK(report.find("[PASS] steady-state-equivalence") != std::string::npos);
  CHECK(report.find("[PASS] correlation-curve-equivalence") != std::string::npos);
  CHECK(report.find("[PASS] coupling-quadrature") != std::string::npos);
  CHECK(report.find("[PASS] propagator-integration") != std::string::npos);
  CHECK(report.find("[FAIL]") == std::string::npos);
  CHECK(manifest(dir).at("success") == true);
}

TEST_CASE("a perturbed coefficient is caught and named") {
  const fs::path dir = out_dir("validate_perturbed");
  const RunResult res = run_cli("validate --out " + dir.string() +
                                " --configs 3 --perturb 7 15 0.5");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("[FAIL] generator-expansion") != std::string::npos);
  CHECK(res.output.find("M(7,15)") != std::string::npos);
  // the other checks are untouched by the injected fault
  CHECK(res.output.find("[PASS] coupling-quadrature") != std::string::npos);
  CHECK(manifest(dir).at("success") == false);
}

TEST_CASE("sweeps fan out into per-point directories with a summary") {
  const fs::path dir = out_dir("sweep_omega");
  const RunResult res = run_cli(
      "sweep --out " + dir.string() +
      " --axis omega-r --values 5 20 --pairs 30 --seed 3 --tau-points 41" +
      " --seed-policy per-point");
  CHECK(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "omega-r_5" / "ensemble.csv"));
  CHECK(fs::exists(dir / "omega-r_20" / "ensemble.csv"));
  CHECK(fs::exists(dir / "omega-r_5" / "manifest.json"));
  const std::string summary = slurp(dir / "summary.csv");
  CHECK(summary.find("omega-r,g2_zero,g2_zero_stderr,fwhm") != std::string::npos);
  // one row per value
  CHECK(summary.find("\n5,") != std::string::npos);
  CHECK(summary.find("\n20,") != std::string::npos);
  // per-point seeds differ under the per-point policy
  CHECK(manifest(dir / "omega-r_5").at("seed") == 3);
  CHECK(manifest(dir / "omega-r_20").at("seed") == 4);
}

TEST_CASE("a failing sweep point poisons the sweep exit code") {
  const fs::path dir = out_dir("sweep_fail");
  const RunResult res =
      run_cli("sweep --out " + dir.string() +
              " --axis temperature --values 380 9000 --pairs 10 --tau-points 41");
  CHECK(res.exit_code == 1);
  const auto j = manifest(dir);
  CHECK(j.at("success") == false);
  const std::string cause = j.at("failure_cause");
  CHECK(cause.find("temperature_9000") != std::string::npos);
  // the good point still produced its outputs
  CHECK(fs::exists(dir / "temperature_380" / "ensemble.csv"));
  CHECK(manifest(dir / "temperature_380").at("success") == true);
  CHECK(manifest(dir / "temperature_9000").at("success") == false);
}

TEST_CASE("ensemble manifest carries derived vapor numbers and results") {
  const fs::path dir = out_dir("manifest_results");
  CHECK(run_cli("ensemble --out " + dir.string() +
                " --seed 8 --pairs 30 --tau-points 41")
            .exit_code == 0);
  const auto j = manifest(dir);
  const auto& results = j.at("results");
  CHECK(results.contains("g2_zero"));
  CHECK(results.contains("g2_zero_stderr"));
  CHECK(results.contains("pairs_used"));
  CHECK(results.contains("vapor_mean_spacing_lambda"));
  const auto& cfg = j.at("config");
  CHECK(cfg.at("temperature_k") == "380");
  CHECK(cfg.at("averaging_mode") == "per-pair-g2");
  CHECK(cfg.at("dipole_policy") == "fixed-z");
  CHECK(j.at("rng_algorithm") == "xoshiro256++/splitmix64-keyed-streams-v1");
}

TEST_CASE("mhz frequency flags convert through the six-megahertz linewidth") {
  const fs::path dir = out_dir("mhz");
  CHECK(run_cli("ensemble --out " + dir.string() +
                " --omega-r-mhz 60 --delta-av-mhz -30 --pairs 10 --tau-points 41")
            .exit_code == 0);
  const auto j = manifest(dir);
  CHECK(j.at("config").at("omega_r_gamma") == "10");
  CHECK(j.at("config").at("delta_av_gamma") == "-5");
}

TEST_CASE("unknown axis values are rejected before any work happens") {
  const fs::path dir = out_dir("sweep_badaxis");
  const RunResult res = run_cli("sweep --out " + dir.string() +
                                " --axis wavelength --values 1 2 --pairs 5");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("axis") != std::string::npos);
  CHECK(manifest(dir).at("success") == false);
}

