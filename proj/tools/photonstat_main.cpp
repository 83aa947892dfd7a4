// photonstat: photon statistics of laser-driven atom pairs in thermal
// rubidium vapor.  Subcommands: pair, ensemble, sweep, validate.
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photonstat/analysis.hpp"
#include "photonstat/collective.hpp"
#include "photonstat/constants.hpp"
#include "photonstat/ensemble.hpp"
#include "photonstat/io.hpp"
#include "photonstat/regression.hpp"
#include "photonstat/validation.hpp"

namespace fs = std::filesystem;
using namespace photonstat;

namespace {

// Gamma = 2 pi x 6 MHz: an ordinary frequency f in MHz is f/6 in Gamma units
constexpr double kMhzPerGamma = 6.0;

struct Options {
  EnsembleSpec spec;
  std::string out_dir;
  std::string config_path;
  std::string doppler_sigma_text = "from-temperature";
  double wavelength_nm = default_wavelength_m * 1e9;

  // MHz entry points (converted after parsing)
  std::optional<double> omega_r_mhz;
  std::optional<double> delta_av_mhz;

  // pair-explicit inputs
  std::vector<double> r1, r2, dipole_axis_in;
  double delta1 = 0.0, delta2 = 0.0;

  // sweep inputs
  std::string axis = "omega-r";
  std::vector<double> values;
  std::string seed_policy = "common";

  // validate inputs
  int validate_configs = 20;
  std::vector<double> perturb; // hidden fixture: row col amount
};

std::string default_out_dir() {
  if (const char* env = std::getenv("PHOTONSTAT_OUT"); env && *env) return env;
  return "photonstat_out";
}

void add_output_option(CLI::App* cmd, Options& opt) {
  opt.out_dir = default_out_dir();
  cmd->add_option("--out", opt.out_dir,
                  "output directory (default: $PHOTONSTAT_OUT or ./photonstat_out)")
      ->capture_default_str();
  cmd->add_option("--config", opt.config_path,
                  "key = value configuration file (flags override it)");
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Applies "key = value" lines to the options of the parsed subcommand.  Keys
// name long options without the leading dashes; values given on the command
// line win; '#' starts a comment.  Errors carry file:line diagnostics.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trimmed(line);
    if (line.empty()) continue;
    const auto at = [&] { return path + ":" + std::to_string(lineno) + ": "; };
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(at() + "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error(at() + "empty key");
    if (key == "config") throw std::runtime_error(at() + "config files cannot nest");
    CLI::Option* op = cmd->get_option_no_throw("--" + key);
    if (op == nullptr) {
      throw std::runtime_error(at() + "unknown configuration key '" + key +
                               "' for subcommand '" + cmd->get_name() + "'");
    }
    if (op->count() > 0) continue; // explicit flag wins
    bool excluded = false;        // e.g. --omega-r-mhz on the command line
    for (const CLI::Option* other : op->get_excludes()) {
      excluded = excluded || other->count() > 0;
    }
    if (excluded) continue;
    std::istringstream tokens(value);
    std::string token;
    int n_tokens = 0;
    try {
      while (tokens >> token) {
        std::string clean = token;
        if (!clean.empty() && clean.back() == ',') clean.pop_back();
        if (clean.empty()) continue;
        op->add_result(clean);
        ++n_tokens;
      }
      if (n_tokens == 0) throw std::runtime_error("empty value");
      op->run_callback();
    } catch (const std::exception& e) {
      throw std::runtime_error(at() + "bad value for '" + key + "': " + e.what());
    }
  }
}

void add_drive_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.spec.seed, "random seed (64-bit)")
      ->capture_default_str();
  auto* om = cmd->add_option("--omega-r", opt.spec.omega_r,
                             "peak Rabi frequency [Gamma]")
                 ->capture_default_str();
  auto* om_mhz = cmd->add_option("--omega-r-mhz", opt.omega_r_mhz,
                                 "peak Rabi frequency [MHz]");
  om->excludes(om_mhz);
  om_mhz->excludes(om);
  auto* da = cmd->add_option("--delta-av", opt.spec.delta_av,
                             "mean laser detuning [Gamma]")
                 ->capture_default_str();
  auto* da_mhz = cmd->add_option("--delta-av-mhz", opt.delta_av_mhz,
                                 "mean laser detuning [MHz]");
  da->excludes(da_mhz);
  da_mhz->excludes(da);
  cmd->add_option("--tau-max", opt.spec.tau_max, "largest delay [1/Gamma]")
      ->capture_default_str();
  cmd->add_option("--tau-points", opt.spec.tau_points, "delay grid size")
      ->capture_default_str();
}

void add_ensemble_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--temperature", opt.spec.temperature_k, "vapor temperature [K]")
      ->capture_default_str();
  cmd->add_option("--pairs", opt.spec.n_pairs, "number of Monte Carlo pairs")
      ->capture_default_str();
  cmd->add_option("--min-separation", opt.spec.min_separation,
                  "smallest allowed pair distance [lambda]")
      ->capture_default_str();
  cmd->add_option("--detuning-halfwidth", opt.spec.detuning_halfwidth,
                  "half-width of the detuning window [Gamma]")
      ->capture_default_str();
  cmd->add_option("--doppler-sigma", opt.doppler_sigma_text,
                  "detuning spread [Gamma], or 'from-temperature'")
      ->capture_default_str();
  cmd->add_option("--wavelength-nm", opt.wavelength_nm, "transition wavelength [nm]")
      ->capture_default_str();
  std::map<std::string, AveragingMode> avg{
      {"per-pair-g2", AveragingMode::per_pair_g2},
      {"ratio-of-averages", AveragingMode::ratio_of_averages}};
  cmd->add_option("--averaging", opt.spec.averaging_mode,
                  "per-pair-g2 | ratio-of-averages")
      ->transform(CLI::CheckedTransformer(avg, CLI::ignore_case))
      ->default_str("per-pair-g2");
  std::map<std::string, DipolePolicy> dip{
      {"fixed-z", DipolePolicy::fixed_z},
      {"random", DipolePolicy::random_per_pair}};
  cmd->add_option("--dipole", opt.spec.dipole_policy, "fixed-z | random")
      ->transform(CLI::CheckedTransformer(dip, CLI::ignore_case))
      ->default_str("fixed-z");
  cmd->add_option("--workers", opt.spec.workers,
                  "worker threads (0 = hardware concurrency)")
      ->capture_default_str();
}

void finalize_options(Options& opt) {
  if (opt.omega_r_mhz) opt.spec.omega_r = *opt.omega_r_mhz / kMhzPerGamma;
  if (opt.delta_av_mhz) opt.spec.delta_av = *opt.delta_av_mhz / kMhzPerGamma;
  opt.spec.wavelength_m = opt.wavelength_nm * 1e-9;
  if (opt.doppler_sigma_text == "from-temperature") {
    opt.spec.doppler_sigma_override.reset();
  } else {
    try {
      std::size_t used = 0;
      const double v = std::stod(opt.doppler_sigma_text, &used);
      if (used != opt.doppler_sigma_text.size()) throw std::invalid_argument("");
      opt.spec.doppler_sigma_override = v;
    } catch (const std::exception&) {
      throw CLI::ValidationError(
          "--doppler-sigma", "expected a number in Gamma units or 'from-temperature'");
    }
  }
}

std::string fmt_vec3(const Eigen::Vector3d& v) {
  return format_double(v.x()) + "," + format_double(v.y()) + "," +
         format_double(v.z());
}

std::vector<std::pair<std::string, std::string>> spec_config_entries(
    const EnsembleSpec& spec, const std::string& doppler_text) {
  return {
      {"temperature_k", format_double(spec.temperature_k)},
      {"delta_av_gamma", format_double(spec.delta_av)},
      {"omega_r_gamma", format_double(spec.omega_r)},
      {"n_pairs", std::to_string(spec.n_pairs)},
      {"min_separation_lambda", format_double(spec.min_separation)},
      {"detuning_halfwidth_gamma", format_double(spec.detuning_halfwidth)},
      {"doppler_sigma_gamma", doppler_text},
      {"dipole_policy",
       spec.dipole_policy == DipolePolicy::fixed_z ? "fixed-z" : "random"},
      {"averaging_mode", spec.averaging_mode == AveragingMode::per_pair_g2
                             ? "per-pair-g2"
                             : "ratio-of-averages"},
      {"seed", std::to_string(spec.seed)},
      {"tau_max_inv_gamma", format_double(spec.tau_max)},
      {"tau_points", std::to_string(spec.tau_points)},
      {"workers", std::to_string(spec.workers)},
      {"wavelength_nm", format_double(spec.wavelength_m * 1e9)},
  };
}

std::string resolved_doppler_text(const EnsembleSpec& spec) {
  return spec.doppler_sigma_override ? format_double(*spec.doppler_sigma_override)
                                     : "from-temperature";
}

struct OutputSet {
  std::vector<std::pair<std::string, std::string>> checksums;
  void write(const fs::path& dir, const std::string& name,
             const std::string& contents) {
    write_text_file(dir / name, contents);
    checksums.emplace_back(name, sha256_hex(contents));
  }
};

void emit_manifest(const fs::path& dir, ManifestInfo info) {
  info.tool_version = version_string;
  info.timestamp_utc = iso8601_utc_now();
  info.rng_algorithm = RngStream::algorithm_id();
  write_text_file(dir / "manifest.json", render_manifest(info));
}

// ---------------------------------------------------------------- pair mode

int run_pair(const Options& opt) {
  const fs::path dir = opt.out_dir;
  ManifestInfo info;
  info.subcommand = "pair";
  info.seed = opt.spec.seed;
  OutputSet outputs;
  try {
    if (opt.r1.empty() != opt.r2.empty()) {
      throw std::invalid_argument("--r1 and --r2 must be given together");
    }
    PairConfig cfg;
    if (!opt.r1.empty()) {
      const Eigen::Vector3d r1(opt.r1[0], opt.r1[1], opt.r1[2]);
      const Eigen::Vector3d r2(opt.r2[0], opt.r2[1], opt.r2[2]);
      Eigen::Vector3d axis(0.0, 0.0, 1.0);
      if (!opt.dipole_axis_in.empty()) {
        axis = {opt.dipole_axis_in[0], opt.dipole_axis_in[1], opt.dipole_axis_in[2]};
        if (axis.norm() == 0.0) {
          throw std::invalid_argument("--dipole-axis must be non-zero");
        }
        axis.normalize();
      }
      const CollectiveParams cp = collective_params({r2 - r1, axis});
      cfg.delta1 = opt.delta1;
      cfg.delta2 = opt.delta2;
      cfg.omega1 = opt.spec.omega_r * std::exp(Cplx{0.0, -two_pi * r1.x()});
      cfg.omega2 = opt.spec.omega_r * std::exp(Cplx{0.0, -two_pi * r2.x()});
      cfg.gamma12 = cp.gamma12;
      cfg.g12 = cp.g12;
      info.config = {{"mode", "explicit"},
                     {"r1_lambda", fmt_vec3(r1)},
                     {"r2_lambda", fmt_vec3(r2)},
                     {"dipole_axis", fmt_vec3(axis)},
                     {"delta1_gamma", format_double(cfg.delta1)},
                     {"delta2_gamma", format_double(cfg.delta2)},
                     {"omega_r_gamma", format_double(opt.spec.omega_r)},
                     {"tau_max_inv_gamma", format_double(opt.spec.tau_max)},
                     {"tau_points", std::to_string(opt.spec.tau_points)}};
    } else {
      const VaporConditions vapor =
          vapor_conditions(opt.spec.temperature_k, opt.spec.wavelength_m);
      RngStream rng(opt.spec.seed, 0);
      const PairSample sample = sample_pair(rng, opt.spec, vapor);
      cfg = sample.cfg;
      info.config = spec_config_entries(opt.spec, resolved_doppler_text(opt.spec));
      info.config.emplace_back("mode", "sampled");
      info.config.emplace_back("sampled_r1_lambda", fmt_vec3(sample.r1));
      info.config.emplace_back("sampled_r2_lambda", fmt_vec3(sample.r2));
      info.config.emplace_back("sampled_separation_lambda",
                               format_double(sample.separation));
      info.config.emplace_back("sampled_delta1_gamma", format_double(sample.delta1));
      info.config.emplace_back("sampled_delta2_gamma", format_double(sample.delta2));
    }
    info.config.emplace_back("gamma12_gamma", format_double(cfg.gamma12));
    info.config.emplace_back("g12_gamma", format_double(cfg.g12));

    const PairCorrelator corr(cfg);
    if (corr.denominator() < min_denominator) {
      throw std::runtime_error(
          "zero denominator: g2 undefined (stationary emission intensity " +
          format_double(corr.denominator()) + " below " +
          format_double(min_denominator) + "; pair is effectively undriven)");
    }
    const std::vector<double> taus =
        uniform_delays(opt.spec.tau_max, opt.spec.tau_points);
    CsvColumn c_tau{"tau", "1/Gamma", taus};
    CsvColumn c_num{"numerator", "dimensionless", {}};
    CsvColumn c_den{"denominator", "dimensionless", {}};
    CsvColumn c_g2{"g2", "dimensionless", {}};
    for (double t : taus) {
      const double num = corr.numerator(t);
      c_num.values.push_back(num);
      c_den.values.push_back(corr.denominator());
      c_g2.values.push_back(num / corr.denominator());
    }
    outputs.write(dir, "g2.csv",
                  render_csv({"two-time correlation of one atom pair"},
                             {c_tau, c_num, c_den, c_g2}));
    info.results.emplace_back("g2_zero", format_double(c_g2.values.front()));
    info.outputs = outputs.checksums;
    info.success = true;
    emit_manifest(dir, info);
    std::cout << "g2(0) = " << format_double(c_g2.values.front()) << "\n"
              << "wrote " << (dir / "g2.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    info.success = false;
    info.failure_cause = e.what();
    info.outputs = outputs.checksums;
    emit_manifest(dir, info);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// ------------------------------------------------------------ ensemble mode

struct EnsembleScalars {
  double g2_zero = std::numeric_limits<double>::quiet_NaN();
  double g2_zero_stderr = std::numeric_limits<double>::quiet_NaN();
  double fwhm = std::numeric_limits<double>::quiet_NaN();
  std::string fwhm_note;
};

EnsembleScalars write_ensemble_outputs(const EnsembleResult& res,
                                       const fs::path& dir, OutputSet& outputs,
                                       ManifestInfo& info) {
  CsvColumn c_tau{"tau", "1/Gamma", res.tau};
  CsvColumn c_mean{"g2_mean", "dimensionless", res.g2_mean};
  CsvColumn c_err{"g2_stderr", "dimensionless", res.g2_stderr};
  outputs.write(dir, "ensemble.csv",
                render_csv({"ensemble-averaged two-time correlation"},
                           {c_tau, c_mean, c_err}));

  CsvColumn p_idx{"pair", "index", {}};
  CsvColumn p_ok{"ok", "boolean", {}};
  CsvColumn p_sep{"r12", "lambda", {}};
  CsvColumn p_d1{"delta1", "Gamma", {}};
  CsvColumn p_d2{"delta2", "Gamma", {}};
  CsvColumn p_g0{"g2_zero", "dimensionless", {}};
  for (const PairRecord& rec : res.pairs) {
    p_idx.values.push_back(rec.index);
    p_ok.values.push_back(rec.ok ? 1.0 : 0.0);
    p_sep.values.push_back(rec.separation);
    p_d1.values.push_back(rec.delta1);
    p_d2.values.push_back(rec.delta2);
    p_g0.values.push_back(rec.g2_zero);
  }
  outputs.write(dir, "pairs.csv",
                render_csv({"per-pair samples and zero-delay correlations"},
                           {p_idx, p_ok, p_sep, p_d1, p_d2, p_g0}));

  EnsembleScalars scalars;
  scalars.g2_zero = res.g2_mean.front();
  scalars.g2_zero_stderr = res.g2_stderr.front();
  G2Series mean_curve;
  mean_curve.tau = res.tau;
  mean_curve.g2 = res.g2_mean;
  try {
    scalars.fwhm = first_peak_fwhm(mean_curve);
  } catch (const std::exception& e) {
    scalars.fwhm_note = e.what();
  }

  info.results.emplace_back("g2_zero", format_double(scalars.g2_zero));
  info.results.emplace_back("g2_zero_stderr",
                            format_double(scalars.g2_zero_stderr));
  if (scalars.fwhm_note.empty()) {
    info.results.emplace_back("fwhm_inv_gamma", format_double(scalars.fwhm));
  } else {
    info.results.emplace_back("fwhm_error", scalars.fwhm_note);
  }
  info.results.emplace_back("pairs_used", std::to_string(res.n_pairs_used));
  info.results.emplace_back("pair_failures",
                            std::to_string(res.failures.size()));
  info.results.emplace_back("vapor_mean_spacing_lambda",
                            format_double(res.vapor.mean_spacing_lambda));
  info.results.emplace_back("vapor_box_side_lambda",
                            format_double(res.vapor.box_side_lambda));
  info.results.emplace_back("vapor_doppler_sigma_gamma",
                            format_double(res.vapor.doppler_sigma_gamma));
  return scalars;
}

int run_ensemble(const Options& opt) {
  const fs::path dir = opt.out_dir;
  ManifestInfo info;
  info.subcommand = "ensemble";
  info.seed = opt.spec.seed;
  info.config = spec_config_entries(opt.spec, resolved_doppler_text(opt.spec));
  OutputSet outputs;
  try {
    const EnsembleResult res = ensemble_g2(opt.spec);
    const EnsembleScalars scalars =
        write_ensemble_outputs(res, dir, outputs, info);
    info.outputs = outputs.checksums;
    info.success = true;
    emit_manifest(dir, info);
    std::cout << "g2(0) = " << format_double(scalars.g2_zero) << " +/- "
              << format_double(scalars.g2_zero_stderr) << "\n";
    if (scalars.fwhm_note.empty()) {
      std::cout << "first-peak FWHM = " << format_double(scalars.fwhm)
                << " /Gamma\n";
    } else {
      std::cout << "first-peak FWHM unavailable: " << scalars.fwhm_note << "\n";
    }
    if (!res.failures.empty()) {
      std::cout << res.failures.size() << " pair(s) failed (within the 1% "
                << "tolerance); see pairs.csv\n";
    }
    std::cout << "wrote " << (dir / "ensemble.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    info.success = false;
    info.failure_cause = e.what();
    info.outputs = outputs.checksums;
    emit_manifest(dir, info);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// --------------------------------------------------------------- sweep mode

int run_sweep(const Options& opt) {
  const fs::path dir = opt.out_dir;
  ManifestInfo info;
  info.subcommand = "sweep";
  info.seed = opt.spec.seed;
  info.config = spec_config_entries(opt.spec, resolved_doppler_text(opt.spec));
  info.config.emplace_back("axis", opt.axis);
  info.config.emplace_back("seed_policy", opt.seed_policy);
  {
    std::string joined;
    for (std::size_t k = 0; k < opt.values.size(); ++k) {
      joined += (k ? "," : "") + format_double(opt.values[k]);
    }
    info.config.emplace_back("values", joined);
  }
  OutputSet outputs;
  try {
    if (opt.values.empty()) {
      throw std::invalid_argument("sweep needs at least one --values entry");
    }
    for (double v : opt.values) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("sweep values must be finite");
      }
    }

    std::string axis_unit;
    CsvColumn c_axis{opt.axis, "", {}};
    CsvColumn c_g0{"g2_zero", "dimensionless", {}};
    CsvColumn c_g0err{"g2_zero_stderr", "dimensionless", {}};
    CsvColumn c_fwhm{"fwhm", "1/Gamma", {}};
    std::vector<std::string> point_failures;

    for (std::size_t k = 0; k < opt.values.size(); ++k) {
      EnsembleSpec point = opt.spec;
      if (opt.axis == "omega-r") {
        point.omega_r = opt.values[k];
        axis_unit = "Gamma";
      } else if (opt.axis == "temperature") {
        point.temperature_k = opt.values[k];
        axis_unit = "K";
      } else if (opt.axis == "delta-av") {
        point.delta_av = opt.values[k];
        axis_unit = "Gamma";
      } else {
        throw std::invalid_argument(
            "axis must be one of omega-r | temperature | delta-av");
      }
      if (opt.seed_policy == "per-point") {
        point.seed = opt.spec.seed + k;
      } else if (opt.seed_policy != "common") {
        throw std::invalid_argument("seed policy must be common | per-point");
      }

      const std::string point_name =
          opt.axis + "_" + format_double(opt.values[k]);
      const fs::path point_dir = dir / point_name;
      ManifestInfo point_info;
      point_info.subcommand = "ensemble";
      point_info.seed = point.seed;
      point_info.config =
          spec_config_entries(point, resolved_doppler_text(point));
      OutputSet point_outputs;

      c_axis.values.push_back(opt.values[k]);
      try {
        const EnsembleResult res = ensemble_g2(point);
        const EnsembleScalars scalars =
            write_ensemble_outputs(res, point_dir, point_outputs, point_info);
        point_info.outputs = point_outputs.checksums;
        point_info.success = true;
        emit_manifest(point_dir, point_info);
        c_g0.values.push_back(scalars.g2_zero);
        c_g0err.values.push_back(scalars.g2_zero_stderr);
        c_fwhm.values.push_back(scalars.fwhm);
        std::cout << point_name << ": g2(0) = " << format_double(scalars.g2_zero)
                  << "\n";
      } catch (const std::exception& e) {
        point_info.success = false;
        point_info.failure_cause = e.what();
        point_info.outputs = point_outputs.checksums;
        emit_manifest(point_dir, point_info);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        c_g0.values.push_back(nan);
        c_g0err.values.push_back(nan);
        c_fwhm.values.push_back(nan);
        point_failures.push_back(point_name + ": " + e.what());
        std::cerr << "point " << point_name << " failed: " << e.what() << "\n";
      }
    }

    c_axis.unit = axis_unit;
    outputs.write(dir, "summary.csv",
                  render_csv({"sweep summary: one row per axis value"},
                             {c_axis, c_g0, c_g0err, c_fwhm}));
    info.outputs = outputs.checksums;
    info.success = point_failures.empty();
    if (!info.success) {
      std::string cause = "failed points:";
      for (const std::string& f : point_failures) cause += " [" + f + "]";
      info.failure_cause = cause;
    }
    emit_manifest(dir, info);
    std::cout << "wrote " << (dir / "summary.csv").string() << "\n";
    return info.success ? 0 : 1;
  } catch (const std::exception& e) {
    info.success = false;
    info.failure_cause = e.what();
    info.outputs = outputs.checksums;
    emit_manifest(dir, info);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// ------------------------------------------------------------ validate mode

int run_validate(const Options& opt) {
  const fs::path dir = opt.out_dir;
  ManifestInfo info;
  info.subcommand = "validate";
  info.seed = opt.spec.seed;
  info.config = {{"n_random_configs", std::to_string(opt.validate_configs)},
                 {"seed", std::to_string(opt.spec.seed)}};
  OutputSet outputs;
  try {
    std::optional<GeneratorPerturbation> perturb;
    if (!opt.perturb.empty()) {
      perturb = GeneratorPerturbation{static_cast<int>(opt.perturb[0]),
                                      static_cast<int>(opt.perturb[1]),
                                      opt.perturb[2]};
      info.config.emplace_back(
          "perturbation", std::to_string(perturb->row) + "," +
                              std::to_string(perturb->col) + "," +
                              format_double(perturb->amount));
    }
    const ValidationReport report =
        run_validation(opt.validate_configs, opt.spec.seed, perturb);
    const std::string text = report.render();
    std::cout << text;
    outputs.write(dir, "validation_report.txt", text);
    info.outputs = outputs.checksums;
    info.success = report.all_passed();
    if (!info.success) info.failure_cause = "validation tolerances breached";
    emit_manifest(dir, info);
    return info.success ? 0 : 1;
  } catch (const std::exception& e) {
    info.success = false;
    info.failure_cause = e.what();
    info.outputs = outputs.checksums;
    emit_manifest(dir, info);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon statistics of laser-driven atom pairs in thermal "
               "rubidium vapor"};
  app.require_subcommand(1);

  Options opt;
  opt.spec.workers = 0; // default to hardware concurrency in the CLI

  CLI::App* pair = app.add_subcommand(
      "pair", "g2 curve of a single pair (explicit geometry or sampled)");
  add_output_option(pair, opt);
  add_drive_options(pair, opt);
  add_ensemble_options(pair, opt);
  pair->add_option("--r1", opt.r1, "explicit position of atom 1 [lambda]")
      ->expected(3);
  pair->add_option("--r2", opt.r2, "explicit position of atom 2 [lambda]")
      ->expected(3);
  pair->add_option("--delta1", opt.delta1, "explicit detuning of atom 1 [Gamma]")
      ->capture_default_str();
  pair->add_option("--delta2", opt.delta2, "explicit detuning of atom 2 [Gamma]")
      ->capture_default_str();
  pair->add_option("--dipole-axis", opt.dipole_axis_in,
                   "explicit dipole orientation (normalized)")
      ->expected(3);

  CLI::App* ens = app.add_subcommand("ensemble", "Monte Carlo vapor average");
  add_output_option(ens, opt);
  add_drive_options(ens, opt);
  add_ensemble_options(ens, opt);

  CLI::App* sweep =
      app.add_subcommand("sweep", "repeat the ensemble along a parameter axis");
  add_output_option(sweep, opt);
  add_drive_options(sweep, opt);
  add_ensemble_options(sweep, opt);
  sweep->add_option("--axis", opt.axis, "omega-r | temperature | delta-av")
      ->capture_default_str();
  sweep->add_option("--values", opt.values, "axis values");
  sweep->add_option("--seed-policy", opt.seed_policy, "common | per-point")
      ->capture_default_str();

  CLI::App* validate =
      app.add_subcommand("validate", "cross-route consistency suite");
  add_output_option(validate, opt);
  validate->add_option("--seed", opt.spec.seed, "random seed (64-bit)")
      ->capture_default_str();
  validate->add_option("--configs", opt.validate_configs,
                       "number of random configurations per check")
      ->capture_default_str();
  validate
      ->add_option("--perturb", opt.perturb,
                   "inject row col amount into the transcribed generator")
      ->expected(3)
      ->group(""); // test fixture; hidden from --help

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* active = pair->parsed()   ? pair
                     : ens->parsed()  ? ens
                     : sweep->parsed() ? sweep
                                       : validate;
  try {
    if (!opt.config_path.empty()) apply_config_file(active, opt.config_path);
    finalize_options(opt);
  } catch (const std::exception& e) {
    ManifestInfo info;
    info.subcommand = active->get_name();
    info.seed = opt.spec.seed;
    info.success = false;
    info.failure_cause = e.what();
    emit_manifest(opt.out_dir, info);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (active == pair) return run_pair(opt);
  if (active == ens) return run_ensemble(opt);
  if (active == sweep) return run_sweep(opt);
  return run_validate(opt);
}
