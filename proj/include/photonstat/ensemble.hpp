#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "photonstat/constants.hpp"
#include "photonstat/pair_system.hpp"
#include "photonstat/rng.hpp"
#include "photonstat/vapor.hpp"

// Monte Carlo ensemble: atom pairs are placed uniformly in a cube sized so
// the expected pair distance matches the vapor's mean spacing, each atom gets
// a Doppler-shifted detuning and a position-dependent drive phase, the pair
// correlation is solved exactly, and the per-pair results are averaged.
namespace photonstat {

enum class DipolePolicy { fixed_z, random_per_pair };

// per_pair_g2: arithmetic mean of normalized g2 curves (default).
// ratio_of_averages: mean numerator / mean denominator (treats the ensemble
// as one stationary source; immune to weak-pair division blowups).
enum class AveragingMode { per_pair_g2, ratio_of_averages };

struct EnsembleSpec {
  double temperature_k = 380.0;
  double delta_av = 0.0; // mean laser detuning, Gamma units
  double omega_r = 20.0; // peak Rabi frequency, Gamma units, real >= 0
  int n_pairs = 1500;
  double min_separation = 0.01;    // wavelength units
  double detuning_halfwidth = 5.0; // truncation of the detuning spread, Gamma
  // empty -> Doppler width computed from the temperature
  std::optional<double> doppler_sigma_override;
  DipolePolicy dipole_policy = DipolePolicy::fixed_z;
  AveragingMode averaging_mode = AveragingMode::per_pair_g2;
  std::uint64_t seed = 0;
  double tau_max = 5.0; // delays span [0, tau_max], 1/Gamma units
  int tau_points = 101;
  int workers = 1; // <= 0 -> hardware concurrency
  double wavelength_m = default_wavelength_m;
};

void validate_spec(const EnsembleSpec& spec);

struct PairSample {
  Eigen::Vector3d r1, r2;     // positions, wavelength units
  Eigen::Vector3d dipole_axis;
  double separation = 0.0;    // |r1 - r2|, wavelength units
  double delta1 = 0.0, delta2 = 0.0;
  PairConfig cfg;             // derived dynamical parameters
};

// Draw order per stream is fixed (positions, detunings, dipole axis) so a
// pair is reproducible from (seed, pair index) alone.  Throws
// std::invalid_argument when min_separation exceeds the box diagonal.
PairSample sample_pair(RngStream& rng, const EnsembleSpec& spec,
                       const VaporConditions& vapor);

struct PairFailure {
  int pair_index = 0;
  std::string message;
};

struct DistributionSummary {
  int count = 0;
  double mean = 0.0, min = 0.0, max = 0.0;
  double q05 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q95 = 0.0;
};

// one row per pair for the per-pair summary output
struct PairRecord {
  int index = 0;
  bool ok = false;
  double separation = 0.0; // wavelength units
  double delta1 = 0.0, delta2 = 0.0;
  double g2_zero = 0.0; // NaN when failed or too weakly driven to normalize
};

struct EnsembleResult {
  std::vector<double> tau;
  std::vector<double> g2_mean;
  std::vector<double> g2_stderr;
  DistributionSummary g2_zero; // per-pair g2(0) distribution
  std::vector<PairRecord> pairs;
  int n_pairs_requested = 0;
  int n_pairs_used = 0;
  std::vector<PairFailure> failures;
  EnsembleSpec spec;     // provenance
  VaporConditions vapor; // provenance
  std::string rng_algorithm;
};

// Runs the full Monte Carlo average.  Bit-reproducible for a given spec
// (seed included) at any worker count: pair k's stream is keyed by (seed, k)
// and the reduction runs in pair-index order after all workers finish.
// Throws std::runtime_error when more than 1% of pairs fail.
EnsembleResult ensemble_g2(const EnsembleSpec& spec);

} // namespace photonstat
