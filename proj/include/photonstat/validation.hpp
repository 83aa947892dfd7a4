#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Cross-route consistency suite.  Every physics quantity in the library has
// two independent computation paths (transcribed equations vs density-matrix
// brute force, closed forms vs quadrature, exponential vs ODE integration);
// this module drives them against each other and reports worst deviations.
namespace photonstat {

struct ValidationCheck {
  std::string name;
  int cases = 0;
  double worst = 0.0;     // worst absolute deviation observed
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;     // e.g. the offending coefficient on failure
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  std::string render() const; // one line per check plus a summary
};

// Test fixture: injects an error into the transcribed drift matrix copy used
// by the generator-expansion check, emulating a transcription typo.  Indices
// are 1-based; col 16 addresses the drive vector entry of that row.
struct GeneratorPerturbation {
  int row = 1;
  int col = 1;
  double amount = 0.0;
};

ValidationReport run_validation(
    int n_random_configs = 20, std::uint64_t seed = 2024,
    const std::optional<GeneratorPerturbation>& perturb = std::nullopt);

} // namespace photonstat
