#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

// Plot-ready text outputs.  Numbers are rendered with shortest round-trip
// formatting so identical results produce byte-identical files; anything
// time- or host-dependent lives only in the manifest.
namespace photonstat {

// shortest decimal string that parses back to exactly v
std::string format_double(double v);

struct CsvColumn {
  std::string name;
  std::string unit; // appears in the '#' header comment
  std::vector<double> values;
};

// '#' metadata lines (given + a units line), a name header row, then data
// rows.  All columns must share one length.
std::string render_csv(const std::vector<std::string>& comments,
                       const std::vector<CsvColumn>& columns);

// Sidecar describing one CLI invocation; written even when the run fails.
struct ManifestInfo {
  std::string tool_version;
  std::string subcommand;
  std::string timestamp_utc;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  // resolved configuration in emission order; values pre-rendered
  std::vector<std::pair<std::string, std::string>> config;
  bool success = false;
  std::string failure_cause; // empty on success
  // derived scalar results worth surfacing (may be empty)
  std::vector<std::pair<std::string, std::string>> results;
  // output file name -> SHA-256 of its bytes
  std::vector<std::pair<std::string, std::string>> outputs;
};

// JSON rendering with keys in the order given above.
std::string render_manifest(const ManifestInfo& info);

std::string sha256_hex(const std::string& bytes);
std::string iso8601_utc_now();

// create parent directories as needed; throws std::runtime_error on failure
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

} // namespace photonstat
