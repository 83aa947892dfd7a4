#include "photonstat/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <openssl/evp.h>

namespace photonstat {

std::string format_double(double v) {
  char buf[40];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, res.ptr);
}

std::string render_csv(const std::vector<std::string>& comments,
                       const std::vector<CsvColumn>& columns) {
  if (columns.empty()) throw std::invalid_argument("CSV needs at least one column");
  const std::size_t rows = columns.front().values.size();
  for (const CsvColumn& c : columns) {
    if (c.values.size() != rows) {
      throw std::invalid_argument("CSV columns differ in length");
    }
  }

  std::ostringstream os;
  for (const std::string& line : comments) os << "# " << line << "\n";
  os << "# columns:";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    os << (k ? ", " : " ") << columns[k].name << " [" << columns[k].unit << "]";
  }
  os << "\n";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    os << (k ? "," : "") << columns[k].name;
  }
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      os << (k ? "," : "") << format_double(columns[k].values[r]);
    }
    os << "\n";
  }
  return os.str();
}

std::string render_manifest(const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["tool"] = "photonstat";
  j["version"] = info.tool_version;
  j["subcommand"] = info.subcommand;
  j["timestamp_utc"] = info.timestamp_utc;
  j["seed"] = info.seed;
  j["rng_algorithm"] = info.rng_algorithm;
  auto cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : info.config) cfg[key] = value;
  j["config"] = cfg;
  j["success"] = info.success;
  if (!info.success) j["failure_cause"] = info.failure_cause;
  if (!info.results.empty()) {
    auto res = nlohmann::ordered_json::object();
    for (const auto& [key, value] : info.results) res[key] = value;
    j["results"] = res;
  }
  auto outs = nlohmann::ordered_json::object();
  for (const auto& [name, digest] : info.outputs) outs[name] = digest;
  j["outputs_sha256"] = outs;
  return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 0xf]);
  }
  return out;
}

std::string iso8601_utc_now() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " +
                               path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace photonstat
