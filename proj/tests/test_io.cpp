#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include <json.hpp>

#include "photonstat/io.hpp"

using namespace photonstat;

TEST_SUITE_BEGIN("io");

TEST_CASE("doubles format to shortest round-trip strings") {
  for (double v : {0.1, 1.0 / 3.0, 2.0, 1e300, 5e-324, -0.0, 123456.789,
                   1.9999999999999998}) {
    const std::string s = format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == v);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv output is stable and carries units in comments") {
  const CsvColumn a{"tau", "1/Gamma", {0.0, 0.5, 1.0}};
  const CsvColumn b{"g2", "dimensionless", {2.0, 1.25, 1.0}};
  const std::string text = render_csv({"demo table"}, {a, b});
  CHECK(text ==
        "# demo table\n"
        "# columns: tau [1/Gamma], g2 [dimensionless]\n"
        "tau,g2\n"
        "0,2\n"
        "0.5,1.25\n"
        "1,1\n");
  // bitwise stability: rendering twice gives the same bytes
  CHECK(render_csv({"demo table"}, {a, b}) == text);
}

TEST_CASE("csv rejects ragged columns") {
  const CsvColumn a{"x", "", {0.0, 1.0}};
  const CsvColumn b{"y", "", {0.0}};
  CHECK_THROWS_AS((void)render_csv({}, {a, b}), std::invalid_argument);
}

TEST_CASE("sha-256 matches published digests") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest renders every provenance field") {
  ManifestInfo info;
  info.tool_version = "9.9.9";
  info.subcommand = "ensemble";
  info.timestamp_utc = "2026-01-01T00:00:00Z";
  info.seed = 77;
  info.rng_algorithm = "test-rng";
  info.config = {{"pairs", "3"}, {"omega_r", "20"}};
  info.success = true;
  info.results = {{"g2_zero", "1.99"}};
  info.outputs = {{"ensemble.csv", "deadbeef"}};
  const auto j = nlohmann::json::parse(render_manifest(info));
  CHECK(j.at("tool") == "photonstat");
  CHECK(j.at("version") == "9.9.9");
  CHECK(j.at("subcommand") == "ensemble");
  CHECK(j.at("timestamp_utc") == "2026-01-01T00:00:00Z");
  CHECK(j.at("seed") == 77);
  CHECK(j.at("rng_algorithm") == "test-rng");
  CHECK(j.at("config").at("pairs") == "3");
  CHECK(j.at("success") == true);
  CHECK(j.at("results").at("g2_zero") == "1.99");
  CHECK(j.at("outputs_sha256").at("ensemble.csv") == "deadbeef");
  CHECK(!j.contains("failure_cause"));
}

TEST_CASE("failed runs keep their cause and an empty output map") {
  ManifestInfo info;
  info.subcommand = "pair";
  info.success = false;
  info.failure_cause = "zero denominator: g2 undefined";
  const auto j = nlohmann::json::parse(render_manifest(info));
  CHECK(j.at("success") == false);
  CHECK(j.at("failure_cause") == "zero denominator: g2 undefined");
  CHECK(j.at("outputs_sha256").is_object());
  CHECK(j.at("outputs_sha256").empty());
  CHECK(!j.contains("results"));
}

TEST_CASE("timestamps are iso-8601 utc") {
  const std::string t = iso8601_utc_now();
  REQUIRE(t.size() == 20);
  CHECK(t[4] == '-');
  CHECK(t[7] == '-');
  CHECK(t[10] == 'T');
  CHECK(t[13] == ':');
  CHECK(t[16] == ':');
  CHECK(t[19] == 'Z');
  int year = 0;
  (void)std::from_chars(t.data(), t.data() + 4, year);
  CHECK(year >= 2024);
}

TEST_CASE("text files round-trip through nested directories") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "photonstat_io_test";
  std::filesystem::remove_all(dir);
  const std::filesystem::path file = dir / "a" / "b" / "data.txt";
  const std::string payload = "line1\nline2\n";
  write_text_file(file, payload);
  CHECK(read_text_file(file) == payload);
  CHECK_THROWS_AS((void)read_text_file(dir / "missing.txt"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
