#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arithdyn::cli {

// Everything a run needs. Fields not used by a command are ignored by it.
struct ExperimentConfig {
  std::string command;
  std::vector<std::string> maps;
  std::vector<std::string> targets;  // one comma-separated list per map
  std::vector<std::string> starts;
  std::vector<std::string> equations;
  std::string variety_file;
  std::string alpha;
  std::string curve;
  std::string point;
  std::string primes;  // "lo..hi", half-open
  std::string mode = "strict";
  std::string torsion = "annotate";
  int level = 1;
  int depth = 1;
  std::uint64_t p = 0;
  std::uint64_t q = 2;
  std::uint64_t n = 1;
  std::uint64_t horizon = 64;
  std::uint64_t certify_prime_max = 0;
  std::uint64_t height_cap = 3321929;
  std::uint64_t chunk_width = std::uint64_t{1} << 15;
  std::uint64_t max_chunks = 0;  // 0 = unlimited
  bool cross_check = true;
  unsigned workers = 0;
  std::string out;
  std::string summary;
  std::string edges;
  std::string cache_dir;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// TOML subset, one `key = value` line per non-default field in a fixed
// order. Throws ParseError on empty list entries, which TOML readers drop.
std::string render_config(const ExperimentConfig& cfg);
// Throws ParseError on unknown keys or malformed values.
ExperimentConfig parse_config(std::string_view text);

// Hash of the fields that determine results; paths, worker count and
// chunk limits are excluded.
std::string config_hash(const ExperimentConfig& cfg);

// "lo..hi" with decimal, 1e6 or 10^6 bounds. Throws ParseError.
std::pair<std::uint64_t, std::uint64_t> parse_prime_range(std::string_view text);

}  // namespace arithdyn::cli
