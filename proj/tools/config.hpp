#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "json.hpp"
#include "misinfo/policy.hpp"
#include "misinfo/simulation.hpp"

namespace misinfo::cli {

struct GridRange {
  double start = 0.1;
  double stop = 3.0;
  double step = 0.1;

  std::vector<double> values() const { return make_grid(start, stop, step); }
};

/// Everything a run needs. Defaults reproduce the two-dimensional benchmark
/// (Σ = I, Σ_s = 0.5 I, μ_i ~ N(μ̄, 0.1 I), β = 1.6, d_min = 1.1).
struct RunConfig {
  ScenarioSpec scenario;
  PolicyConfig policy;
  GridRange epsilon_grid;
  std::size_t n_draws = 2000;
  /// Required before any run; there is no clock-based fallback.
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = ".";
  bool emit_svg = false;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

/// Builds a config from a parsed document; absent keys keep their defaults,
/// unknown keys are rejected. Matrices are row-major (nested rows or a flat
/// list of dim*dim numbers) or {"diag": [...]}.
RunConfig config_from_json(const nlohmann::json& doc);

/// Reads and parses a config file. Throws InvalidInput on any problem.
RunConfig load_config(const std::filesystem::path& path);

/// Default config as a document, handy as a starting template.
nlohmann::json config_to_json(const RunConfig& config);

/// Parses "1,0.5,-2" into a vector; throws InvalidInput naming `field`.
Vec parse_vector(std::string_view text, std::string_view field);

}  // namespace misinfo::cli
