#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "misinfo/oracle.hpp"
#include "misinfo/policy.hpp"
#include "misinfo/simulation.hpp"

namespace misinfo::cli {

/// Nine significant digits in scientific notation, e.g. 1.20000000e+00.
std::string format_sci(double value);

std::string sweep_csv(const ConvergenceCurve& curve);
std::string utility_csv(const std::vector<UtilityBreakdown>& curve);

std::string sweep_svg(const ConvergenceCurve& curve, const std::string& title);
std::string utility_svg(const PolicyOptimum& optimum, double beta);

nlohmann::json design_json(const ReportDesign& design, double epsilon,
                           bool admissible, const SampleStats& convergence);

nlohmann::json summary_json(const PolicyOptimum& optimum,
                            const PolicyConfig& policy, Audience audience,
                            std::size_t n_samples, std::uint64_t seed);

nlohmann::json instance_json(const OracleInstance& instance);
/// Inverse of instance_json; throws InvalidInput on malformed documents.
OracleInstance instance_from_json(const nlohmann::json& doc);

/// Creates `dir` (and parents) if needed; throws InvalidInput on failure.
void ensure_directory(const std::filesystem::path& dir);
/// Writes `content` to `path`; throws InvalidInput on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace misinfo::cli
