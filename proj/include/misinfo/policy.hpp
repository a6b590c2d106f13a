#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "misinfo/reporter.hpp"
#include "misinfo/simulation.hpp"

namespace misinfo {

/// Filter radius and the weights/thresholds used to score it.
struct PolicyConfig {
  double epsilon = 1.0;
  /// Weight of the permissiveness ratio in the unified utility.
  double beta = 1.6;
  /// Truth-source distance beyond which a source counts as false.
  double d_min = 1.1;
  /// Reporting threshold for the separation utility.
  double delta = 0.05;
  /// Reporting threshold for the permissiveness ratio, in (0, 1].
  double alpha = 0.5;

  void validate() const;
};

struct UtilityBreakdown {
  double epsilon = 0.0;
  /// E[c(x_s, ε) − c(x_t, ε) | ‖x_t − x_s‖ ≥ d_min]
  double u1 = 0.0;
  double u1_std_error = 0.0;
  /// E c(x_t, ∞) / E c(x_t, ε)
  double u2 = 0.0;
  /// Delta-method standard error of the ratio.
  double u2_std_error = 0.0;
  double total = 0.0;
  double true_mean = 0.0;        ///< E c(x_t, ε)
  double unfiltered_mean = 0.0;  ///< E c(x_t, ∞)
  std::size_t samples_used = 0;
  bool u1_pass_delta = false;
  bool u2_pass_alpha = false;
};

/// The filter admits y iff ‖y − x_t‖ ≤ ε (closed ball).
bool is_admissible(const Vec& y, const Vec& x_t, double epsilon);

/// c(x_s, ε): mean and std over viewers of the convergence achieved by the
/// optimal report for source x_s under the filter around x_t.
SampleStats convergence_stat(const Population& pop, const Vec& x_s,
                             const Vec& x_t, double epsilon);
/// Same, reusing precomputed moments of `pop`.
SampleStats convergence_stat(const Population& pop, const ReporterMoments& m,
                             const Vec& x_s, const Vec& x_t, double epsilon);

/// Separation utility U1 at one ε, conditioned on ‖x_t − x_s‖ ≥ env.d_min.
double utility_separation(const ScenarioSpec& env, double epsilon,
                          std::size_t n_samples, std::uint64_t seed);

/// Permissiveness ratio U2 at one ε. Throws DegenerateModel when the
/// denominator vanishes (zero-variance audience with no filter).
double utility_permissiveness(const ScenarioSpec& env, double epsilon,
                              std::size_t n_samples, std::uint64_t seed);

/// U1 + β U2 on common random numbers; cfg.d_min replaces env.d_min.
UtilityBreakdown unified_utility(const ScenarioSpec& env,
                                 const PolicyConfig& cfg,
                                 std::size_t n_samples, std::uint64_t seed);

/// unified_utility at every grid point, all on the same sample set.
std::vector<UtilityBreakdown> utility_curve(const ScenarioSpec& env,
                                            const PolicyConfig& cfg,
                                            std::span<const double> grid,
                                            std::size_t n_samples,
                                            std::uint64_t seed);

struct PolicyOptimum {
  double epsilon_star = 0.0;
  double total_at_star = 0.0;
  std::size_t index = 0;
  std::vector<UtilityBreakdown> curve;
};

/// Grid argmax of the unified utility; ties go to the smallest ε.
/// The grid must be non-empty and strictly increasing.
PolicyOptimum optimize_policy(const ScenarioSpec& env, const PolicyConfig& cfg,
                              std::span<const double> epsilon_grid,
                              std::size_t n_samples, std::uint64_t seed);

/// Index of the largest total, first one on ties.
std::size_t argmax_utility(std::span<const UtilityBreakdown> curve);

}  // namespace misinfo
