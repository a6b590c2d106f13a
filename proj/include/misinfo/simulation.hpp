#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "misinfo/belief.hpp"
#include "misinfo/random.hpp"

namespace misinfo {

/// How the mean audience belief relates to the truth and the source.
enum class Audience {
  kIndifferent,  ///< no conditioning
  kUneducated,   ///< ‖μ̄ − x_s‖ ≤ ‖μ̄ − x_t‖
  kEducated,     ///< ‖μ̄ − x_s‖ ≥ ‖μ̄ − x_t‖
};

std::string_view to_string(Audience audience);
/// Accepts "indifferent", "uneducated", "educated"; throws InvalidInput.
Audience parse_audience(std::string_view name);

/// Generative setup for experiments. Defaults are the two-dimensional
/// benchmark: Σ = I, Σ_s = 0.5 I, μ_i ~ N(μ̄, 0.1 I), 500 viewers.
struct ScenarioSpec {
  Eigen::Index dim = 2;
  Covariance sigma = Covariance::scaled_identity(2, 1.0);
  Covariance sigma_s = Covariance::scaled_identity(2, 0.5);
  /// Covariance of viewer means around μ̄; positive semi-definite, so the
  /// zero matrix gives a zero-variance audience.
  Mat mu_spread = 0.1 * Mat::Identity(2, 2);
  std::size_t n_viewers = 500;
  Audience audience = Audience::kIndifferent;
  /// Minimum truth-source distance for policy sampling.
  double d_min = 1.1;
  /// Test hook: the source always coincides with the truth.
  bool source_is_truth = false;

  /// Throws InvalidInput / DegenerateModel when fields are inconsistent.
  void validate() const;
};

struct ScenarioDraw {
  Vec x_t;
  Vec x_s;
  Vec mu_bar;
  Population population;
};

/// Uniform direction on the unit sphere in R^dim (normalized Gaussian).
Vec sample_unit_sphere(Rng& rng, Eigen::Index dim);

/// n_viewers viewers sharing spec.sigma and spec.sigma_s, with prior means
/// drawn from N(mu_bar, spec.mu_spread).
Population sample_population(Rng& rng, const ScenarioSpec& spec,
                             const Vec& mu_bar);

/// True when (x_t, x_s, mu_bar) satisfies the audience condition.
bool satisfies_audience(Audience audience, const Vec& x_t, const Vec& x_s,
                        const Vec& mu_bar);

/// Draws x_t, x_s and μ̄ from the unit sphere, resampling until the audience
/// condition holds and ‖x_t − x_s‖ ≥ min_separation, then samples the
/// audience around μ̄. Throws InfeasibleSampling after too many rejections.
ScenarioDraw sample_scenario(Rng& rng, const ScenarioSpec& spec,
                             double min_separation = 0.0);

/// Per-ε statistics across scenario draws of the optimal convergence for a
/// reporter fed the truth (true_*) and one fed a random source (false_*).
struct ConvergenceCurve {
  std::vector<double> epsilons;
  std::vector<double> true_mean;
  std::vector<double> true_std;
  std::vector<double> false_mean;
  std::vector<double> false_std;
  std::size_t n_draws = 0;

  std::size_t size() const { return epsilons.size(); }
};

/// Draw k uses the stream (seed, k), and every ε is evaluated on the same
/// draws. Output is bit-identical for identical arguments.
ConvergenceCurve sweep_epsilon(const ScenarioSpec& spec,
                               std::span<const double> epsilon_grid,
                               std::size_t n_draws, std::uint64_t seed);

/// start, start + step, ... up to stop (inclusive within step/1000).
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace misinfo
