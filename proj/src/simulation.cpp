#include "misinfo/simulation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "misinfo/error.hpp"
#include "misinfo/parallel.hpp"
#include "misinfo/policy.hpp"

namespace misinfo {

namespace {

constexpr std::size_t kMaxRejections = 1'000'000;

// Square-root factor L with L Lᵀ = spread; works for semi-definite input.
Mat spread_factor(const Mat& spread) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(spread);
  const Vec roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

}  // namespace

std::string_view to_string(Audience audience) {
  switch (audience) {
    case Audience::kIndifferent:
      return "indifferent";
    case Audience::kUneducated:
      return "uneducated";
    case Audience::kEducated:
      return "educated";
  }
  return "unknown";
}

Audience parse_audience(std::string_view name) {
  if (name == "indifferent") return Audience::kIndifferent;
  if (name == "uneducated") return Audience::kUneducated;
  if (name == "educated") return Audience::kEducated;
  throw InvalidInput("unknown audience '" + std::string(name) +
                     "' (expected indifferent, uneducated or educated)");
}

void ScenarioSpec::validate() const {
  if (dim < 1) throw InvalidInput("scenario dim must be >= 1");
  if (sigma.dim() != dim || sigma_s.dim() != dim) {
    throw InvalidInput("scenario covariances do not match dim");
  }
  if (mu_spread.rows() != dim || mu_spread.cols() != dim) {
    throw InvalidInput("mu_spread does not match dim");
  }
  if (!mu_spread.allFinite()) throw InvalidInput("mu_spread is not finite");
  if ((mu_spread - mu_spread.transpose()).cwiseAbs().maxCoeff() >
      kStructuralTol) {
    throw DegenerateModel("mu_spread is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(mu_spread, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -kStructuralTol * scale) {
    throw DegenerateModel("mu_spread is not positive semi-definite");
  }
  if (n_viewers < 1) throw InvalidInput("n_viewers must be >= 1");
  if (!(d_min >= 0.0) || !std::isfinite(d_min)) {
    throw InvalidInput("d_min must be finite and non-negative");
  }
}

Vec sample_unit_sphere(Rng& rng, Eigen::Index dim) {
  if (dim < 1) throw InvalidInput("sphere dimension must be >= 1");
  std::normal_distribution<double> normal;
  Vec v(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = normal(rng);
    norm = v.norm();
  } while (!(norm > 1e-300));
  return v / norm;
}

Population sample_population(Rng& rng, const ScenarioSpec& spec,
                             const Vec& mu_bar) {
  spec.validate();
  require_vector(mu_bar, spec.dim, "mu_bar");
  const auto kernel = BeliefKernel::make(spec.sigma, spec.sigma_s);
  const Mat factor = spread_factor(spec.mu_spread);
  std::normal_distribution<double> normal;
  std::vector<ViewerProfile> viewers;
  viewers.reserve(spec.n_viewers);
  Vec z(spec.dim);
  for (std::size_t i = 0; i < spec.n_viewers; ++i) {
    for (Eigen::Index k = 0; k < spec.dim; ++k) z[k] = normal(rng);
    viewers.emplace_back(mu_bar + factor * z, kernel);
  }
  return Population(std::move(viewers));
}

bool satisfies_audience(Audience audience, const Vec& x_t, const Vec& x_s,
                        const Vec& mu_bar) {
  switch (audience) {
    case Audience::kIndifferent:
      return true;
    case Audience::kUneducated:
      return (mu_bar - x_s).norm() <= (mu_bar - x_t).norm();
    case Audience::kEducated:
      return (mu_bar - x_s).norm() >= (mu_bar - x_t).norm();
  }
  return false;
}

ScenarioDraw sample_scenario(Rng& rng, const ScenarioSpec& spec,
                             double min_separation) {
  spec.validate();
  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    Vec x_t = sample_unit_sphere(rng, spec.dim);
    Vec x_s = sample_unit_sphere(rng, spec.dim);
    Vec mu_bar = sample_unit_sphere(rng, spec.dim);
    if (spec.source_is_truth) x_s = x_t;
    if ((x_t - x_s).norm() < min_separation) continue;
    if (!satisfies_audience(spec.audience, x_t, x_s, mu_bar)) continue;
    Population pop = sample_population(rng, spec, mu_bar);
    return ScenarioDraw{std::move(x_t), std::move(x_s), std::move(mu_bar),
                        std::move(pop)};
  }
  throw InfeasibleSampling("no scenario satisfied the audience/separation "
                           "conditions after " +
                           std::to_string(kMaxRejections) + " attempts");
}

ConvergenceCurve sweep_epsilon(const ScenarioSpec& spec,
                               std::span<const double> epsilon_grid,
                               std::size_t n_draws, std::uint64_t seed) {
  spec.validate();
  if (epsilon_grid.empty()) throw InvalidInput("epsilon grid is empty");
  for (double eps : epsilon_grid) {
    if (!(eps > 0.0)) throw InvalidInput("epsilon grid values must be > 0");
  }
  if (n_draws == 0) throw InvalidInput("n_draws must be >= 1");

  const std::size_t n_eps = epsilon_grid.size();
  // Row-major [draw][epsilon].
  std::vector<double> truth(n_draws * n_eps);
  std::vector<double> falsehood(n_draws * n_eps);
  parallel_for(n_draws, [&](std::size_t k) {
    Rng rng = make_stream(seed, StreamTag::kScenario, k);
    const ScenarioDraw draw = sample_scenario(rng, spec);
    const ReporterMoments m = population_moments(draw.population);
    for (std::size_t e = 0; e < n_eps; ++e) {
      const double eps = epsilon_grid[e];
      truth[k * n_eps + e] =
          convergence_stat(draw.population, m, draw.x_t, draw.x_t, eps).mean;
      falsehood[k * n_eps + e] =
          convergence_stat(draw.population, m, draw.x_s, draw.x_t, eps).mean;
    }
  });

  ConvergenceCurve curve;
  curve.n_draws = n_draws;
  curve.epsilons.assign(epsilon_grid.begin(), epsilon_grid.end());
  std::vector<double> column(n_draws);
  for (std::size_t e = 0; e < n_eps; ++e) {
    for (std::size_t k = 0; k < n_draws; ++k) column[k] = truth[k * n_eps + e];
    const SampleStats t = summarize(column);
    for (std::size_t k = 0; k < n_draws; ++k) {
      column[k] = falsehood[k * n_eps + e];
    }
    const SampleStats f = summarize(column);
    curve.true_mean.push_back(t.mean);
    curve.true_std.push_back(t.std);
    curve.false_mean.push_back(f.mean);
    curve.false_std.push_back(f.std);
  }
  return curve;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw InvalidInput("grid bounds must be finite");
  }
  if (!(step > 0.0)) throw InvalidInput("grid step must be > 0");
  if (!(start <= stop)) throw InvalidInput("grid start must not exceed stop");
  std::vector<double> grid;
  const auto count =
      static_cast<std::size_t>(std::floor((stop - start) / step + 1e-3)) + 1;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to 1e-12 so 0.1:0.1:3.0 yields 0.3 rather than 0.30000000000000004.
    const double value = start + static_cast<double>(i) * step;
    grid.push_back(std::nearbyint(value * 1e12) / 1e12);
  }
  return grid;
}

}  // namespace misinfo
