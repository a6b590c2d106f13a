#include "misinfo/policy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "misinfo/error.hpp"
#include "misinfo/parallel.hpp"

namespace misinfo {

namespace {

constexpr std::size_t kProbeBatch = 100'000;
constexpr double kMinAcceptance = 1e-4;
// E c(x_t, ε) at or below this is treated as zero in the U2 ratio.
constexpr double kZeroConvergence = 1e-12;

struct RawUtility {
  double epsilon = 0.0;
  double u1 = 0.0;
  double u1_std_error = 0.0;
  double u2 = 0.0;
  double u2_std_error = 0.0;
  double true_mean = 0.0;
  double unfiltered_mean = 0.0;
  std::size_t samples = 0;
  bool ratio_defined = false;
};

const RawUtility& require_ratio(const RawUtility& r) {
  if (!r.ratio_defined) {
    throw DegenerateModel(
        "permissiveness ratio undefined: E c(x_t, eps) is zero at eps = " +
        std::to_string(r.epsilon) + " (zero-variance audience?)");
  }
  return r;
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidInput("epsilon grid is empty");
  for (double eps : grid) {
    if (!(eps > 0.0)) throw InvalidInput("epsilon grid values must be > 0");
  }
}

// Estimates the acceptance rate of the conditioned sampler on a dedicated
// stream and refuses to run when it is impractically small.
void probe_acceptance(const ScenarioSpec& env, std::uint64_t seed) {
  if (env.d_min <= 0.0) return;
  Rng rng = make_stream(seed, StreamTag::kPolicyProbe, 0);
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < kProbeBatch; ++i) {
    const Vec x_t = sample_unit_sphere(rng, env.dim);
    Vec x_s = sample_unit_sphere(rng, env.dim);
    const Vec mu_bar = sample_unit_sphere(rng, env.dim);
    if (env.source_is_truth) x_s = x_t;
    if ((x_t - x_s).norm() >= env.d_min &&
        satisfies_audience(env.audience, x_t, x_s, mu_bar)) {
      ++accepted;
    }
  }
  const double rate =
      static_cast<double>(accepted) / static_cast<double>(kProbeBatch);
  if (rate < kMinAcceptance) {
    throw InfeasibleSampling(
        "d_min = " + std::to_string(env.d_min) +
        " is unreachable: acceptance rate " + std::to_string(rate) +
        " over a probe batch of " + std::to_string(kProbeBatch) +
        " (sources lie on the unit sphere, so d_min must stay below 2)");
  }
}

// Draws the sample set once and evaluates every ε on it.
std::vector<RawUtility> evaluate_utilities(const ScenarioSpec& env,
                                           std::span<const double> grid,
                                           std::size_t n_samples,
                                           std::uint64_t seed) {
  env.validate();
  require_grid(grid);
  if (n_samples == 0) throw InvalidInput("n_samples must be >= 1");
  probe_acceptance(env, seed);

  const std::size_t n_eps = grid.size();
  std::vector<double> gap(n_samples * n_eps);
  std::vector<double> truth(n_samples * n_eps);
  std::vector<double> unfiltered(n_samples);
  parallel_for(n_samples, [&](std::size_t k) {
    Rng rng = make_stream(seed, StreamTag::kPolicy, k);
    const ScenarioDraw draw = sample_scenario(rng, env, env.d_min);
    const Population& pop = draw.population;
    const ReporterMoments m = population_moments(pop);
    unfiltered[k] =
        convergence_stat(pop, m, draw.x_t, draw.x_t, kUnconstrained).mean;
    for (std::size_t e = 0; e < n_eps; ++e) {
      const double c_true =
          convergence_stat(pop, m, draw.x_t, draw.x_t, grid[e]).mean;
      const double c_false =
          convergence_stat(pop, m, draw.x_s, draw.x_t, grid[e]).mean;
      truth[k * n_eps + e] = c_true;
      gap[k * n_eps + e] = c_false - c_true;
    }
  });

  const SampleStats unfiltered_stats = summarize(unfiltered);
  std::vector<RawUtility> out(n_eps);
  std::vector<double> column(n_samples);
  for (std::size_t e = 0; e < n_eps; ++e) {
    for (std::size_t k = 0; k < n_samples; ++k) column[k] = gap[k * n_eps + e];
    const SampleStats g = summarize(column);
    for (std::size_t k = 0; k < n_samples; ++k) {
      column[k] = truth[k * n_eps + e];
    }
    const SampleStats t = summarize(column);
    RawUtility& r = out[e];
    r.epsilon = grid[e];
    r.u1 = g.mean;
    r.u1_std_error = g.std_error();
    r.true_mean = t.mean;
    r.unfiltered_mean = unfiltered_stats.mean;
    r.ratio_defined = t.mean > kZeroConvergence;
    r.u2 = r.ratio_defined ? unfiltered_stats.mean / t.mean
                           : std::numeric_limits<double>::quiet_NaN();
    if (r.ratio_defined) {
      // Delta method for a ratio of means on paired samples.
      for (std::size_t k = 0; k < n_samples; ++k) {
        column[k] = unfiltered[k] - r.u2 * truth[k * n_eps + e];
      }
      r.u2_std_error = summarize(column).std_error() / t.mean;
    }
    r.samples = n_samples;
  }
  return out;
}

}  // namespace

void PolicyConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("policy epsilon must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("policy beta must be finite and >= 0");
  }
  if (!(d_min >= 0.0) || !std::isfinite(d_min)) {
    throw InvalidInput("policy d_min must be finite and >= 0");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidInput("policy delta must be finite and >= 0");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidInput("policy alpha must lie in (0, 1]");
  }
}

bool is_admissible(const Vec& y, const Vec& x_t, double epsilon) {
  require_vector(y, x_t.size(), "y");
  return (y - x_t).norm() <= epsilon;
}

SampleStats convergence_stat(const Population& pop, const Vec& x_s,
                             const Vec& x_t, double epsilon) {
  return convergence_stat(pop, population_moments(pop), x_s, x_t, epsilon);
}

SampleStats convergence_stat(const Population& pop, const ReporterMoments& m,
                             const Vec& x_s, const Vec& x_t, double epsilon) {
  const ReportDesign design = optimal_report(m, x_s, x_t, epsilon);
  return population_conveyance(pop, x_s, design.y_star);
}

double utility_separation(const ScenarioSpec& env, double epsilon,
                          std::size_t n_samples, std::uint64_t seed) {
  const double grid[] = {epsilon};
  return evaluate_utilities(env, grid, n_samples, seed).front().u1;
}

double utility_permissiveness(const ScenarioSpec& env, double epsilon,
                              std::size_t n_samples, std::uint64_t seed) {
  const double grid[] = {epsilon};
  return require_ratio(evaluate_utilities(env, grid, n_samples, seed).front())
      .u2;
}

std::vector<UtilityBreakdown> utility_curve(const ScenarioSpec& env,
                                            const PolicyConfig& cfg,
                                            std::span<const double> grid,
                                            std::size_t n_samples,
                                            std::uint64_t seed) {
  cfg.validate();
  ScenarioSpec conditioned = env;
  conditioned.d_min = cfg.d_min;
  const std::vector<RawUtility> raw =
      evaluate_utilities(conditioned, grid, n_samples, seed);
  std::vector<UtilityBreakdown> curve;
  curve.reserve(raw.size());
  for (std::size_t e = 0; e < raw.size(); ++e) {
    require_ratio(raw[e]);
    UtilityBreakdown b;
    b.epsilon = grid[e];
    b.u1 = raw[e].u1;
    b.u1_std_error = raw[e].u1_std_error;
    b.u2 = raw[e].u2;
    b.u2_std_error = raw[e].u2_std_error;
    b.total = b.u1 + cfg.beta * b.u2;
    b.true_mean = raw[e].true_mean;
    b.unfiltered_mean = raw[e].unfiltered_mean;
    b.samples_used = raw[e].samples;
    b.u1_pass_delta = b.u1 >= cfg.delta;
    b.u2_pass_alpha = b.u2 >= cfg.alpha;
    curve.push_back(b);
  }
  return curve;
}

UtilityBreakdown unified_utility(const ScenarioSpec& env,
                                 const PolicyConfig& cfg,
                                 std::size_t n_samples, std::uint64_t seed) {
  const double grid[] = {cfg.epsilon};
  return utility_curve(env, cfg, grid, n_samples, seed).front();
}

std::size_t argmax_utility(std::span<const UtilityBreakdown> curve) {
  if (curve.empty()) throw InvalidInput("utility curve is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].total > curve[best].total) best = i;
  }
  return best;
}

PolicyOptimum optimize_policy(const ScenarioSpec& env, const PolicyConfig& cfg,
                              std::span<const double> epsilon_grid,
                              std::size_t n_samples, std::uint64_t seed) {
  require_grid(epsilon_grid);
  for (std::size_t i = 1; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > epsilon_grid[i - 1])) {
      throw InvalidInput("epsilon grid must be strictly increasing");
    }
  }
  PolicyOptimum opt;
  opt.curve = utility_curve(env, cfg, epsilon_grid, n_samples, seed);
  opt.index = argmax_utility(opt.curve);
  opt.epsilon_star = opt.curve[opt.index].epsilon;
  opt.total_at_star = opt.curve[opt.index].total;
  return opt;
}

}  // namespace misinfo
