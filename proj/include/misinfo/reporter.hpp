#pragma once

#include <limits>

#include "misinfo/belief.hpp"

namespace misinfo {

/// Filter radius meaning "no filter": the reporter solves with λ = 0.
inline constexpr double kUnconstrained = std::numeric_limits<double>::infinity();

/// Audience statistics a well-informed reporter needs. All fields are
/// empirical means over the population.
struct ReporterMoments {
  Mat a2;               ///< E[A_iᵀ A_i]
  Vec abmu;             ///< E[A_iᵀ B_i μ_i]
  Mat at;               ///< E[A_iᵀ]
  Vec bmu;              ///< E[B_i μ_i]
  double bmu_sq = 0.0;  ///< E[‖B_i μ_i‖²]

  Eigen::Index dim() const { return a2.rows(); }
};

ReporterMoments population_moments(const Population& pop);

/// Stationary point of E‖A_i y + B_i μ_i − x_s‖² + λ‖y − x_t‖²:
/// y = (a2 + λI)⁻¹ (λ x_t + at x_s − abmu).
/// Throws DegenerateModel when a2 + λI is singular (only possible at λ = 0).
Vec report_for_lambda(const ReporterMoments& m, const Vec& x_s, const Vec& x_t,
                      double lambda);

/// (a2 + λI) y + abmu − at x_s − λ x_t; zero at the optimal report.
Vec lagrangian_gradient(const ReporterMoments& m, const Vec& y, const Vec& x_s,
                        const Vec& x_t, double lambda);

/// E‖A_i y + B_i μ_i − x_s‖² evaluated from the moments alone.
double moment_objective(const ReporterMoments& m, const Vec& y, const Vec& x_s);

/// E‖A_i y + B_i μ_i − x_s‖² evaluated viewer by viewer.
double expected_sq_objective(const Population& pop, const Vec& y,
                             const Vec& x_s);

struct ReportDesign {
  Vec y_star;
  double lambda_star = 0.0;
  /// Expected squared residual at y_star.
  double objective = 0.0;
  /// True when the filter is active (λ* > 0).
  bool binding = false;
  /// Bracket doublings plus bisection steps spent on λ.
  int iterations = 0;
};

struct MultiplierSearch {
  /// Absolute tolerance on ‖y(λ) − x_t‖ − ε.
  double tolerance = 1e-8;
  int max_iterations = 200;
};

/// Minimizes the expected squared residual subject to ‖y − x_t‖ ≤ ε by
/// picking the smallest λ ≥ 0 whose stationary report is admissible.
/// `epsilon` may be kUnconstrained.
/// Throws InvalidInput for ε ≤ 0, DegenerateModel for a singular a2 and
/// ConvergenceFailure when the λ search exhausts its iteration budget.
ReportDesign optimal_report(const ReporterMoments& m, const Vec& x_s,
                            const Vec& x_t, double epsilon,
                            const MultiplierSearch& search = {});

/// Closed form for shared covariances without a filter:
/// x_s + Σ_s Σ⁻¹ (x_s − μ̄).
Vec ergodic_unconstrained_report(const Covariance& sigma,
                                 const Covariance& sigma_s, const Vec& mu_bar,
                                 const Vec& x_s);

}  // namespace misinfo
