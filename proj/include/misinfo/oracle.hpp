#pragma once

#include <cstddef>
#include <string_view>

#include "misinfo/random.hpp"
#include "misinfo/reporter.hpp"

namespace misinfo {

// Brute-force reference solvers for the filtered reporter problem. They only
// ever evaluate expected_sq_objective (or its per-viewer gradient) on the
// population itself and never touch ReporterMoments, so they check the
// closed-form path from the outside.

enum class OracleMethod { kGrid, kProjectedDescent };

std::string_view to_string(OracleMethod method);

struct OracleResult {
  Vec y_best;
  double objective = 0.0;
  OracleMethod method = OracleMethod::kGrid;
  std::size_t evaluations = 0;
};

struct DescentSchedule {
  double step = 0.05;
  std::size_t iterations = 10'000;
};

/// Euclidean projection of y onto the closed ball of `radius` around center.
Vec project_to_ball(const Vec& y, const Vec& center, double radius);

/// kGrid: exhaustive search over the cubic lattice of spacing `resolution`
/// centred on x_t, restricted to the ε-ball (dim ≤ 3), plus the points where
/// the lattice lines cross the ball's boundary. kProjectedDescent:
/// gradient steps on the expected squared residual with projection onto the
/// ball; `resolution` is ignored.
OracleResult brute_force_report(const Population& pop, const Vec& x_s,
                                const Vec& x_t, double epsilon,
                                double resolution,
                                OracleMethod method = OracleMethod::kGrid);

OracleResult projected_descent_report(const Population& pop, const Vec& x_s,
                                      const Vec& x_t, double epsilon,
                                      const DescentSchedule& schedule = {});

/// True iff both objectives are finite and agree within tol.
bool compare(const ReportDesign& design, const OracleResult& oracle,
             double tol);

/// A random validation problem: per-viewer covariances with eigenvalues in
/// [0.2, 3], prior means around a random unit vector, unit-sphere x_s and
/// x_t, and ε uniform in [0.1, 2].
struct OracleInstance {
  Population population;
  Vec x_s;
  Vec x_t;
  double epsilon = 0.0;
};

/// SPD matrix with a random eigenbasis and eigenvalues uniform in [lo, hi].
Mat random_spd(Rng& rng, Eigen::Index dim, double lo, double hi);

OracleInstance random_instance(Rng& rng, Eigen::Index dim,
                               std::size_t n_viewers = 5);

}  // namespace misinfo
