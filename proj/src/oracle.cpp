#include "misinfo/oracle.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <string>

#include "misinfo/error.hpp"
#include "misinfo/simulation.hpp"

namespace misinfo {

namespace {

constexpr double kMaxLatticePoints = 5e8;

// Exact quadratic model f(x_t + u) = uᵀQu + gᵀu + c of the expected squared
// residual, recovered from 1 + n + n(n+1)/2 evaluations on the population.
struct Quadratic {
  Mat q;
  Vec g;
  double c = 0.0;

  double operator()(const Vec& u) const {
    double value = c;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      double row = g[i];
      for (Eigen::Index j = 0; j < u.size(); ++j) row += q(i, j) * u[j];
      value += row * u[i];
    }
    return value;
  }
};

Quadratic fit_objective(const Population& pop, const Vec& x_s, const Vec& x_t,
                        std::size_t& evaluations) {
  const auto n = x_t.size();
  auto f = [&](const Vec& u) {
    ++evaluations;
    return expected_sq_objective(pop, x_t + u, x_s);
  };
  Quadratic quad{Mat::Zero(n, n), Vec::Zero(n), 0.0};
  quad.c = f(Vec::Zero(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    const double plus = f(e);
    const double minus = f(-e);
    quad.q(i, i) = 0.5 * (plus + minus - 2.0 * quad.c);
    quad.g[i] = 0.5 * (plus - minus);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double both = f(Vec::Unit(n, i) + Vec::Unit(n, j));
      const double off = 0.5 * (both - quad.q(i, i) - quad.q(j, j) -
                                quad.g[i] - quad.g[j] - quad.c);
      quad.q(i, j) = off;
      quad.q(j, i) = off;
    }
  }
  return quad;
}

struct LatticeSearch {
  const Quadratic& quad;
  double spacing;
  double radius_sq;
  Vec u;
  Vec best_u;
  double best = std::numeric_limits<double>::infinity();
  std::size_t visited = 0;

  void consider() {
    ++visited;
    const double value = quad(u);
    if (value < best) {
      best = value;
      best_u = u;
    }
  }

  // Enumerates lattice offsets on every axis except `skip`, given the squared
  // length used by the earlier axes. With skip = -1 this visits the lattice
  // points inside the ball; otherwise coordinate `skip` is solved for so the
  // point lands on the sphere, giving where the lattice lines parallel to
  // that axis cross the boundary.
  void scan(Eigen::Index axis, double used_sq, Eigen::Index skip) {
    if (axis == skip) {
      scan(axis + 1, used_sq, skip);
      return;
    }
    if (axis == u.size()) {
      if (skip < 0) {
        consider();
      } else {
        const double h = std::sqrt(std::max(0.0, radius_sq - used_sq));
        for (double sign : {-1.0, 1.0}) {
          u[skip] = sign * h;
          consider();
        }
        u[skip] = 0.0;
      }
      return;
    }
    const double room = radius_sq - used_sq;
    const auto reach = static_cast<long>(std::floor(std::sqrt(room) / spacing));
    for (long k = -reach; k <= reach; ++k) {
      const double offset = static_cast<double>(k) * spacing;
      const double len_sq = used_sq + offset * offset;
      if (len_sq > radius_sq) continue;
      u[axis] = offset;
      scan(axis + 1, len_sq, skip);
    }
    u[axis] = 0.0;
  }
};

void require_problem(const Population& pop, const Vec& x_s, const Vec& x_t,
                     double epsilon) {
  require_vector(x_s, pop.dim(), "x_s");
  require_vector(x_t, pop.dim(), "x_t");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("oracle epsilon must be finite and > 0");
  }
}

}  // namespace

std::string_view to_string(OracleMethod method) {
  return method == OracleMethod::kGrid ? "grid" : "projected_descent";
}

Vec project_to_ball(const Vec& y, const Vec& center, double radius) {
  const Vec offset = y - center;
  const double dist = offset.norm();
  if (dist <= radius) return y;
  return center + (radius / dist) * offset;
}

OracleResult brute_force_report(const Population& pop, const Vec& x_s,
                                const Vec& x_t, double epsilon,
                                double resolution, OracleMethod method) {
  if (method == OracleMethod::kProjectedDescent) {
    return projected_descent_report(pop, x_s, x_t, epsilon);
  }
  require_problem(pop, x_s, x_t, epsilon);
  const auto n = pop.dim();
  if (n > 3) throw InvalidInput("grid oracle supports dim <= 3");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidInput("grid resolution must be finite and > 0");
  }
  if (std::pow(2.0 * epsilon / resolution + 1.0, static_cast<double>(n)) >
      kMaxLatticePoints) {
    throw InvalidInput("grid resolution too fine for this epsilon");
  }

  OracleResult result;
  result.method = OracleMethod::kGrid;
  const Quadratic quad = fit_objective(pop, x_s, x_t, result.evaluations);
  LatticeSearch search{quad, resolution, epsilon * epsilon, Vec::Zero(n),
                       Vec::Zero(n)};
  search.scan(0, 0.0, -1);
  // A binding optimum sits on the sphere, where interior lattice points can
  // all be nearly a full spacing deep; sample the boundary as well.
  for (Eigen::Index axis = 0; axis < n; ++axis) search.scan(0, 0.0, axis);
  result.evaluations += search.visited;
  result.y_best = x_t + search.best_u;
  result.objective = expected_sq_objective(pop, result.y_best, x_s);
  ++result.evaluations;
  return result;
}

OracleResult projected_descent_report(const Population& pop, const Vec& x_s,
                                      const Vec& x_t, double epsilon,
                                      const DescentSchedule& schedule) {
  require_problem(pop, x_s, x_t, epsilon);
  if (!(schedule.step > 0.0)) throw InvalidInput("descent step must be > 0");
  const auto n = pop.dim();
  const double scale = 2.0 / static_cast<double>(pop.size());
  Vec y = x_t;
  Vec gradient(n);
  Vec residual(n);
  for (std::size_t it = 0; it < schedule.iterations; ++it) {
    gradient.setZero();
    for (const auto& v : pop.viewers()) {
      residual.noalias() = v.gain_a() * y;
      residual += v.prior_pull() - x_s;
      gradient.noalias() += v.gain_a().transpose() * residual;
    }
    y = project_to_ball(y - schedule.step * scale * gradient, x_t, epsilon);
  }
  OracleResult result;
  result.method = OracleMethod::kProjectedDescent;
  result.y_best = y;
  result.objective = expected_sq_objective(pop, y, x_s);
  result.evaluations = schedule.iterations + 1;
  return result;
}

bool compare(const ReportDesign& design, const OracleResult& oracle,
             double tol) {
  if (!std::isfinite(design.objective) || !std::isfinite(oracle.objective)) {
    return false;
  }
  return std::abs(design.objective - oracle.objective) <= tol;
}

Mat random_spd(Rng& rng, Eigen::Index dim, double lo, double hi) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(lo, hi);
  Mat g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = normal(rng);
  }
  const Mat basis = Eigen::HouseholderQR<Mat>(g).householderQ();
  Vec eigenvalues(dim);
  for (Eigen::Index i = 0; i < dim; ++i) eigenvalues[i] = uniform(rng);
  Mat spd = basis * eigenvalues.asDiagonal() * basis.transpose();
  return 0.5 * (spd + spd.transpose());
}

OracleInstance random_instance(Rng& rng, Eigen::Index dim,
                               std::size_t n_viewers) {
  if (n_viewers == 0) throw InvalidInput("instance needs at least one viewer");
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.1, 2.0);
  const Vec mu_bar = sample_unit_sphere(rng, dim);
  std::vector<ViewerProfile> viewers;
  viewers.reserve(n_viewers);
  for (std::size_t i = 0; i < n_viewers; ++i) {
    Covariance sigma(random_spd(rng, dim, 0.2, 3.0));
    Covariance sigma_s(random_spd(rng, dim, 0.2, 3.0));
    Vec mu(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      mu[k] = mu_bar[k] + std::sqrt(0.1) * normal(rng);
    }
    viewers.emplace_back(std::move(mu), std::move(sigma), std::move(sigma_s));
  }
  Vec x_s = sample_unit_sphere(rng, dim);
  Vec x_t = sample_unit_sphere(rng, dim);
  const double epsilon = radius(rng);
  return OracleInstance{Population(std::move(viewers)), std::move(x_s),
                        std::move(x_t), epsilon};
}

}  // namespace misinfo
