#include "misinfo/reporter.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "misinfo/error.hpp"

namespace misinfo {

namespace {

// Relative eigenvalue floor below which a2 is treated as singular.
constexpr double kSingularRatio = 1e-14;

void require_moments(const ReporterMoments& m) {
  const auto n = m.a2.rows();
  if (n == 0 || m.a2.cols() != n || m.at.rows() != n || m.at.cols() != n ||
      m.abmu.size() != n || m.bmu.size() != n) {
    throw InvalidInput("reporter moments have inconsistent shapes");
  }
}

}  // namespace

ReporterMoments population_moments(const Population& pop) {
  const auto n = pop.dim();
  ReporterMoments m{Mat::Zero(n, n), Vec::Zero(n), Mat::Zero(n, n),
                    Vec::Zero(n), 0.0};
  const BeliefKernel* cached = nullptr;
  Mat ata(n, n);
  for (const auto& v : pop.viewers()) {
    if (v.kernel().get() != cached) {
      cached = v.kernel().get();
      ata.noalias() = v.gain_a().transpose() * v.gain_a();
    }
    m.a2 += ata;
    m.abmu.noalias() += v.gain_a().transpose() * v.prior_pull();
    m.at += v.gain_a().transpose();
    m.bmu += v.prior_pull();
    m.bmu_sq += v.prior_pull().squaredNorm();
  }
  const double inv = 1.0 / static_cast<double>(pop.size());
  m.a2 *= inv;
  m.a2 = 0.5 * (m.a2 + m.a2.transpose());
  m.abmu *= inv;
  m.at *= inv;
  m.bmu *= inv;
  m.bmu_sq *= inv;
  return m;
}

Vec report_for_lambda(const ReporterMoments& m, const Vec& x_s, const Vec& x_t,
                      double lambda) {
  require_moments(m);
  require_vector(x_s, m.dim(), "x_s");
  require_vector(x_t, m.dim(), "x_t");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("lambda must be finite and non-negative");
  }
  Mat hessian = m.a2;
  hessian.diagonal().array() += lambda;
  Eigen::LDLT<Mat> ldlt(hessian);
  const Vec diag = ldlt.vectorD();
  const double scale = std::max(1.0, diag.cwiseAbs().maxCoeff());
  if (ldlt.info() != Eigen::Success || diag.minCoeff() <= kSingularRatio * scale) {
    throw DegenerateModel(
        "a2 + lambda*I is singular; the audience has a degenerate gain");
  }
  const Vec rhs = lambda * x_t + m.at * x_s - m.abmu;
  return ldlt.solve(rhs);
}

Vec lagrangian_gradient(const ReporterMoments& m, const Vec& y, const Vec& x_s,
                        const Vec& x_t, double lambda) {
  require_moments(m);
  return m.a2 * y + lambda * y + m.abmu - m.at * x_s - lambda * x_t;
}

double moment_objective(const ReporterMoments& m, const Vec& y, const Vec& x_s) {
  require_moments(m);
  require_vector(y, m.dim(), "y");
  require_vector(x_s, m.dim(), "x_s");
  const double value = y.dot(m.a2 * y) + 2.0 * y.dot(m.abmu) -
                       2.0 * y.dot(m.at * x_s) + m.bmu_sq -
                       2.0 * x_s.dot(m.bmu) + x_s.squaredNorm();
  return std::max(0.0, value);
}

double expected_sq_objective(const Population& pop, const Vec& y,
                             const Vec& x_s) {
  require_vector(y, pop.dim(), "y");
  require_vector(x_s, pop.dim(), "x_s");
  double sum = 0.0;
  Vec residual(pop.dim());
  for (const auto& v : pop.viewers()) {
    residual.noalias() = v.gain_a() * y;
    residual += v.prior_pull() - x_s;
    sum += residual.squaredNorm();
  }
  return sum / static_cast<double>(pop.size());
}

ReportDesign optimal_report(const ReporterMoments& m, const Vec& x_s,
                            const Vec& x_t, double epsilon,
                            const MultiplierSearch& search) {
  require_moments(m);
  require_vector(x_s, m.dim(), "x_s");
  require_vector(x_t, m.dim(), "x_t");
  if (!(epsilon > 0.0)) {
    throw InvalidInput("epsilon must be positive");
  }

  ReportDesign design;
  design.y_star = report_for_lambda(m, x_s, x_t, 0.0);
  if ((design.y_star - x_t).norm() <= epsilon) {
    design.objective = moment_objective(m, design.y_star, x_s);
    return design;
  }

  // In the eigenbasis of a2, y(λ) − x_t = V diag(1/(d+λ)) w, so the distance
  // to the truth is a decreasing function of λ that costs O(n) to evaluate.
  Eigen::SelfAdjointEigenSolver<Mat> eig(m.a2);
  const Vec& d = eig.eigenvalues();
  const Vec w =
      eig.eigenvectors().transpose() * (m.at * x_s - m.abmu - m.a2 * x_t);
  auto excess = [&](double lambda) {
    return (w.array() / (d.array() + lambda)).matrix().norm() - epsilon;
  };

  int iterations = 0;
  double lo = 0.0;
  double hi = 1.0;
  double g_hi = excess(hi);
  while (g_hi > 0.0) {
    if (++iterations > search.max_iterations) {
      std::ostringstream msg;
      msg << "lambda bracket not found after " << search.max_iterations
          << " doublings (lambda=" << hi << ", excess=" << g_hi << ")";
      throw ConvergenceFailure(msg.str());
    }
    lo = hi;
    hi *= 2.0;
    g_hi = excess(hi);
  }
  int bisections = 0;
  while (g_hi < -search.tolerance) {
    if (++bisections > search.max_iterations) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "lambda bisection did not converge after "
          << search.max_iterations << " steps: lo=" << lo << " hi=" << hi
          << " excess(lo)=" << excess(lo) << " excess(hi)=" << g_hi
          << " epsilon=" << epsilon;
      throw ConvergenceFailure(msg.str());
    }
    const double mid = 0.5 * (lo + hi);
    const double g_mid = excess(mid);
    if (g_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }

  design.lambda_star = hi;
  design.binding = true;
  design.iterations = iterations + bisections;
  design.y_star = report_for_lambda(m, x_s, x_t, hi);
  design.objective = moment_objective(m, design.y_star, x_s);
  return design;
}

Vec ergodic_unconstrained_report(const Covariance& sigma,
                                 const Covariance& sigma_s, const Vec& mu_bar,
                                 const Vec& x_s) {
  if (sigma.dim() != sigma_s.dim()) {
    throw InvalidInput("sigma and sigma_s dimensions differ");
  }
  require_vector(mu_bar, sigma.dim(), "mu_bar");
  require_vector(x_s, sigma.dim(), "x_s");
  return x_s + sigma_s.matrix() * sigma.solve(x_s - mu_bar);
}

}  // namespace misinfo
