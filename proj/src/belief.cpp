#include "misinfo/belief.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "misinfo/error.hpp"

namespace misinfo {

void require_finite(const Vec& v, std::string_view name) {
  if (v.size() == 0) {
    throw InvalidInput(std::string(name) + ": empty vector");
  }
  if (!v.allFinite()) {
    throw InvalidInput(std::string(name) + ": non-finite entry");
  }
}

void require_vector(const Vec& v, Eigen::Index dim, std::string_view name) {
  if (v.size() != dim) {
    throw InvalidInput(std::string(name) + ": expected length " +
                       std::to_string(dim) + ", got " +
                       std::to_string(v.size()));
  }
  require_finite(v, name);
}

Covariance::Covariance(Mat matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw InvalidInput("covariance must be a non-empty square matrix");
  }
  if (!matrix_.allFinite()) {
    throw InvalidInput("covariance has a non-finite entry");
  }
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kStructuralTol) {
    throw DegenerateModel("covariance is not symmetric (max |M - M^T| = " +
                          std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(matrix_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    throw DegenerateModel("covariance is not positive definite");
  }
  llt_.compute(matrix_);
  if (llt_.info() != Eigen::Success) {
    throw DegenerateModel("covariance Cholesky factorization failed");
  }
}

Covariance Covariance::scaled_identity(Eigen::Index dim, double scale) {
  return Covariance(scale * Mat::Identity(dim, dim));
}

Covariance Covariance::diagonal(const Vec& entries) {
  return Covariance(entries.asDiagonal().toDenseMatrix());
}

Mat Covariance::inverse() const {
  return llt_.solve(Mat::Identity(dim(), dim()));
}

Vec Covariance::solve(const Vec& b) const {
  require_vector(b, dim(), "rhs");
  return llt_.solve(b);
}

GainPair gain_matrices(const Covariance& sigma, const Covariance& sigma_s) {
  if (sigma.dim() != sigma_s.dim()) {
    throw InvalidInput("sigma and sigma_s dimensions differ");
  }
  const Mat prior_precision = sigma.inverse();
  const Mat source_precision = sigma_s.inverse();
  Mat posterior_precision = prior_precision + source_precision;
  posterior_precision =
      0.5 * (posterior_precision + posterior_precision.transpose());
  Eigen::LLT<Mat> llt(posterior_precision);
  if (llt.info() != Eigen::Success) {
    throw DegenerateModel("posterior precision is not positive definite");
  }
  return GainPair{llt.solve(source_precision), llt.solve(prior_precision)};
}

std::shared_ptr<const BeliefKernel> BeliefKernel::make(Covariance sigma,
                                                       Covariance sigma_s) {
  GainPair gains = gain_matrices(sigma, sigma_s);
  return std::make_shared<const BeliefKernel>(
      BeliefKernel{std::move(sigma), std::move(sigma_s), std::move(gains.a),
                   std::move(gains.b)});
}

ViewerProfile::ViewerProfile(Vec mu, Covariance sigma, Covariance sigma_s)
    : ViewerProfile(std::move(mu),
                    BeliefKernel::make(std::move(sigma), std::move(sigma_s))) {}

ViewerProfile::ViewerProfile(Vec mu, std::shared_ptr<const BeliefKernel> kernel)
    : mu_(std::move(mu)), kernel_(std::move(kernel)) {
  if (!kernel_) throw InvalidInput("viewer kernel is null");
  require_vector(mu_, kernel_->sigma.dim(), "mu");
  prior_pull_ = kernel_->gain_b * mu_;
}

Population::Population(std::vector<ViewerProfile> viewers)
    : viewers_(std::move(viewers)) {
  if (viewers_.empty()) throw InvalidInput("population is empty");
  const auto n = viewers_.front().dim();
  const auto& first = viewers_.front().kernel();
  ergodic_ = true;
  for (const auto& v : viewers_) {
    if (v.dim() != n) throw InvalidInput("population dimensions disagree");
    if (v.kernel() != first && !(v.sigma() == first->sigma &&
                                 v.sigma_s() == first->sigma_s)) {
      ergodic_ = false;
    }
  }
}

Vec Population::mean_prior() const {
  Vec sum = Vec::Zero(dim());
  for (const auto& v : viewers_) sum += v.mu();
  return sum / static_cast<double>(size());
}

Vec posterior_belief(const ViewerProfile& profile, const Vec& y) {
  require_vector(y, profile.dim(), "y");
  return profile.gain_a() * y + profile.prior_pull();
}

double conveyance_distance(const Vec& x_s, const Vec& zeta) {
  require_vector(zeta, x_s.size(), "zeta");
  return (x_s - zeta).norm();
}

SampleStats population_conveyance(const Population& pop, const Vec& x_s,
                                  const Vec& y) {
  const auto n = pop.dim();
  require_vector(x_s, n, "x_s");
  require_vector(y, n, "y");
  std::vector<double> distances(pop.size());
  // A y is shared by all viewers with the same kernel.
  const BeliefKernel* cached = nullptr;
  Vec shift(n);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const ViewerProfile& v = pop[i];
    if (v.kernel().get() != cached) {
      cached = v.kernel().get();
      shift.noalias() = v.gain_a() * y;
      shift -= x_s;
    }
    distances[i] = (shift + v.prior_pull()).norm();
  }
  return summarize(distances);
}

}  // namespace misinfo
