#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>
#include <string_view>
#include <vector>

#include "misinfo/stats.hpp"

namespace misinfo {

/// Information coordinates: truth, source, report, prior means, beliefs.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Absolute max-entry tolerance for symmetry and identity checks.
inline constexpr double kStructuralTol = 1e-10;

/// Throws InvalidInput unless v has `dim` finite entries.
void require_vector(const Vec& v, Eigen::Index dim, std::string_view name);

/// Throws InvalidInput unless v is non-empty with finite entries.
void require_finite(const Vec& v, std::string_view name);

/// Symmetric positive-definite n x n matrix, validated on construction.
class Covariance {
 public:
  /// Throws InvalidInput on shape or non-finite entries, DegenerateModel
  /// when the matrix is asymmetric beyond kStructuralTol or not positive
  /// definite.
  explicit Covariance(Mat matrix);

  static Covariance scaled_identity(Eigen::Index dim, double scale);
  static Covariance diagonal(const Vec& entries);

  const Mat& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Σ⁻¹ via the Cholesky factor.
  Mat inverse() const;
  /// Σ⁻¹ b.
  Vec solve(const Vec& b) const;

  friend bool operator==(const Covariance& a, const Covariance& b) {
    return a.matrix_ == b.matrix_;
  }

 private:
  Mat matrix_;
  Eigen::LLT<Mat> llt_;
};

/// Posterior weights on the report (a) and on the prior mean (b).
struct GainPair {
  Mat a;
  Mat b;
};

/// a = (Σ⁻¹ + Σ_s⁻¹)⁻¹ Σ_s⁻¹ and b = (Σ⁻¹ + Σ_s⁻¹)⁻¹ Σ⁻¹; a + b = I.
GainPair gain_matrices(const Covariance& sigma, const Covariance& sigma_s);

/// Covariances and their gains, shared by every viewer that has them.
struct BeliefKernel {
  Covariance sigma;
  Covariance sigma_s;
  Mat gain_a;
  Mat gain_b;

  static std::shared_ptr<const BeliefKernel> make(Covariance sigma,
                                                  Covariance sigma_s);
};

/// One viewer: Gaussian prior N(mu, sigma) and source-noise covariance
/// sigma_s. Immutable; the gains are computed once.
class ViewerProfile {
 public:
  ViewerProfile(Vec mu, Covariance sigma, Covariance sigma_s);
  ViewerProfile(Vec mu, std::shared_ptr<const BeliefKernel> kernel);

  const Vec& mu() const { return mu_; }
  const Covariance& sigma() const { return kernel_->sigma; }
  const Covariance& sigma_s() const { return kernel_->sigma_s; }
  const Mat& gain_a() const { return kernel_->gain_a; }
  const Mat& gain_b() const { return kernel_->gain_b; }
  /// gain_b * mu, the report-independent part of the adopted belief.
  const Vec& prior_pull() const { return prior_pull_; }
  Eigen::Index dim() const { return mu_.size(); }
  const std::shared_ptr<const BeliefKernel>& kernel() const { return kernel_; }

 private:
  Vec mu_;
  std::shared_ptr<const BeliefKernel> kernel_;
  Vec prior_pull_;
};

/// Finite audience standing in for the viewer distribution.
class Population {
 public:
  /// Throws InvalidInput when empty or when dimensions disagree.
  explicit Population(std::vector<ViewerProfile> viewers);

  std::size_t size() const { return viewers_.size(); }
  Eigen::Index dim() const { return viewers_.front().dim(); }
  const std::vector<ViewerProfile>& viewers() const { return viewers_; }
  const ViewerProfile& operator[](std::size_t i) const { return viewers_[i]; }
  /// True when every viewer has the same sigma and sigma_s.
  bool ergodic() const { return ergodic_; }
  /// Empirical mean of the prior means.
  Vec mean_prior() const;

 private:
  std::vector<ViewerProfile> viewers_;
  bool ergodic_ = false;
};

/// Adopted (MAP) belief after seeing report y: gain_a y + gain_b mu.
Vec posterior_belief(const ViewerProfile& profile, const Vec& y);

/// ‖x_s − zeta‖.
double conveyance_distance(const Vec& x_s, const Vec& zeta);

/// Mean and std over viewers of ‖x_s − ζ_i(y)‖.
SampleStats population_conveyance(const Population& pop, const Vec& x_s,
                                  const Vec& y);

}  // namespace misinfo
