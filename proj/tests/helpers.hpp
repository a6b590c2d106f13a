#pragma once

#include <cmath>
#include <vector>

#include "misinfo/belief.hpp"

namespace test {

using misinfo::Covariance;
using misinfo::Mat;
using misinfo::Population;
using misinfo::Vec;
using misinfo::ViewerProfile;

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline ViewerProfile iso_viewer(const Vec& mu, double sigma = 1.0,
                                double sigma_s = 0.5) {
  const auto dim = mu.size();
  return ViewerProfile(mu, Covariance::scaled_identity(dim, sigma),
                       Covariance::scaled_identity(dim, sigma_s));
}

inline Population single(const Vec& mu, double sigma = 1.0,
                         double sigma_s = 0.5) {
  return Population({iso_viewer(mu, sigma, sigma_s)});
}

/// Plain 2x2 inverse written out by hand, independent of the library.
inline Mat inv2(const Mat& m) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Mat out(2, 2);
  out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return out / det;
}

}  // namespace test
