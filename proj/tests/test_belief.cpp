#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "misinfo/error.hpp"
#include "misinfo/oracle.hpp"

using namespace misinfo;
using test::v2;

TEST_SUITE("belief") {

TEST_CASE("covariance validation") {
  CHECK_NOTHROW(Covariance(Mat::Identity(2, 2)));
  Mat asym(2, 2);
  asym << 1.0, 0.2, 0.1, 1.0;
  CHECK_THROWS_AS(Covariance{asym}, DegenerateModel);
  Mat indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(Covariance{indefinite}, DegenerateModel);
  CHECK_THROWS_AS(Covariance{Mat::Zero(2, 2)}, DegenerateModel);
  CHECK_THROWS_AS(Covariance{Mat::Identity(2, 3)}, InvalidInput);
  Mat nan = Mat::Identity(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(Covariance{nan}, InvalidInput);
}

TEST_CASE("gain matrices: worked examples") {
  SUBCASE("isotropic") {
    const auto g = gain_matrices(Covariance::scaled_identity(2, 1.0),
                                 Covariance::scaled_identity(2, 0.5));
    CHECK(test::max_abs(g.a - (2.0 / 3.0) * Mat::Identity(2, 2)) < 1e-12);
    CHECK(test::max_abs(g.b - (1.0 / 3.0) * Mat::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("equal covariances") {
    const auto g = gain_matrices(Covariance::scaled_identity(2, 1.0),
                                 Covariance::scaled_identity(2, 1.0));
    CHECK(test::max_abs(g.a - 0.5 * Mat::Identity(2, 2)) < 1e-12);
    CHECK(test::max_abs(g.b - 0.5 * Mat::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("diagonal, against per-coordinate scalar formula") {
    const Vec s = v2(1.0, 2.0), ss = v2(0.5, 0.5);
    const auto g = gain_matrices(Covariance::diagonal(s), Covariance::diagonal(ss));
    for (int k = 0; k < 2; ++k) {
      CHECK(g.a(k, k) == doctest::Approx(s[k] / (s[k] + ss[k])).epsilon(1e-12));
      CHECK(g.b(k, k) == doctest::Approx(ss[k] / (s[k] + ss[k])).epsilon(1e-12));
    }
    CHECK(g.a(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(g.a(1, 1) == doctest::Approx(4.0 / 5.0));
    CHECK(std::abs(g.a(0, 1)) < 1e-14);
  }
}

TEST_CASE("gain identity and definition hold on random covariances") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat s = random_spd(rng, 2, 0.05, 5.0);
    const Mat ss = random_spd(rng, 2, 0.05, 5.0);
    const auto g = gain_matrices(Covariance(s), Covariance(ss));
    CHECK(test::max_abs(g.a + g.b - Mat::Identity(2, 2)) < 1e-10);
    // Hand-rolled inverse as an independent reference.
    const Mat p = test::inv2(test::inv2(s) + test::inv2(ss));
    CHECK(test::max_abs(g.a - p * test::inv2(ss)) < 1e-10);
    CHECK(test::max_abs(g.b - p * test::inv2(s)) < 1e-10);
  }
}

TEST_CASE("posterior belief examples") {
  const auto p0 = test::iso_viewer(v2(0, 0));
  CHECK(test::max_abs(posterior_belief(p0, v2(3, 0)) - v2(2, 0)) < 1e-12);
  const auto p1 = test::iso_viewer(v2(1, 1));
  CHECK(test::max_abs(posterior_belief(p1, v2(0, 0)) - v2(1.0 / 3, 1.0 / 3)) <
        1e-12);
  // A report that confirms the prior changes nothing.
  Rng rng(3);
  const ViewerProfile p(v2(0.4, -1.3), Covariance(random_spd(rng, 2, 0.2, 3)),
                        Covariance(random_spd(rng, 2, 0.2, 3)));
  CHECK(test::max_abs(posterior_belief(p, p.mu()) - p.mu()) < 1e-12);
  CHECK_THROWS_AS(posterior_belief(p0, Vec::Zero(3)), InvalidInput);
}

TEST_CASE("posterior matches a fine-grid maximization of the log posterior") {
  // ζ = Bμ = (1/3, 1/3) for μ = (1, 1) and y = 0; scan log p(x|y) directly.
  const Vec mu = v2(1, 1), y = v2(0, 0);
  auto logpost = [&](double a, double b) {
    const Vec x = v2(a, b);
    return -0.5 * ((x - mu).squaredNorm() / 1.0 + (y - x).squaredNorm() / 0.5);
  };
  double best = -1e300, ba = 0, bb = 0;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1000; ++j) {
      const double a = i * 1e-3, b = j * 1e-3;
      const double v = logpost(a, b);
      if (v > best) best = v, ba = a, bb = b;
    }
  }
  const Vec zeta = posterior_belief(test::iso_viewer(mu), y);
  CHECK(std::abs(ba - zeta[0]) <= 1e-3);
  CHECK(std::abs(bb - zeta[1]) <= 1e-3);
}

TEST_CASE("MAP equivalence against Newton-free numerical ascent") {
  // Coordinate-free gradient ascent on the explicit log posterior; the step
  // is tied to the curvature bound so it converges for any drawn profile.
  Rng rng(99);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat s = random_spd(rng, 2, 0.2, 3.0), ss = random_spd(rng, 2, 0.2, 3.0);
    const Vec mu = v2(z(rng), z(rng)), y = v2(z(rng), z(rng));
    const Mat ps = test::inv2(s), pss = test::inv2(ss);
    const Mat h = ps + pss;
    const double lmax = std::max(h(0, 0), h(1, 1)) + std::abs(h(0, 1)) + 1.0;
    Vec x = y;
    for (int it = 0; it < 20000; ++it) {
      const Vec grad = -ps * (x - mu) - pss * (x - y);
      x += grad / lmax;
      if (grad.norm() < 1e-13) break;
    }
    const ViewerProfile p(mu, Covariance(s), Covariance(ss));
    CHECK((posterior_belief(p, y) - x).norm() < 1e-6);
  }
}

TEST_CASE("limit cases") {
  const Vec mu = v2(0.7, -0.2), y = v2(-1.0, 2.5);
  const ViewerProfile credible(mu, Covariance::scaled_identity(2, 1.0),
                               Covariance::scaled_identity(2, 1e-8));
  CHECK((posterior_belief(credible, y) - y).norm() < 1e-6);
  const ViewerProfile closed(mu, Covariance::scaled_identity(2, 1e-8),
                             Covariance::scaled_identity(2, 1.0));
  CHECK((posterior_belief(closed, y) - mu).norm() < 1e-6);
}

TEST_CASE("conveyance distance") {
  CHECK(conveyance_distance(v2(1, 0), v2(1, 0)) == 0.0);
  CHECK(conveyance_distance(v2(1, 0), v2(0, 0)) == doctest::Approx(1.0));
  CHECK(conveyance_distance(v2(3, 4), v2(0, 0)) == doctest::Approx(5.0));
  Rng rng(5);
  std::normal_distribution<double> z;
  for (int i = 0; i < 100; ++i) {
    const Vec a = v2(z(rng), z(rng)), b = v2(z(rng), z(rng));
    CHECK(conveyance_distance(a, b) >= 0.0);
    CHECK(conveyance_distance(a, b) == conveyance_distance(b, a));
    CHECK(conveyance_distance(a, a) == 0.0);
    CHECK(conveyance_distance(a, b) > 0.0);
  }
  CHECK_THROWS_AS(conveyance_distance(v2(1, 0), Vec::Zero(3)), InvalidInput);
}

TEST_CASE("population conveyance") {
  const auto s1 = population_conveyance(test::single(v2(0, 0)), v2(1, 0), v2(1.5, 0));
  CHECK(s1.mean == doctest::Approx(0.0));
  CHECK(s1.std == doctest::Approx(0.0));

  const Population two({test::iso_viewer(v2(0.3, 0)), test::iso_viewer(v2(-0.3, 0))});
  const auto s2 = population_conveyance(two, v2(1, 0), v2(1.5, 0));
  // Per-viewer hand evaluation: ζ = (2/3)(1.5, 0) + (1/3)(±0.3, 0).
  const double r1 = std::abs(1.0 + 0.1 - 1.0), r2 = std::abs(1.0 - 0.1 - 1.0);
  CHECK(s2.mean == doctest::Approx((r1 + r2) / 2).epsilon(1e-12));
  CHECK(s2.mean == doctest::Approx(0.1));
  CHECK(s2.std == doctest::Approx(0.0));
  CHECK(s2.count == 2);
}

TEST_CASE("population structure") {
  CHECK_THROWS_AS(Population(std::vector<ViewerProfile>{}), InvalidInput);
  CHECK_THROWS_AS(Population({test::iso_viewer(v2(0, 0)),
                              test::iso_viewer(Vec::Zero(3))}),
                  InvalidInput);
  const Population erg({test::iso_viewer(v2(0, 0)), test::iso_viewer(v2(1, 0))});
  CHECK(erg.ergodic());
  const Population mixed(
      {test::iso_viewer(v2(0, 0)), test::iso_viewer(v2(1, 0), 2.0, 0.5)});
  CHECK_FALSE(mixed.ergodic());
  CHECK(test::max_abs(erg.mean_prior() - v2(0.5, 0)) < 1e-15);
}

}  // TEST_SUITE
