#include <doctest.h>

#include "qmcf/errors.hpp"
#include "qmcf/interface_geometry.hpp"

using namespace qmcf;

TEST_CASE("cubic smoothstep") {
  CHECK(smooth_fall(-1.0) == 1.0);
  CHECK(smooth_fall(0.0) == 1.0);
  CHECK(smooth_fall(0.5) == doctest::Approx(0.5));
  CHECK(smooth_fall(1.0) == 0.0);
  CHECK(smooth_fall(2.0) == 0.0);
  CHECK(smooth_fall_prime(0.5) == doctest::Approx(-1.5));
  CHECK(smooth_fall_prime(0.0) == 0.0);
}

TEST_CASE("signed distance and normal of a circle") {
  const ShrinkingSphere s(2, {0, 0, 0}, 0.4, 0.2);
  CHECK(s.signed_distance({0.3, 0.0, 0.0}, 0.0) == doctest::Approx(0.1));
  const Vec3 n = s.inner_normal({0.3, 0.0, 0.0}, 0.0);
  CHECK(n[0] == doctest::Approx(-1.0));
  CHECK(n[1] == doctest::Approx(0.0));
  const Vec3 p = s.project({0.3, 0.4, 0.0}, 0.0);
  CHECK(p[0] == doctest::Approx(0.24));
  CHECK(p[1] == doctest::Approx(0.32));
  CHECK_THROWS_AS(s.inner_normal({0, 0, 0}, 0.0), DegenerateInputError);
}

TEST_CASE("mean curvature flow radius law and validity window") {
  const ShrinkingSphere c(2, {0, 0, 0}, 0.4, 0.2);
  CHECK(c.extinction_time() == doctest::Approx(0.08));
  CHECK(c.radius(0.06) == doctest::Approx(0.2));
  CHECK(c.t_valid() == doctest::Approx(0.999 * 0.08));
  CHECK_THROWS_AS(c.radius(0.07995), DomainError);
  CHECK_THROWS_AS(c.radius(-1e-3), DomainError);
  const ShrinkingSphere b(3, {0, 0, 0}, 0.5, 0.2);
  CHECK(b.radius(0.01) == doctest::Approx(std::sqrt(0.25 - 0.04)));
  const ShrinkingSphere line(1, {0, 0, 0}, 0.5, 0.2);
  CHECK(line.radius(100.0) == 0.5);
  CHECK_THROWS_AS(ShrinkingSphere(4, {0, 0, 0}, 0.4, 0.2), ConfigError);
  CHECK_THROWS_AS(ShrinkingSphere(2, {0, 0, 0}, -0.4, 0.2), ConfigError);
}

TEST_CASE("box containment") {
  CHECK_NOTHROW(ShrinkingSphere(2, {0, 0, 0}, 0.4, 0.2).check_inside_box(1.0));
  CHECK_THROWS_AS(ShrinkingSphere(2, {0.3, 0, 0}, 0.4, 0.4).check_inside_box(1.0), ConfigError);
}

TEST_CASE("cutoff profile") {
  const ShrinkingSphere s(2, {0, 0, 0}, 0.4, 0.2);
  CHECK(s.eta(0.0) == 1.0);
  CHECK(s.eta(0.05) == doctest::Approx(1.0 - 0.0025));
  CHECK(s.eta(-0.05) == s.eta(0.05));
  CHECK(s.eta(0.2) == 0.0);
  CHECK(s.eta(0.3) == 0.0);
  for (double z = 0.0; z < 0.2; z += 0.01) CHECK(s.eta(z + 0.01) <= s.eta(z));
  for (double z = -0.19; z < 0.19; z += 0.013) {
    const double h = 1e-6;
    CHECK(s.eta_prime(z) == doctest::Approx((s.eta(z + h) - s.eta(z - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
  }
  CHECK(s.eta_tilde(0.09) == 1.0);
  CHECK(s.eta_tilde(0.2) == 0.0);
}

TEST_CASE("calibration field") {
  const ShrinkingSphere s(2, {0.05, -0.02, 0}, 0.4, 0.2);
  const double t = 0.01;
  const double R = s.radius(t);
  // On the interface xi is the unit inner normal.
  const Vec3 on{0.05 + R, -0.02, 0};
  const Vec3 xi = s.xi(on, t);
  CHECK(xi[0] == doctest::Approx(-1.0));
  CHECK(norm(xi) == doctest::Approx(1.0));
  // Outside the tube it vanishes.
  const Vec3 far{0.05 + R + 0.25, -0.02, 0};
  CHECK(norm(s.xi(far, t)) == 0.0);
  // Divergence against central differences of xi.
  for (double d : {-0.15, -0.07, -0.01, 0.0, 0.03, 0.09, 0.14}) {
    const Vec3 x{0.05 + (R - d) * std::cos(0.7), -0.02 + (R - d) * std::sin(0.7), 0};
    const double h = 1e-6;
    double div = 0.0;
    for (int a = 0; a < 2; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      div += (s.xi(xp, t)[a] - s.xi(xm, t)[a]) / (2 * h);
    }
    CHECK(s.div_xi(x, t) == doctest::Approx(div).epsilon(1e-6).scale(1.0));
    CHECK(norm(s.xi(x, t)) <= 1.0 + 1e-15);
  }
}

TEST_CASE("kinematic identity and transport of the curvature field") {
  const ShrinkingSphere s(2, {0, 0, 0}, 0.4, 0.2);
  const double t = 0.02;
  for (double d : {-0.08, -0.03, 0.0, 0.04, 0.09}) {
    const double rho = s.radius(t) - d;
    const Vec3 x{rho * std::cos(1.1), rho * std::sin(1.1), 0};
    const double h = 1e-6;
    const double dt_d = (s.signed_distance(x, t + h) - s.signed_distance(x, t - h)) / (2 * h);
    const Vec3 n = s.inner_normal(x, t);
    const Vec3 H = s.mean_curv_ext(x, t);
    CHECK(dt_d + dot(n, H) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    // (xi . grad) H = 0 in the inner half of the tube.
    const Vec3 xi = s.xi(x, t);
    Vec3 xp = x, xm = x;
    for (int a = 0; a < 3; ++a) {
      xp[a] += 1e-6 * xi[a];
      xm[a] -= 1e-6 * xi[a];
    }
    const Vec3 hp = s.mean_curv_ext(xp, t), hm = s.mean_curv_ext(xm, t);
    for (int a = 0; a < 2; ++a) CHECK(std::abs(hp[a] - hm[a]) / 2e-6 < 1e-6);
  }
}

TEST_CASE("sample bundles all fields") {
  const ShrinkingSphere s(3, {0, 0, 0}, 0.5, 0.2);
  const Vec3 x{0.1, 0.2, 0.3};
  const CalibrationSample c = s.sample(x, 0.01);
  CHECK(c.d == doctest::Approx(s.signed_distance(x, 0.01)));
  CHECK(c.div_xi == doctest::Approx(s.div_xi(x, 0.01)));
  const CalibrationSample center = s.sample({0, 0, 0}, 0.0);
  CHECK(norm(center.xi) == 0.0);
}
