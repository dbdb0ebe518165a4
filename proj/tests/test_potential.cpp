#include <doctest.h>

#include "qmcf/errors.hpp"
#include "qmcf/potential.hpp"
#include "support.hpp"

using namespace qmcf;

namespace {

// Independent matrix-form evaluation: a/2 tr Q^2 - b/3 tr Q^3 + c/4 (tr Q^2)^2.
double energy_matrix(const PotentialCoefficients& k, const Mat3& q) {
  const Mat3 q2 = q * q;
  const double t2 = q2.trace(), t3 = (q2 * q).trace();
  return 0.5 * k.a * t2 - k.b / 3.0 * t3 + 0.25 * k.c * t2 * t2;
}

}  // namespace

TEST_CASE("default coefficients give s_plus = 3") {
  const LandauPotential pot;
  CHECK(pot.s_plus() == 3.0);
  CHECK(PotentialCoefficients{}.s_plus() == 3.0);
}

TEST_CASE("coefficient validation") {
  PotentialCoefficients k;
  k.b = 10.0;
  CHECK_THROWS_AS(k.validate(), ConfigError);
  k.critical = false;
  CHECK_NOTHROW(k.validate());
  PotentialCoefficients neg;
  neg.a = -1.0;
  CHECK_THROWS_AS(neg.validate(), ConfigError);
  PotentialCoefficients no_nematic{1.0, 1.0, 1.0, false, 4};
  CHECK_THROWS_AS(no_nematic.validate(), ConfigError);
}

TEST_CASE("energy matches the matrix formula") {
  const PotentialCoefficients k;
  const LandauPotential pot(k);
  std::mt19937_64 rng(1);
  for (int n = 0; n < 100; ++n) {
    const Coeffs5 c = test::random_coeffs(rng, 2.5);
    CHECK(pot.energy(c) == doctest::Approx(energy_matrix(k, basis_embed(c))).epsilon(1e-12).scale(1.0));
  }
  CHECK(pot.energy(Coeffs5{}) == 0.0);
}

TEST_CASE("bulk gradient vanishes on the two phases") {
  const LandauPotential pot;
  std::mt19937_64 rng(2);
  for (double g : pot.gradient(Coeffs5{})) CHECK(g == 0.0);
  for (int n = 0; n < 20; ++n) {
    const QTensor q = uniaxial(3.0, test::random_unit(rng));
    CHECK(pot.energy(q) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(pot.gradient(q).norm() <= 1e-12);
  }
}

TEST_CASE("bulk gradient matches finite differences of the matrix energy") {
  const PotentialCoefficients k;
  const LandauPotential pot(k);
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    const Coeffs5 q = test::random_coeffs(rng, 2.5);
    const Coeffs5 g = pot.gradient(q);
    double err = 0.0, gn = 0.0;
    for (int c = 0; c < 5; ++c) {
      Coeffs5 qp = q, qm = q;
      const double h = 1e-5;
      qp[c] += h;
      qm[c] -= h;
      const double fd = (energy_matrix(k, basis_embed(qp)) - energy_matrix(k, basis_embed(qm))) / (2 * h);
      err += (fd - g[c]) * (fd - g[c]);
      gn += g[c] * g[c];
    }
    CHECK(std::sqrt(err) <= 1e-6 * std::max(1.0, std::sqrt(gn)));
  }
}

TEST_CASE("gradient matrix is the tensor-space gradient") {
  const LandauPotential pot;
  std::mt19937_64 rng(4);
  const QTensor q(test::random_coeffs(rng, 2.0));
  CHECK(test::coeff_dist(basis_project(pot.gradient_matrix(q)), pot.gradient(q).coeffs()) < 1e-13);
}

TEST_CASE("uniaxial restriction") {
  const PotentialCoefficients k;
  const LandauPotential pot(k);
  for (double s = -0.5; s <= 3.5; s += 0.25) {
    const double f_closed = s * s / 27.0 * (9 * k.a - 2 * k.b * s + 3 * k.c * s * s);
    CHECK(pot.uniaxial_f(s) == doctest::Approx(f_closed).scale(1.0));
    CHECK(pot.energy(uniaxial(s, {0, 1, 0})) == doctest::Approx(f_closed).scale(1.0));
    const double h = 1e-6;
    CHECK(pot.uniaxial_f_prime(s) ==
          doctest::Approx((pot.uniaxial_f(s + h) - pot.uniaxial_f(s - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
  }
  for (double s = 0.0; s <= 3.0; s += 0.125) CHECK(pot.sqrt_f(s) == doctest::Approx(std::sqrt(pot.uniaxial_f(s))).scale(1.0));
  CHECK_THROWS_AS(pot.sqrt_f(-0.1), DomainError);
  CHECK_THROWS_AS(pot.sqrt_f(3.1), DomainError);
}

TEST_CASE("regularized energy adds eps^(K-1)") {
  const LandauPotential pot;
  CHECK(pot.regularization(0.1) == doctest::Approx(1e-3));
  CHECK(pot.regularized_energy(QTensor{}, 0.1) == doctest::Approx(1e-3));
}

TEST_CASE("Hessian bound dominates finite-difference curvature") {
  const LandauPotential pot;
  const double lam = pot.hessian_bound(2.5);
  CHECK(lam > 0.0);
  CHECK(pot.hessian_bound(2.5) == lam);  // cached and deterministic
  std::mt19937_64 rng(6);
  for (int n = 0; n < 50; ++n) {
    const Coeffs5 q = test::random_coeffs(rng, 2.4);
    const Coeffs5 dir = test::random_coeffs(rng, 1.0);
    double dn = 0.0;
    for (double x : dir) dn += x * x;
    dn = std::sqrt(dn);
    if (dn < 1e-3) continue;
    Coeffs5 qp = q, qm = q;
    const double h = 1e-4 / dn;
    for (int c = 0; c < 5; ++c) {
      qp[c] += h * dir[c];
      qm[c] -= h * dir[c];
    }
    const double curv = (pot.energy(qp) - 2 * pot.energy(q) + pot.energy(qm)) / (h * h * dn * dn);
    CHECK(std::abs(curv) <= lam * 1.02);
  }
}
