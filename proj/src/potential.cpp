#include "qmcf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qmcf/detail/bulk_kernel.hpp"
#include "qmcf/errors.hpp"
#include "qmcf/linalg.hpp"

namespace qmcf {

void PotentialCoefficients::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0)) throw ConfigError("potential: a, b, c must be positive");
  if (K < 1) throw ConfigError("potential: K must be at least 1");
  if (critical && std::abs(b * b - 27.0 * a * c) > 1e-10 * b * b) {
    std::ostringstream os;
    os << "potential: critical coefficients require b^2 = 27ac, got b^2 = " << b * b << " and 27ac = " << 27.0 * a * c;
    throw ConfigError(os.str());
  }
  if (b * b < 24.0 * a * c) throw ConfigError("potential: b^2 < 24ac, no nematic minimizer");
}

double PotentialCoefficients::s_plus() const {
  const double disc = b * b - 24.0 * a * c;
  if (disc < 0.0) throw DomainError("s_plus: negative discriminant b^2 - 24ac");
  return (b + std::sqrt(disc)) / (4.0 * c);
}

LandauPotential::LandauPotential(PotentialCoefficients k)
    : k_(k), s_plus_(k.s_plus()), cache_(std::make_shared<Cache>()) {}

double LandauPotential::energy(const Coeffs5& q) const {
  return detail::bulk_energy<double>(q.data(), {k_.a, k_.b, k_.c});
}
double LandauPotential::energy(const QTensor& q) const { return energy(q.coeffs()); }

Coeffs5 LandauPotential::gradient(const Coeffs5& q) const {
  Coeffs5 g{};
  detail::bulk_gradient<double>(q.data(), g.data(), {k_.a, k_.b, k_.c});
  return g;
}
QTensor LandauPotential::gradient(const QTensor& q) const { return QTensor(gradient(q.coeffs())); }

Mat3 LandauPotential::gradient_matrix(const QTensor& q) const {
  const Mat3 m = q.matrix();
  const double n2 = contract(m, m);
  Mat3 g = m * (k_.a + k_.c * n2) - (m * m) * k_.b;
  g += Mat3::identity() * (k_.b / 3.0 * n2);
  return g;
}

double LandauPotential::regularization(double eps) const {
  if (!(eps > 0.0)) throw DomainError("regularized_energy: eps must be positive");
  return std::pow(eps, k_.K - 1);
}

double LandauPotential::regularized_energy(const QTensor& q, double eps) const {
  return energy(q) + regularization(eps);
}

double LandauPotential::uniaxial_f(double s) const {
  return s * s / 27.0 * (9.0 * k_.a - 2.0 * k_.b * s + 3.0 * k_.c * s * s);
}

double LandauPotential::uniaxial_f_prime(double s) const {
  return (18.0 * k_.a * s - 6.0 * k_.b * s * s + 12.0 * k_.c * s * s * s) / 27.0;
}

double LandauPotential::sqrt_f(double s) const {
  if (!(s >= 0.0 && s <= s_plus_)) throw DomainError("sqrt_f: s outside [0, s_plus]");
  if (k_.critical) return std::sqrt(k_.c) / 3.0 * s * (s_plus_ - s);
  return std::sqrt(std::max(0.0, uniaxial_f(s)));
}

namespace {

double hessian_norm_at(const LandauPotential& pot, const Coeffs5& q) {
  constexpr double step = 1e-5;
  std::array<double, 25> h{};
  for (std::size_t j = 0; j < 5; ++j) {
    Coeffs5 qp = q, qm = q;
    qp[j] += step;
    qm[j] -= step;
    const Coeffs5 gp = pot.gradient(qp), gm = pot.gradient(qm);
    for (std::size_t i = 0; i < 5; ++i) h[i * 5 + j] = (gp[i] - gm[i]) / (2.0 * step);
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) h[i * 5 + j] = h[j * 5 + i] = 0.5 * (h[i * 5 + j] + h[j * 5 + i]);
  const auto ev = jacobi_eigenvalues<5>(h);
  double m = 0.0;
  for (double v : ev) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double LandauPotential::hessian_bound(double c0) const {
  if (!(c0 > 0.0)) throw DomainError("hessian_bound: c0 must be positive");
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->hessian.find(c0); it != cache_->hessian.end()) return it->second;
  }
  std::mt19937_64 rng(0x51a7e5u);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = 0.0;
  // Random interior and boundary points of the ball.
  for (int n = 0; n < 4000; ++n) {
    Coeffs5 q{};
    double len = 0.0;
    for (auto& v : q) {
      v = normal(rng);
      len += v * v;
    }
    len = std::sqrt(len);
    const double radius = (n % 4 == 0) ? c0 : c0 * std::pow(unit(rng), 0.2);
    for (auto& v : q) v *= radius / len;
    best = std::max(best, hessian_norm_at(*this, q));
  }
  // The uniaxial axis in both orientations, where the cubic term is extremal.
  const double smax = c0 * std::sqrt(1.5);
  for (int i = -200; i <= 200; ++i) {
    const double s = smax * i / 200.0;
    best = std::max(best, hessian_norm_at(*this, uniaxial(s, {0.0, 0.0, 1.0}).coeffs()));
  }
  std::lock_guard lock(cache_->mutex);
  cache_->hessian[c0] = best;
  return best;
}

}  // namespace qmcf
