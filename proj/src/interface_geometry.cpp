#include "qmcf/interface_geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qmcf/errors.hpp"

namespace qmcf {

double smooth_fall(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

double smooth_fall_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -6.0 * t * (1.0 - t);
}

ShrinkingSphere::ShrinkingSphere(int dim, Vec3 center, double R0, double delta_I, double t_valid)
    : dim_(dim), center_(center), R0_(R0), delta_(delta_I), t_valid_(t_valid) {
  if (dim < 1 || dim > 3) throw ConfigError("interface: dimension must be 1, 2 or 3");
  if (!(R0 > 0.0)) throw ConfigError("interface: R0 must be positive");
  if (!(delta_I > 0.0 && delta_I < 1.0)) throw ConfigError("interface: delta_I must lie in (0, 1)");
  for (int k = dim; k < 3; ++k) center_[k] = 0.0;
  if (t_valid_ < 0.0) {
    const double ext = extinction_time();
    t_valid_ = std::isinf(ext) ? std::numeric_limits<double>::max() : 0.999 * ext;
  }
  if (t_valid_ >= extinction_time()) throw ConfigError("interface: validity window must end before extinction");
}

double ShrinkingSphere::extinction_time() const {
  if (dim_ == 1) return std::numeric_limits<double>::infinity();
  return R0_ * R0_ / (2.0 * (dim_ - 1));
}

void ShrinkingSphere::check_inside_box(double L) const {
  for (int k = 0; k < dim_; ++k) {
    if (!(std::abs(center_[k]) + R0_ + delta_ < L)) {
      std::ostringstream os;
      os << "interface: tube of radius R0 + delta_I = " << R0_ + delta_ << " around the center touches the domain boundary";
      throw ConfigError(os.str());
    }
  }
}

double ShrinkingSphere::radius(double t) const {
  if (!(t >= 0.0 && t <= t_valid_)) {
    std::ostringstream os;
    os << "interface: time " << t << " outside the validity window [0, " << t_valid_ << "]";
    throw DomainError(os.str());
  }
  return std::sqrt(R0_ * R0_ - 2.0 * (dim_ - 1) * t);
}

double ShrinkingSphere::dist_from_center(const Vec3& x) const {
  double acc = 0.0;
  for (int k = 0; k < dim_; ++k) acc += (x[k] - center_[k]) * (x[k] - center_[k]);
  return std::sqrt(acc);
}

double ShrinkingSphere::signed_distance(const Vec3& x, double t) const { return radius(t) - dist_from_center(x); }

Vec3 ShrinkingSphere::inner_normal(const Vec3& x, double t) const {
  radius(t);
  const double rho = dist_from_center(x);
  if (rho == 0.0) throw DegenerateInputError("interface: normal undefined at the sphere center");
  Vec3 n{};
  for (int k = 0; k < dim_; ++k) n[k] = -(x[k] - center_[k]) / rho;
  return n;
}

Vec3 ShrinkingSphere::project(const Vec3& x, double t) const {
  const double R = radius(t);
  const double rho = dist_from_center(x);
  if (rho == 0.0) throw DegenerateInputError("interface: projection undefined at the sphere center");
  Vec3 p{};
  for (int k = 0; k < dim_; ++k) p[k] = center_[k] + R * (x[k] - center_[k]) / rho;
  return p;
}

double ShrinkingSphere::eta(double z) const {
  const double a = std::abs(z);
  if (a >= delta_) return 0.0;
  return (1.0 - a * a) * smooth_fall((a - 0.5 * delta_) / (0.5 * delta_));
}

double ShrinkingSphere::eta_prime(double z) const {
  const double a = std::abs(z);
  if (a >= delta_) return 0.0;
  const double half = 0.5 * delta_;
  const double t = (a - half) / half;
  const double da = -2.0 * a * smooth_fall(t) + (1.0 - a * a) * smooth_fall_prime(t) / half;
  return z < 0.0 ? -da : da;
}

double ShrinkingSphere::eta_tilde(double z) const {
  const double half = 0.5 * delta_;
  return smooth_fall((std::abs(z) - half) / half);
}

CalibrationSample ShrinkingSphere::sample(const Vec3& x, double t) const {
  CalibrationSample c;
  const double R = radius(t);
  const double rho = dist_from_center(x);
  c.d = R - rho;
  if (std::abs(c.d) >= delta_ || rho == 0.0) return c;
  for (int k = 0; k < dim_; ++k) c.n[k] = -(x[k] - center_[k]) / rho;
  c.eta = eta(c.d);
  for (int k = 0; k < 3; ++k) c.xi[k] = c.eta * c.n[k];
  c.div_xi = eta_prime(c.d) - c.eta * (dim_ - 1) / rho;
  const double h = eta_tilde(c.d) * (dim_ - 1) / R;
  for (int k = 0; k < 3; ++k) c.H[k] = h * c.n[k];
  return c;
}

Vec3 ShrinkingSphere::xi(const Vec3& x, double t) const { return sample(x, t).xi; }
double ShrinkingSphere::div_xi(const Vec3& x, double t) const { return sample(x, t).div_xi; }
Vec3 ShrinkingSphere::mean_curv_ext(const Vec3& x, double t) const { return sample(x, t).H; }

}  // namespace qmcf
