#pragma once

#include "qmcf/qtensor.hpp"

namespace qmcf {

/// Cubic smoothstep that falls from 1 at t <= 0 to 0 at t >= 1.
double smooth_fall(double t);
double smooth_fall_prime(double t);

/// Everything the calibration terms need at one point and time.
struct CalibrationSample {
  double d = 0.0;      ///< signed distance, positive inside
  Vec3 n{};            ///< inner unit normal
  Vec3 xi{};           ///< eta(d) n
  double div_xi = 0.0;
  Vec3 H{};            ///< extended mean curvature vector
  double eta = 0.0;
};

/// A sphere (circle in 2-D, interval in 1-D) shrinking by mean curvature flow,
/// R(t) = sqrt(R0^2 - 2 (dim - 1) t). Unused coordinates of points are ignored.
class ShrinkingSphere {
 public:
  /// ConfigError unless dim in {1,2,3}, R0 > 0 and 0 < delta_I < 1.
  /// t_valid defaults to 99.9% of the extinction time.
  ShrinkingSphere(int dim, Vec3 center, double R0, double delta_I, double t_valid = -1.0);

  int dim() const { return dim_; }
  const Vec3& center() const { return center_; }
  double R0() const { return R0_; }
  double delta_I() const { return delta_; }
  double t_valid() const { return t_valid_; }
  /// Infinite in 1-D where the interval is stationary.
  double extinction_time() const;

  /// ConfigError unless the ball of radius R0 + delta_I lies strictly inside [-L, L]^dim.
  void check_inside_box(double L) const;

  /// DomainError for t < 0 or t > t_valid.
  double radius(double t) const;
  double signed_distance(const Vec3& x, double t) const;
  /// DegenerateInputError at the center.
  Vec3 inner_normal(const Vec3& x, double t) const;
  Vec3 project(const Vec3& x, double t) const;

  /// Even cutoff: 1 - z^2 on |z| <= delta_I/2, 0 for |z| >= delta_I, smooth blend between.
  double eta(double z) const;
  double eta_prime(double z) const;
  /// 1 on |z| <= delta_I/2, 0 for |z| >= delta_I.
  double eta_tilde(double z) const;

  Vec3 xi(const Vec3& x, double t) const;
  double div_xi(const Vec3& x, double t) const;
  /// Sign chosen so that d/dt d = -n . H on the interface.
  Vec3 mean_curv_ext(const Vec3& x, double t) const;
  /// All of the above at once. Points at the exact center get xi = H = 0
  /// (they lie outside the tube whenever R(t) > delta_I).
  CalibrationSample sample(const Vec3& x, double t) const;

 private:
  double dist_from_center(const Vec3& x) const;

  int dim_;
  Vec3 center_;
  double R0_, delta_, t_valid_;
};

}  // namespace qmcf
