#pragma once

#include <string>
#include <vector>

#include "qmcf/grid.hpp"
#include "qmcf/interface_geometry.hpp"
#include "qmcf/potential.hpp"

namespace qmcf {

/// Optimal one-dimensional transition S(z) = (s_plus/2)(1 + tanh(sqrt(a) z / 2)).
double optimal_profile(const PotentialCoefficients& k, double z);
double optimal_profile_prime(const PotentialCoefficients& k, double z);

/// Plateau cutoff: 1 on |z| <= 1/2, 0 on |z| >= 1, cubic smoothstep between.
double zeta(double z);

struct ProfileParams {
  double eps = 0.03;
  double delta0 = 0.2;

  /// ConfigError on nonpositive values.
  void validate() const;
  /// Human-readable notes, e.g. when delta0 / eps < 10.
  std::vector<std::string> warnings() const;
};

struct DirectorPreset {
  enum class Kind { Constant, InPlane };
  Kind kind = Kind::Constant;
  Vec3 u0{0.0, 0.0, 1.0};  ///< constant preset, normalized on use
  double kappa = 0.5;       ///< in-plane preset angle alpha = kappa x_1

  static DirectorPreset constant(const Vec3& u);
  static DirectorPreset in_plane(double kappa);
  Vec3 eval(const Vec3& x) const;
};

const char* to_string(DirectorPreset::Kind k);
DirectorPreset::Kind director_kind_from_string(const std::string& name);

/// zeta(d/delta0) S(d/eps) + (1 - zeta(d/delta0)) s_plus 1{d > 0}, d at t = 0.
double s_tilde(const Vec3& x, const ShrinkingSphere& sphere, const PotentialCoefficients& k, const ProfileParams& p);

/// Per-cell s_tilde(x) (u(x) (x) u(x) - I/3) with zero ghosts. ConfigError if
/// the interface tube reaches the domain boundary.
TensorField build_initial(const Grid& grid, const ShrinkingSphere& sphere, const DirectorPreset& dir,
                          const PotentialCoefficients& k, const ProfileParams& p);

}  // namespace qmcf
