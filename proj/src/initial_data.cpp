#include "qmcf/initial_data.hpp"

#include <cmath>
#include <sstream>

#include "qmcf/errors.hpp"

namespace qmcf {

double optimal_profile(const PotentialCoefficients& k, double z) {
  return 0.5 * k.s_plus() * (1.0 + std::tanh(0.5 * std::sqrt(k.a) * z));
}

double optimal_profile_prime(const PotentialCoefficients& k, double z) {
  const double th = std::tanh(0.5 * std::sqrt(k.a) * z);
  return 0.25 * k.s_plus() * std::sqrt(k.a) * (1.0 - th * th);
}

double zeta(double z) { return smooth_fall((std::abs(z) - 0.5) / 0.5); }

void ProfileParams::validate() const {
  if (!(eps > 0.0)) throw ConfigError("initial data: eps must be positive");
  if (!(delta0 > 0.0)) throw ConfigError("initial data: delta0 must be positive");
}

std::vector<std::string> ProfileParams::warnings() const {
  std::vector<std::string> w;
  if (delta0 / eps < 10.0) {
    std::ostringstream os;
    os << "delta0 / eps = " << delta0 / eps << " < 10: the profile is not saturated before blending";
    w.push_back(os.str());
  }
  return w;
}

DirectorPreset DirectorPreset::constant(const Vec3& u) {
  DirectorPreset p;
  p.kind = Kind::Constant;
  p.u0 = u;
  return p;
}

DirectorPreset DirectorPreset::in_plane(double kappa) {
  DirectorPreset p;
  p.kind = Kind::InPlane;
  p.kappa = kappa;
  return p;
}

Vec3 DirectorPreset::eval(const Vec3& x) const {
  if (kind == Kind::InPlane) {
    const double a = kappa * x[0];
    return {std::cos(a), std::sin(a), 0.0};
  }
  const double n = norm(u0);
  if (!(n > 0.0)) throw ConfigError("director: constant preset needs a nonzero vector");
  return {u0[0] / n, u0[1] / n, u0[2] / n};
}

const char* to_string(DirectorPreset::Kind k) { return k == DirectorPreset::Kind::Constant ? "constant" : "in-plane"; }

DirectorPreset::Kind director_kind_from_string(const std::string& name) {
  if (name == "constant") return DirectorPreset::Kind::Constant;
  if (name == "in-plane") return DirectorPreset::Kind::InPlane;
  throw ConfigError("unknown director preset '" + name + "' (expected constant or in-plane)");
}

double s_tilde(const Vec3& x, const ShrinkingSphere& sphere, const PotentialCoefficients& k, const ProfileParams& p) {
  const double d = sphere.signed_distance(x, 0.0);
  const double z = zeta(d / p.delta0);
  const double outer = d > 0.0 ? k.s_plus() : 0.0;
  if (z == 1.0) return optimal_profile(k, d / p.eps);
  if (z == 0.0) return outer;
  return z * optimal_profile(k, d / p.eps) + (1.0 - z) * outer;
}

TensorField build_initial(const Grid& grid, const ShrinkingSphere& sphere, const DirectorPreset& dir,
                          const PotentialCoefficients& k, const ProfileParams& p) {
  p.validate();
  if (sphere.dim() != grid.dim) throw ConfigError("initial data: interface and grid dimensions differ");
  sphere.check_inside_box(grid.L);
  TensorField f(grid);
  for_each_cell(grid, [&](int i, int j, int kk) {
    const Vec3 x = grid.center(i, j, kk);
    f.set(grid.index(i, j, kk), uniaxial(s_tilde(x, sphere, k, p), dir.eval(x)).coeffs());
  });
  f.t = 0.0;
  return f;
}

}  // namespace qmcf
