#include "qmcf/harmonic_map.hpp"

#include <algorithm>
#include <cmath>

#include "qmcf/errors.hpp"

namespace qmcf {

HarmonicMapFlow::HarmonicMapFlow(const Grid& grid, Boundary bc) : grid_(grid), bc_(bc) {
  u_.assign(grid.interior_count(), Vec3{0.0, 0.0, 1.0});
  mask_.assign(grid.interior_count(), 1);
}

void HarmonicMapFlow::init(const DirectorPreset& preset, const ShrinkingSphere* sphere, double t0, double band) {
  t = t0;
  for_each_cell(grid_, [&](int i, int j, int k) {
    const std::size_t c = cell_index(i, j, k);
    u_[c] = preset.eval(grid_.center(i, j, k));
    mask_[c] = 1;
    if (bc_ == Boundary::Dirichlet && sphere) mask_[c] = sphere->signed_distance(grid_.center(i, j, k), t0) > band;
  });
  if (mask_count() == 0) throw ExtinctionError("harmonic map: empty initial mask");
}

void HarmonicMapFlow::init_field(const std::vector<Vec3>& u) {
  if (u.size() != u_.size()) throw DomainError("harmonic map: field size does not match the grid");
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double n = norm(u[c]);
    u_[c] = {u[c][0] / n, u[c][1] / n, u[c][2] / n};
  }
  std::fill(mask_.begin(), mask_.end(), std::uint8_t{1});
}

void HarmonicMapFlow::update_mask(const ShrinkingSphere& sphere, double tt, double band) {
  if (bc_ == Boundary::Periodic) return;
  for_each_cell(grid_, [&](int i, int j, int k) {
    const std::size_t c = cell_index(i, j, k);
    if (mask_[c] && !(sphere.signed_distance(grid_.center(i, j, k), tt) > band)) mask_[c] = 0;
  });
  if (mask_count() == 0) throw ExtinctionError("harmonic map: the masked region vanished");
}

std::size_t HarmonicMapFlow::mask_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

double HarmonicMapFlow::unit_defect() const {
  double m = 0.0;
  for (std::size_t c = 0; c < u_.size(); ++c)
    if (mask_[c]) m = std::max(m, std::abs(norm(u_[c]) - 1.0));
  return m;
}

std::vector<Vec3> HarmonicMapFlow::rhs() const {
  std::vector<Vec3> out(u_.size(), Vec3{0.0, 0.0, 0.0});
  const double ih2 = 1.0 / (grid_.h * grid_.h);
  for_each_cell(grid_, [&](int i, int j, int k) {
    const std::size_t c = cell_index(i, j, k);
    if (!mask_[c]) return;
    const Vec3& uc = u_[c];
    Vec3 lap{0.0, 0.0, 0.0};
    const int idx[3] = {i, j, k};
    for (int a = 0; a < grid_.dim; ++a) {
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        int nb[3] = {idx[0], idx[1], idx[2]};
        nb[a] += sgn;
        const Vec3* v = &uc;
        if (nb[a] < 0 || nb[a] >= grid_.n[a]) {
          if (bc_ == Boundary::Periodic) {
            nb[a] = (nb[a] + grid_.n[a]) % grid_.n[a];
            v = &u_[cell_index(nb[0], nb[1], nb[2])];
          }
        } else {
          const std::size_t cn = cell_index(nb[0], nb[1], nb[2]);
          if (mask_[cn]) v = &u_[cn];
        }
        for (int m = 0; m < 3; ++m) lap[m] += (*v)[m] - uc[m];
      }
    }
    for (auto& v : lap) v *= ih2;
    const double grad2 = -dot(uc, lap);
    for (int m = 0; m < 3; ++m) out[c][m] = lap[m] + grad2 * uc[m];
  });
  return out;
}

void HarmonicMapFlow::step(double dt) {
  const auto r = rhs();
  for (std::size_t c = 0; c < u_.size(); ++c) {
    if (!mask_[c]) continue;
    Vec3 v{u_[c][0] + dt * r[c][0], u_[c][1] + dt * r[c][1], u_[c][2] + dt * r[c][2]};
    const double n = norm(v);
    u_[c] = {v[0] / n, v[1] / n, v[2] / n};
  }
  t += dt;
}

double HarmonicMapFlow::stable_dt(double safety) const { return safety * grid_.h * grid_.h / (2.0 * grid_.dim); }

void HarmonicMapFlow::advance_to(double t_target, const ShrinkingSphere* sphere, double band, double safety) {
  const double span = t_target - t;
  if (span <= 0.0) return;
  const auto n = static_cast<std::size_t>(std::ceil(span / stable_dt(safety) - 1e-9));
  const double dt = span / static_cast<double>(n);
  const double t_start = t;
  for (std::size_t m = 0; m < n; ++m) {
    step(dt);
    t = t_start + dt * static_cast<double>(m + 1);
    if (sphere) update_mask(*sphere, t, band);
  }
  t = t_target;
}

}  // namespace qmcf
