#include "qmcf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmcf/errors.hpp"

namespace qmcf {

const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "periodic"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "dirichlet") return Boundary::Dirichlet;
  if (name == "periodic") return Boundary::Periodic;
  throw ConfigError("unknown boundary condition '" + name + "' (expected dirichlet or periodic)");
}

Grid Grid::with_cells(int dim, double L, int cells) {
  if (dim < 1 || dim > 3) throw ConfigError("grid: dimension must be 1, 2 or 3");
  if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
  if (cells < 2) throw ConfigError("grid: need at least two cells per axis");
  Grid g;
  g.dim = dim;
  g.L = L;
  g.h = 2.0 * L / cells;
  for (int a = 0; a < 3; ++a) {
    g.n[a] = a < dim ? cells : 1;
    g.np[a] = a < dim ? cells + 2 : 1;
  }
  g.stride = {1, g.np[0], static_cast<std::ptrdiff_t>(g.np[0]) * g.np[1]};
  return g;
}

Grid Grid::make(int dim, double L, double h_target) {
  if (!(h_target > 0.0)) throw ConfigError("grid: spacing must be positive");
  if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
  const double half = std::ceil(L / h_target - 1e-9);
  if (half > 1e6) throw ConfigError("grid: too many cells");
  return with_cells(dim, L, 2 * static_cast<int>(half));
}

double Grid::cell_volume() const { return std::pow(h, dim); }

Vec3 Grid::center(int i, int j, int k) const {
  Vec3 x{coord(i), 0.0, 0.0};
  if (dim >= 2) x[1] = coord(j);
  if (dim >= 3) x[2] = coord(k);
  return x;
}

TensorField::TensorField(const Grid& g) : grid_(g) {
  for (auto& p : planes_) p.assign(g.padded_count(), 0.0);
}

std::array<const double*, 5> TensorField::planes() const {
  return {planes_[0].data(), planes_[1].data(), planes_[2].data(), planes_[3].data(), planes_[4].data()};
}
std::array<double*, 5> TensorField::planes() {
  return {planes_[0].data(), planes_[1].data(), planes_[2].data(), planes_[3].data(), planes_[4].data()};
}

Coeffs5 TensorField::get(std::size_t p) const {
  return {planes_[0][p], planes_[1][p], planes_[2][p], planes_[3][p], planes_[4][p]};
}

void TensorField::set(std::size_t p, const Coeffs5& q) {
  for (int c = 0; c < 5; ++c) planes_[c][p] = q[c];
}

void TensorField::fill(const Coeffs5& q) {
  for_each_cell(grid_, [&](int i, int j, int k) { set(grid_.index(i, j, k), q); });
}

void TensorField::fill_ghosts(Boundary bc) {
  const Grid& g = grid_;
  for (int a = 0; a < g.dim; ++a) {
    // Iterate over all padded positions on the two ghost faces normal to axis a.
    std::array<int, 3> lo{0, 0, 0}, hi{g.np[0], g.np[1], g.np[2]};
    for (int side = 0; side < 2; ++side) {
      const int ghost = side == 0 ? 0 : g.np[a] - 1;
      const int src = side == 0 ? g.n[a] : 1;
      std::array<int, 3> l = lo, h = hi;
      l[a] = ghost;
      h[a] = ghost + 1;
      for (int z = l[2]; z < h[2]; ++z)
        for (int y = l[1]; y < h[1]; ++y)
          for (int x = l[0]; x < h[0]; ++x) {
            const std::size_t p = x + y * g.stride[1] + z * g.stride[2];
            std::array<int, 3> s{x, y, z};
            s[a] = src;
            const std::size_t q = s[0] + s[1] * g.stride[1] + s[2] * g.stride[2];
            for (auto& pl : planes_) pl[p] = bc == Boundary::Periodic ? pl[q] : 0.0;
          }
    }
  }
}

double TensorField::max_norm() const {
  double m = 0.0;
  for_each_cell(grid_, [&](int i, int j, int k) {
    const std::size_t p = grid_.index(i, j, k);
    double acc = 0.0;
    for (const auto& pl : planes_) acc += pl[p] * pl[p];
    if (std::isnan(acc)) m = std::numeric_limits<double>::infinity();
    m = std::max(m, acc);
  });
  return std::sqrt(m);
}

}  // namespace qmcf
