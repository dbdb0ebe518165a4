#pragma once

#include <cstdint>
#include <vector>

#include "qmcf/grid.hpp"
#include "qmcf/initial_data.hpp"
#include "qmcf/interface_geometry.hpp"

namespace qmcf {

/// Reference harmonic map heat flow du/dt = Lap u + |grad u|^2 u into the unit
/// sphere on a masked subset of the grid. Neighbors outside the mask (or the
/// domain) mirror the cell's own value, which is a homogeneous Neumann
/// condition. In periodic mode the mask is the whole grid and wraps around.
class HarmonicMapFlow {
 public:
  HarmonicMapFlow(const Grid& grid, Boundary bc);

  /// Evaluates the preset on every cell and sets the mask to {d(x, t) > band}
  /// (every cell in periodic mode). ExtinctionError if the mask is empty.
  void init(const DirectorPreset& preset, const ShrinkingSphere* sphere, double t, double band);
  /// Sets u directly (normalized) and the mask to all cells.
  void init_field(const std::vector<Vec3>& u);

  /// Removes cells whose signed distance dropped to band or below. Cells never
  /// rejoin the mask. ExtinctionError if it becomes empty.
  void update_mask(const ShrinkingSphere& sphere, double t, double band);

  /// Time derivative on masked cells; unmasked entries are zero. The |grad u|^2
  /// factor is computed as -u . Lap u, which is exact for unit vectors on the
  /// same stencil.
  std::vector<Vec3> rhs() const;
  /// Explicit Euler step followed by renormalization.
  void step(double dt);
  /// Largest stable explicit step, h^2 / (2 dim), times safety.
  double stable_dt(double safety = 0.25) const;
  /// Steps until time t_target (landing on it exactly) with the stable step.
  void advance_to(double t_target, const ShrinkingSphere* sphere, double band, double safety = 0.25);

  double t = 0.0;
  const Grid& grid() const { return grid_; }
  const std::vector<Vec3>& u() const { return u_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t cell_index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(grid_.n[0]) * (j + static_cast<std::size_t>(grid_.n[1]) * k);
  }
  std::size_t mask_count() const;
  /// max | |u| - 1 | over masked cells.
  double unit_defect() const;

 private:
  Grid grid_;
  Boundary bc_;
  std::vector<Vec3> u_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace qmcf
