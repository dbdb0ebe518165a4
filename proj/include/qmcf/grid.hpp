#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qmcf/qtensor.hpp"

namespace qmcf {

enum class Boundary { Dirichlet, Periodic };

const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& name);

/// Uniform cell-centered grid on [-L, L]^dim. Storage is padded with one ghost
/// layer on each side of every active axis; x is the fastest index.
struct Grid {
  int dim = 2;
  double L = 1.0;
  double h = 0.0;
  std::array<int, 3> n{1, 1, 1};     ///< interior cells per axis
  std::array<int, 3> np{1, 1, 1};    ///< padded cells per axis
  std::array<std::ptrdiff_t, 3> stride{1, 0, 0};

  /// Cell count per axis is 2 ceil(L / h_target), always even so the domain
  /// center is a cell corner. ConfigError on bad input.
  static Grid make(int dim, double L, double h_target);
  /// Exactly n cells per axis.
  static Grid with_cells(int dim, double L, int cells);

  std::size_t interior_count() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t padded_count() const { return static_cast<std::size_t>(np[0]) * np[1] * np[2]; }
  double cell_volume() const;
  /// Number of interior rows, i.e. cells / n[0].
  std::size_t row_count() const { return static_cast<std::size_t>(n[1]) * n[2]; }

  /// Padded index of interior cell (i, j, k), each starting at 0.
  std::size_t index(int i, int j = 0, int k = 0) const {
    const int o1 = dim >= 2 ? 1 : 0, o2 = dim >= 3 ? 1 : 0;
    return static_cast<std::size_t>((i + 1) + (j + o1) * stride[1] + (k + o2) * stride[2]);
  }
  /// Padded index of the first cell of interior row r.
  std::size_t row_start(std::size_t r) const {
    return index(0, static_cast<int>(r % n[1]), static_cast<int>(r / n[1]));
  }
  double coord(int i) const { return -L + (i + 0.5) * h; }
  Vec3 center(int i, int j = 0, int k = 0) const;
};

/// A 5-component tensor field in structure-of-arrays layout with ghost cells.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& g);

  const Grid& grid() const { return grid_; }
  double t = 0.0;

  double* plane(int c) { return planes_[c].data(); }
  const double* plane(int c) const { return planes_[c].data(); }
  std::array<const double*, 5> planes() const;
  std::array<double*, 5> planes();

  Coeffs5 get(std::size_t padded) const;
  void set(std::size_t padded, const Coeffs5& q);
  QTensor at(int i, int j = 0, int k = 0) const { return QTensor(get(grid_.index(i, j, k))); }

  /// Zero ghosts (Dirichlet) or copy the opposite interior layer (periodic).
  void fill_ghosts(Boundary bc);
  /// Maximum Frobenius norm over interior cells; infinite when any entry is NaN.
  double max_norm() const;
  void fill(const Coeffs5& q);

 private:
  Grid grid_;
  std::array<std::vector<double>, 5> planes_;
};

/// Calls f(i, j, k) for every interior cell, x fastest.
template <class F>
void for_each_cell(const Grid& g, F&& f) {
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) f(i, j, k);
}

}  // namespace qmcf
