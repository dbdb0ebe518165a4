#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace qmcf {

using Point2 = std::array<double, 2>;

struct Contour {
  std::vector<Point2> points;                  ///< unique edge crossings
  std::vector<std::array<Point2, 2>> segments; ///< marching-squares line pieces
};

/// Level set of a cell-centered scalar field f (nx * ny, x fastest) whose
/// sample (i, j) sits at (x0 + i h, y0 + j h). Saddle squares are resolved by
/// the mean of the four corners.
Contour marching_squares(const std::vector<double>& f, int nx, int ny, double x0, double y0, double h, double level);

struct CircleFit {
  double cx = 0.0, cy = 0.0, R = 0.0;
  double rms = 0.0;  ///< root mean square of |p - c| - R
  std::size_t count = 0;
};

/// Algebraic (Kasa) fit refined by Gauss-Newton on the geometric residual.
/// DegenerateInputError with fewer than three points or collinear input.
CircleFit fit_circle(const std::vector<Point2>& pts);

}  // namespace qmcf
