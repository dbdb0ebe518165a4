#include "qmcf/contour.hpp"

#include <cmath>

#include "qmcf/errors.hpp"

namespace qmcf {

Contour marching_squares(const std::vector<double>& f, int nx, int ny, double x0, double y0, double h, double level) {
  if (f.size() != static_cast<std::size_t>(nx) * ny) throw DomainError("marching_squares: size mismatch");
  Contour out;
  auto val = [&](int i, int j) { return f[static_cast<std::size_t>(j) * nx + i] - level; };
  auto crossing = [&](int i0, int j0, int i1, int j1) {
    const double a = val(i0, j0), b = val(i1, j1);
    const double t = a / (a - b);
    return Point2{x0 + h * (i0 + t * (i1 - i0)), y0 + h * (j0 + t * (j1 - j0))};
  };
  auto cuts = [&](double a, double b) { return (a < 0.0) != (b < 0.0); };

  // Unique crossings on horizontal and vertical grid edges.
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      if (cuts(val(i, j), val(i + 1, j))) out.points.push_back(crossing(i, j, i + 1, j));
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (cuts(val(i, j), val(i, j + 1))) out.points.push_back(crossing(i, j, i, j + 1));

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      // Corners counter-clockwise: (i,j), (i+1,j), (i+1,j+1), (i,j+1).
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      double v[4];
      for (int k = 0; k < 4; ++k) v[k] = val(ci[k], cj[k]);
      std::vector<Point2> e;
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if (cuts(v[k], v[l])) e.push_back(crossing(ci[k], cj[k], ci[l], cj[l]));
      }
      if (e.size() == 2) {
        out.segments.push_back({e[0], e[1]});
      } else if (e.size() == 4) {
        // Edges 0..3 all cut. Join around the corner whose sign differs from the center.
        const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((v[0] < 0.0) == (center < 0.0)) {
          out.segments.push_back({e[0], e[1]});
          out.segments.push_back({e[2], e[3]});
        } else {
          out.segments.push_back({e[3], e[0]});
          out.segments.push_back({e[1], e[2]});
        }
      }
    }
  }
  return out;
}

CircleFit fit_circle(const std::vector<Point2>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) throw DegenerateInputError("fit_circle: need at least three points");
  // Kasa: x^2 + y^2 + D x + E y + F = 0 by normal equations (centered for conditioning).
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p[0];
    my += p[1];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0, sz = 0;
  for (const auto& p : pts) {
    const double x = p[0] - mx, y = p[1] - my, z = x * x + y * y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sxz += x * z;
    syz += y * z;
    sz += z;
  }
  const double det = sxx * syy - sxy * sxy;
  if (!(std::abs(det) > 1e-300)) throw DegenerateInputError("fit_circle: collinear points");
  // With centered data the linear system decouples F: F = -mean(z).
  const double D = -(sxz * syy - syz * sxy) / det;
  const double E = -(syz * sxx - sxz * sxy) / det;
  double cx = -D / 2.0, cy = -E / 2.0;
  double R = std::sqrt(cx * cx + cy * cy + sz / n);

  // Gauss-Newton on r_i = |p_i - c| - R.
  for (int it = 0; it < 50; ++it) {
    double jtj[3][3] = {}, jtr[3] = {};
    for (const auto& p : pts) {
      const double dx = p[0] - mx - cx, dy = p[1] - my - cy;
      const double rho = std::hypot(dx, dy);
      if (rho == 0.0) continue;
      const double res = rho - R;
      const double J[3] = {-dx / rho, -dy / rho, -1.0};
      for (int a = 0; a < 3; ++a) {
        jtr[a] += J[a] * res;
        for (int b = 0; b < 3; ++b) jtj[a][b] += J[a] * J[b];
      }
    }
    // Solve the 3x3 system by Cramer's rule.
    auto det3 = [](double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d0 = det3(jtj);
    if (!(std::abs(d0) > 1e-300)) break;
    double step[3];
    for (int a = 0; a < 3; ++a) {
      double m[3][3];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[r][c] = c == a ? -jtr[r] : jtj[r][c];
      step[a] = det3(m) / d0;
    }
    cx += step[0];
    cy += step[1];
    R += step[2];
    if (std::abs(step[0]) + std::abs(step[1]) + std::abs(step[2]) < 1e-15 * (1.0 + std::abs(R))) break;
  }
  CircleFit fit;
  fit.cx = cx + mx;
  fit.cy = cy + my;
  fit.R = R;
  fit.count = n;
  double acc = 0.0;
  for (const auto& p : pts) {
    const double r = std::hypot(p[0] - fit.cx, p[1] - fit.cy) - R;
    acc += r * r;
  }
  fit.rms = std::sqrt(acc / n);
  return fit;
}

}  // namespace qmcf
