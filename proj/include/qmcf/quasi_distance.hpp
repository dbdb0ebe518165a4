#pragma once

// Quasi-distance to the nematic manifold under the degenerate metric
// sqrt(2F)|dq|. Tensors enter only through their (s, r) invariants, so the
// distance is tabulated once on a rectangle of the reduced half-plane.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qmcf/potential.hpp"
#include "qmcf/qtensor.hpp"

namespace qmcf {

/// Bulk potential written in the biaxiality invariants (s, r).
double effective_bulk(const PotentialCoefficients& k, double s, double r);

/// Closed-form distance from uniaxial s0 in [0, s_plus] to the nematic manifold
/// along the uniaxial slice. Requires critical coefficients; DomainError outside
/// the interval.
double dF_uniaxial(const LandauPotential& pot, double s0);
/// The same integral by adaptive Simpson quadrature; works for any coefficients.
double dF_uniaxial_quadrature(const LandauPotential& pot, double s0, double tol = 1e-13);
/// Surface tension of the isotropic-nematic connection, dF_uniaxial(0).
double cF(const LandauPotential& pot);

enum class TableMethod { FastMarching, Dijkstra8 };

const char* to_string(TableMethod m);
TableMethod table_method_from_string(const std::string& name);

/// Sampling rectangle and resolution of the tabulated distance. Resolutions are
/// interval counts, so node i sits at s_lo + i (s_hi - s_lo) / ns.
struct TableSpec {
  double s_lo = -0.5;
  double s_hi = 3.5;
  double r_hi = 5.0;
  int ns = 400;
  int nr = 500;
  TableMethod method = TableMethod::FastMarching;

  /// ConfigError on fewer than 32 intervals per axis or an empty range.
  void validate(double s_plus) const;
};

class GeodesicTable {
 public:
  /// Shortest-path distances from (s_plus, 0) in the reduced metric.
  static GeodesicTable build(const LandauPotential& pot, const TableSpec& spec);
  static GeodesicTable load(std::istream& in);
  static GeodesicTable load_file(const std::string& path);

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  /// FNV-1a 64 over the bit patterns of the stored values.
  std::uint64_t checksum() const;

  const TableSpec& spec() const { return spec_; }
  const PotentialCoefficients& coeffs() const { return coeffs_; }
  double hs() const { return hs_; }
  double hr() const { return hr_; }
  double node(int i, int j) const { return d_[idx(i, j)]; }

  bool contains(double s, double r) const;
  /// Bilinear interpolation; DomainError outside the table rectangle.
  double value(double s, double r) const;
  /// (d/ds, d/dr) from central-difference node partials, bilinearly interpolated.
  std::pair<double, double> partials(double s, double r) const;

  struct Evaluation {
    double psi = 0.0;
    QTensor grad;
    Biaxiality sr;
    Eigensystem es;
  };
  /// Distance, gradient in the tensor space, invariants and frame for one tensor.
  Evaluation evaluate(const QTensor& q) const;
  double dF(const QTensor& q) const;
  QTensor grad(const QTensor& q) const;

  /// Below this biaxiality the r-partial term of the gradient is dropped.
  static constexpr double kDegenerateR = 1e-6;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (spec_.nr + 1) + j; }
  void finalize();
  void locate(double s, double r, int& i, int& j, double& fs, double& fr) const;

  TableSpec spec_;
  PotentialCoefficients coeffs_;
  double hs_ = 0.0, hr_ = 0.0;
  std::vector<double> d_, ds_, dr_;
};

}  // namespace qmcf
