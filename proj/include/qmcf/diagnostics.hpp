#pragma once

// Monitored functionals of a tensor field. Unless stated otherwise, functions
// read the ghost layer, which must be current for the boundary condition in
// the context (LdgSolver::rhs refreshes it).

#include <array>
#include <string>
#include <vector>

#include "qmcf/grid.hpp"
#include "qmcf/harmonic_map.hpp"
#include "qmcf/interface_geometry.hpp"
#include "qmcf/potential.hpp"
#include "qmcf/quasi_distance.hpp"

namespace qmcf {

struct DiagnosticsContext {
  LandauPotential pot;
  double eps = 0.03;
  const GeodesicTable* table = nullptr;
  const ShrinkingSphere* sphere = nullptr;  ///< may be null: no calibration field
  Boundary bc = Boundary::Dirichlet;
  int threads = 1;
  double bound_ceiling = 50.0;
};

/// Ginzburg-Landau energy with face differences (including the faces to the
/// Dirichlet ghosts), whose exact gradient is the five-point Laplacian.
double gl_energy(const TensorField& q, const LandauPotential& pot, double eps, Boundary bc, int threads = 1);

/// One pass over the field evaluating every quantity that depends on the
/// quasi-distance and the calibration field.
///
/// psi = dF(Q) vanishes in the nematic phase and grows towards the isotropic
/// one, while xi extends the inner normal of the nematic region. The
/// calibration is therefore taken against -psi, so that xi . grad(-psi) is
/// close to |grad psi| across a well-prepared layer and E_mod is small. The
/// normal n_eps is grad(-psi) / |grad psi| accordingly.
struct FieldAnalysis {
  double E_gl = 0.0;
  double E_mod = 0.0;         ///< E_gl minus the chain-rule calibration term
  double calib_chain = 0.0;   ///< -sum xi . (grad_dF : D0 Q) h^d
  double calib_direct = 0.0;  ///< -sum xi . D0 psi h^d
  double calib_ibp = 0.0;     ///< sum div(xi) psi h^d
  std::array<double, 5> bound_lhs{};     ///< a, b, b~, c, d
  std::array<double, 5> bound_ratio{};   ///< lhs / max(E_mod, 1e-6 eps)
  bool bounds_ok = true;                 ///< every ratio <= ceiling
  double max_abs_Q = 0.0;
  double comm_grad_l2 = 0.0;             ///< || [D0_a Q, Q] ||_{L2}, summed over a
  double comm_rhs_l2 = 0.0;              ///< || [rhs, Q] ||_{L2}, when rhs given
  double lipschitz_excess = 0.0;         ///< max |grad_dF| - sqrt(2 F_eps)
  double comm_identity_max = 0.0;        ///< max |[grad_dF, Q]| / (1 + |Q|^2)
  double chain_rule_max_rel = 0.0;       ///< max |D0 psi - grad_dF : D0 Q| / |D0 psi| where s in [0.3, 2.7], |D0 psi| > 0.1
  std::size_t chain_rule_cells = 0;
};

/// rhs may be null. t selects the interface time.
FieldAnalysis analyze_field(const TensorField& q, const TensorField* rhs, const DiagnosticsContext& ctx, double t);

double modulated_energy(const TensorField& q, const DiagnosticsContext& ctx, double t);
std::array<double, 5> bound_suite(const TensorField& q, const DiagnosticsContext& ctx, double t);

/// Per-cell projection of D0 Q onto span(grad_dF), the normal n_eps and the
/// phase-field mean curvature. Arrays are indexed by interior cell
/// (x fastest); vector entries have dim meaningful components.
struct ProjectionFields {
  std::vector<std::array<Coeffs5, 3>> pi_grad;
  std::vector<Vec3> n_eps;
  std::vector<Vec3> H_eps;
};
ProjectionFields projection_fields(const TensorField& q, const TensorField& rhs, const DiagnosticsContext& ctx,
                                   double t);

/// (e I - eps D_i Q : D_j Q) for the first dim axes, e = eps/2 |DQ|^2 + F_eps / eps.
Mat3 stress_tensor(const std::array<Coeffs5, 3>& grad, int dim, const QTensor& q, double eps,
                   const LandauPotential& pot);

/// L2 norm of div T - H_eps |grad Q| over cells at least two away from the
/// boundary with |D0 Q| > 1e-6, relative to the L2 norm of the gradient of the
/// energy density. T uses forward differences, so the residual is first order.
double stress_divergence_residual(const TensorField& q, const TensorField& rhs, const LandauPotential& pot,
                                  double eps);

struct CommutatorNorms {
  double grad_l2 = 0.0;
  double rhs_l2 = 0.0;
};
CommutatorNorms commutator_norms(const TensorField& q, const TensorField& rhs, int threads = 1);

struct InterfaceFit {
  double R = 0.0;
  double cx = 0.0, cy = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
};
/// Circle fit to the s = level_fraction * s_plus contour of a 2-D field.
/// ExtinctionError if no contour exists.
InterfaceFit interface_extract(const TensorField& q, double level_fraction, double s_plus);

struct DirectorComparison {
  double l2 = 0.0;           ///< sign-modded L2 distance
  double max_dev = 0.0;      ///< max over cells of min(|u-v|, |u+v|)
  std::size_t cells = 0;
  bool defect = false;       ///< sign alignment failed
};
/// Leading eigenvectors on {d > 2 eps} within the reference mask, compared to
/// the reference director. ExtinctionError when the region is empty.
DirectorComparison director_compare(const TensorField& q, const HarmonicMapFlow& hm, const ShrinkingSphere& sphere,
                                    double t, double eps);

/// Space-time weak form of the harmonic map heat flow evaluated on the director
/// of q, accumulated sample by sample with the trapezoid rule.
///
/// The sharp form integrates over {d > band} (band 0 is the nematic region
/// itself). The weighted form integrates over the whole grid with weight
/// (s / s_plus)^2, which is the commutator form [dQ/dt, Q], [D_j Q, Q] of the
/// same identity and tends to the sharp form as the layer width vanishes.
class WeakFormResidual {
 public:
  static constexpr int kBasket = 10;
  explicit WeakFormResidual(double s_plus = 3.0, double band = 0.0) : s_plus_(s_plus), band_(band) {}
  void add_sample(const TensorField& q, const TensorField& rhs, const ShrinkingSphere& sphere, double t);
  /// max over the basket of |integral| / (Cauchy-Schwarz bound); 0 if all bounds vanish.
  double relative() const;
  double relative_weighted() const;
  /// max over the basket of the absolute integral (sharp form).
  double absolute() const;
  std::size_t samples() const { return data_.size(); }

 private:
  struct Sums {
    std::array<double, kBasket> form{}, phi2{}, dphi2{};
    double ut2 = 0.0, ux2 = 0.0;
  };
  struct Sample {
    double t = 0.0;
    Sums sharp, weighted;
  };
  static double relative_of(const std::vector<Sample>& data, Sums Sample::*which);
  double s_plus_, band_;
  std::vector<Sample> data_;
};

/// Eigenvector derivative of the top eigenvalue along the tensor direction dq.
Vec3 director_derivative(const Eigensystem& es, const Mat3& dq);

struct GronwallReport {
  double C_fit = 0.0;
  double max_growth = 0.0;  ///< max E(t) / E(0)
  bool ok = false;
};
/// Needs at least ten (t, E_mod) records; DomainError otherwise.
GronwallReport gronwall_report(const std::vector<double>& t, const std::vector<double>& E_mod, double eps,
                               double ceiling = 100.0, double growth_limit = 5.0);

/// One row of the time series.
struct DiagnosticsRecord {
  double t = 0.0;
  double E_gl = 0.0, E_mod = 0.0, E_mod_over_eps = 0.0;
  double dissipation_cum = 0.0, dissipation_residual = 0.0;
  double R_fit = 0.0, R_exact = 0.0;
  double max_abs_Q = 0.0;
  double comm_grad_l2 = 0.0, comm_time_l2 = 0.0;
  std::array<double, 5> bounds{};
  double stress_residual = 0.0;
};

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

/// Initial modulated energy and its ratio to eps; DomainError when E_mod < -1e-8.
struct WellPreparedness {
  double E_mod0 = 0.0;
  double ratio = 0.0;
  double E_gl = 0.0;
};
WellPreparedness well_preparedness_report(const TensorField& q, const DiagnosticsContext& ctx);

}  // namespace qmcf
