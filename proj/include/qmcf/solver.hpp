#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "qmcf/grid.hpp"
#include "qmcf/kernels.hpp"
#include "qmcf/potential.hpp"

namespace qmcf {

enum class Scheme { Euler, RK2 };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct SolverConfig {
  double eps = 0.03;
  Scheme scheme = Scheme::Euler;
  double safety = 0.25;
  double t_end = 0.0;
  double cadence = 0.0;  ///< sample spacing; 0 samples only t = 0 and t_end
  KernelKind kernel = KernelKind::Auto;
  int threads = 1;
  Boundary bc = Boundary::Dirichlet;
  /// The reaction stiffness is bounded over |Q| <= initial sup + modulus_margin.
  double modulus_margin = 0.1;

  /// ConfigError on eps <= 0, safety outside (0, 1], negative times or threads < 1.
  void validate() const;
};

/// Bookkeeping of a run, passed to callbacks and returned at the end.
struct RunState {
  std::size_t step = 0;
  std::size_t sample = 0;
  double t = 0.0;
  double dt = 0.0;             ///< nominal stable step
  double dissipation = 0.0;    ///< accumulated dt * eps * sum |dQ/dt|^2 h^d
  double initial_sup = 0.0;
  double max_sup = 0.0;        ///< running maximum of the per-cell norm
  std::size_t modulus_warnings = 0;
  double hessian_bound = 0.0;
};

/// Explicit integrator of dQ/dt = Laplacian Q - eps^-2 grad F(Q).
class LdgSolver {
 public:
  LdgSolver(const LandauPotential& pot, const SolverConfig& cfg, const Grid& grid);

  const SolverConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  KernelKind kernel() const { return kernels_.kind; }
  const RunState& state() const { return state_; }

  /// safety * min(h^2 / (4 dim), eps^2 / Lambda(c0)).
  double stable_dt(double c0) const;
  /// Fixes dt from the initial sup norm and resets the bookkeeping.
  void prepare(const TensorField& q);

  /// Refreshes ghosts of q, then writes the right-hand side into out.
  void rhs(TensorField& q, TensorField& out) const;
  /// eps * sum |r|^2 h^dim.
  double dissipation_rate(const TensorField& r) const;

  /// Advances q by dt (q's ghosts are refreshed). r must hold rhs(q) on entry.
  void step(TensorField& q, TensorField& r, double dt);

  using Callback = std::function<void(const TensorField& q, const TensorField& rhs, const RunState& st)>;
  /// Integrates to cfg.t_end, invoking cb at t = k * cadence. Throws
  /// StabilityError on non-finite values.
  RunState run(TensorField& q, const Callback& cb = {});

 private:
  void axpy_track(TensorField& q, const TensorField& base, const TensorField& d1, const TensorField* d2, double dt);

  LandauPotential pot_;
  SolverConfig cfg_;
  Grid grid_;
  KernelSet kernels_;
  RhsParams params_;
  RunState state_;
  TensorField k2_, stage_;
};

}  // namespace qmcf
