#include "qmcf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmcf/errors.hpp"
#include "qmcf/reduce.hpp"

namespace qmcf {

const char* to_string(Scheme s) { return s == Scheme::Euler ? "euler" : "rk2"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "euler" || name == "explicit-euler") return Scheme::Euler;
  if (name == "rk2") return Scheme::RK2;
  throw ConfigError("unknown scheme '" + name + "' (expected euler or rk2)");
}

void SolverConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("solver: eps must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("solver: safety must lie in (0, 1]");
  if (!(t_end >= 0.0) || !(cadence >= 0.0)) throw ConfigError("solver: times must be nonnegative");
  if (threads < 1) throw ConfigError("solver: threads must be at least 1");
  if (!(modulus_margin > 0.0)) throw ConfigError("solver: modulus margin must be positive");
}

LdgSolver::LdgSolver(const LandauPotential& pot, const SolverConfig& cfg, const Grid& grid)
    : pot_(pot), cfg_(cfg), grid_(grid), kernels_(select_kernels(cfg.kernel)) {
  cfg_.validate();
  const auto& k = pot_.coeffs();
  params_.dim = grid_.dim;
  params_.inv_h2 = 1.0 / (grid_.h * grid_.h);
  params_.inv_eps2 = 1.0 / (cfg_.eps * cfg_.eps);
  params_.a = k.a;
  params_.b = k.b;
  params_.c = k.c;
  params_.sy = grid_.stride[1];
  params_.sz = grid_.stride[2];
}

double LdgSolver::stable_dt(double c0) const {
  const double diffusive = grid_.h * grid_.h / (4.0 * grid_.dim);
  const double lambda = pot_.hessian_bound(c0);
  const double reactive = cfg_.eps * cfg_.eps / lambda;
  return cfg_.safety * std::min(diffusive, reactive);
}

void LdgSolver::prepare(const TensorField& q) {
  state_ = RunState{};
  state_.t = q.t;
  state_.initial_sup = q.max_norm();
  if (!std::isfinite(state_.initial_sup)) throw StabilityError("solver: non-finite initial state");
  state_.max_sup = state_.initial_sup;
  const double c0 = state_.initial_sup + cfg_.modulus_margin;
  state_.hessian_bound = pot_.hessian_bound(c0);
  state_.dt = stable_dt(c0);
}

void LdgSolver::rhs(TensorField& q, TensorField& out) const {
  q.fill_ghosts(cfg_.bc);
  const auto in = q.planes();
  const auto o = out.planes();
  const std::size_t nx = static_cast<std::size_t>(grid_.n[0]);
  parallel_ranges(grid_.row_count(), cfg_.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) kernels_.rhs(in.data(), o.data(), grid_.row_start(r), nx, params_);
  });
}

double LdgSolver::dissipation_rate(const TensorField& r) const {
  const std::size_t nx = static_cast<std::size_t>(grid_.n[0]);
  const double sum = row_reduce(grid_.row_count(), cfg_.threads, [&](std::size_t row) {
    const std::size_t p0 = grid_.row_start(row);
    double acc = 0.0;
    for (int c = 0; c < 5; ++c) {
      const double* v = r.plane(c) + p0;
      for (std::size_t i = 0; i < nx; ++i) acc += v[i] * v[i];
    }
    return acc;
  });
  return cfg_.eps * sum * grid_.cell_volume();
}

// q = base + dt * d1 (or + dt/2 (d1 + d2)), tracking the sup norm and non-finite values.
void LdgSolver::axpy_track(TensorField& q, const TensorField& base, const TensorField& d1, const TensorField* d2,
                           double dt) {
  const std::size_t nx = static_cast<std::size_t>(grid_.n[0]);
  const std::size_t rows = grid_.row_count();
  std::vector<double> row_max(rows, 0.0);
  parallel_ranges(rows, cfg_.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t row = b; row < e; ++row) {
      const std::size_t p0 = grid_.row_start(row);
      for (int c = 0; c < 5; ++c) {
        double* out = q.plane(c) + p0;
        const double* x = base.plane(c) + p0;
        const double* y = d1.plane(c) + p0;
        if (d2) {
          const double* z = d2->plane(c) + p0;
          const double h = 0.5 * dt;
          for (std::size_t i = 0; i < nx; ++i) out[i] = x[i] + h * (y[i] + z[i]);
        } else {
          for (std::size_t i = 0; i < nx; ++i) out[i] = x[i] + dt * y[i];
        }
      }
      double m = 0.0;
      for (std::size_t i = 0; i < nx; ++i) {
        double acc = 0.0;
        for (int c = 0; c < 5; ++c) acc += q.plane(c)[p0 + i] * q.plane(c)[p0 + i];
        if (!(acc <= std::numeric_limits<double>::max())) {
          m = std::numeric_limits<double>::infinity();
          break;
        }
        m = std::max(m, acc);
      }
      row_max[row] = m;
    }
  });
  double m = 0.0;
  for (double v : row_max) m = std::max(m, v);
  if (!std::isfinite(m)) {
    std::ostringstream os;
    os << "solver: non-finite state at step " << state_.step << ", t = " << state_.t << ", dt = " << dt;
    throw StabilityError(os.str());
  }
  const double sup = std::sqrt(m);
  state_.max_sup = std::max(state_.max_sup, sup);
  if (sup > state_.initial_sup + 1e-3) ++state_.modulus_warnings;
}

void LdgSolver::step(TensorField& q, TensorField& r, double dt) {
  const double rate1 = dissipation_rate(r);
  if (cfg_.scheme == Scheme::Euler) {
    axpy_track(q, q, r, nullptr, dt);
    state_.dissipation += dt * rate1;
  } else {
    if (stage_.grid().padded_count() != grid_.padded_count()) {
      stage_ = TensorField(grid_);
      k2_ = TensorField(grid_);
    }
    axpy_track(stage_, q, r, nullptr, dt);
    rhs(stage_, k2_);
    const double rate2 = dissipation_rate(k2_);
    axpy_track(q, q, r, &k2_, dt);
    state_.dissipation += 0.5 * dt * (rate1 + rate2);
  }
  ++state_.step;
  state_.t += dt;
  q.t = state_.t;
}

RunState LdgSolver::run(TensorField& q, const Callback& cb) {
  prepare(q);
  const double t0 = q.t;
  const double t_end = cfg_.t_end;
  // Sample targets k * cadence for k = 0 .. floor(t_end / cadence), then t_end.
  std::vector<double> targets;
  if (cfg_.cadence > 0.0) {
    const auto count = static_cast<std::size_t>(std::floor(t_end / cfg_.cadence + 1e-9));
    for (std::size_t k = 1; k <= count; ++k) targets.push_back(t0 + k * cfg_.cadence);
  }
  const bool final_is_sample = !targets.empty() && std::abs(targets.back() - (t0 + t_end)) <= 1e-12 * (1.0 + t_end);
  if (targets.empty() || targets.back() < t0 + t_end - 1e-12 * (1.0 + t_end)) targets.push_back(t0 + t_end);
  const bool sample_last = cfg_.cadence > 0.0 ? final_is_sample : false;

  TensorField r(grid_);
  rhs(q, r);
  if (cb) cb(q, r, state_);
  double t_seg = t0;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const double target = targets[ti];
    const double span = target - t_seg;
    if (span > 0.0) {
      const auto nsub = static_cast<std::size_t>(std::ceil(span / state_.dt - 1e-9));
      const double dt = span / static_cast<double>(nsub);
      for (std::size_t m = 0; m < nsub; ++m) {
        step(q, r, dt);
        if (m + 1 == nsub) {
          state_.t = target;
          q.t = target;
        }
        rhs(q, r);
      }
    }
    t_seg = target;
    const bool last = ti + 1 == targets.size();
    const bool is_sample = cfg_.cadence > 0.0 ? (!last || sample_last) : last;
    if (is_sample) {
      ++state_.sample;
      if (cb) cb(q, r, state_);
    }
  }
  return state_;
}

}  // namespace qmcf
