// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--only N]... [--expect-fail N]...
// The exit status is nonzero when a criterion fails that was not listed with
// --expect-fail. Listed criteria still print their FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qmcf/config.hpp"
#include "qmcf/diagnostics.hpp"
#include "qmcf/errors.hpp"
#include "qmcf/experiments.hpp"
#include "qmcf/initial_data.hpp"
#include "qmcf/quasi_distance.hpp"

using namespace qmcf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

int worker_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Shared state of the time-dependent runs, computed on first use.
struct Runs {
  const GeodesicTable& table() {
    if (!table_) table_ = std::make_unique<GeodesicTable>(GeodesicTable::build(LandauPotential{}, TableSpec{}));
    return *table_;
  }
  RunConfig base() const {
    RunConfig c;
    c.solver.threads = worker_threads();
    return c;
  }
  // Constant director, eps = 0.03, h = eps/4, t in [0, 0.06].
  const SimulationResult& benchmark() {
    if (!bench_) bench_ = std::make_unique<SimulationResult>(run_simulation(base(), table()));
    return *bench_;
  }
  // In-plane director angle 0.5 x_1 up to t = 0.04 at the given eps.
  const SimulationResult& in_plane(double eps) {
    auto& slot = eps == 0.03 ? plane_fine_ : plane_coarse_;
    if (!slot) {
      RunConfig c = base();
      c.eps = eps;
      c.init.director = DirectorPreset::in_plane(0.5);
      c.solver.t_end = 0.04;
      slot = std::make_unique<SimulationResult>(run_simulation(c, table()));
    }
    return *slot;
  }

 private:
  std::unique_ptr<GeodesicTable> table_;
  std::unique_ptr<SimulationResult> bench_, plane_fine_, plane_coarse_;
};

Outcome potential_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  const PotentialVerification v = verify_potential(PotentialCoefficients{}, 2024);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = v.s_plus == 3.0 && v.max_grad_minima <= 1e-12 && v.max_fd_rel <= 1e-6 && secs < 1.0;
  return {ok, "s_plus = " + fmt(v.s_plus) + ", max |grad F| on minimizers = " + fmt(v.max_grad_minima) +
                  ", finite-difference rel. error = " + fmt(v.max_fd_rel) + ", " + fmt(secs) + " s"};
}

Outcome quasi_distance() {
  const auto t0 = std::chrono::steady_clock::now();
  const LandauPotential pot;
  const double g3 = dF_uniaxial(pot, 3.0);
  const double g0 = dF_uniaxial_quadrature(pot, 0.0);
  TableSpec spec;
  spec.nr = 200;
  const GeodesicTable t = GeodesicTable::build(pot, spec);
  double slice = 0.0;
  for (double s = 0.0; s < 2.95; s += 0.01) {
    const double exact = dF_uniaxial(pot, s);
    slice = std::max(slice, std::abs(t.value(s, 0.0) - exact) / exact);
  }
  const double corner = std::abs(t.value(0.0, 0.0) - std::sqrt(3.0)) / std::sqrt(3.0);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> rad(0.0, 2.5);
  double lipschitz = -1e300;
  for (int k = 0; k < 1000; ++k) {
    Coeffs5 c{};
    double nn = 0.0;
    for (auto& x : c) nn += (x = n(rng)) * x;
    const double scale = rad(rng) / std::sqrt(nn);
    for (auto& x : c) x *= scale;
    const QTensor q(c);
    lipschitz = std::max(lipschitz, t.grad(q).norm() - std::sqrt(2.0 * pot.regularized_energy(q, 0.03)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = std::abs(g3) <= 1e-12 && std::abs(g0 - std::sqrt(3.0)) <= 1e-8 && slice <= 0.02 && corner <= 0.02 &&
                  lipschitz <= 0.05 && secs < 30.0;
  return {ok, "g(3) = " + fmt(g3) + ", |g(0) - sqrt 3| = " + fmt(std::abs(g0 - std::sqrt(3.0))) +
                  ", slice rel. error = " + fmt(slice) + ", table(0,0) rel. error = " + fmt(corner) +
                  ", max Lipschitz excess = " + fmt(lipschitz) + ", " + fmt(secs) + " s"};
}

Outcome standing_wave_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const StandingWaveResult r = standing_wave(PotentialCoefficients{}, StandingWaveParams{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = r.drift_l2 <= 1e-3 && r.front_shift <= r.h && secs < 60.0;
  return {ok, "L2 drift = " + fmt(r.drift_l2) + ", front shift = " + fmt(r.front_shift) + " (h = " + fmt(r.h) +
                  "), " + fmt(secs) + " s"};
}

Outcome well_preparedness(Runs& runs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream os;
  double lo = 1e300, hi = 0.0, worst_gl = 0.0;
  bool nonneg = true;
  for (double eps : {0.04, 0.02, 0.01}) {
    RunConfig c = runs.base();
    c.eps = eps;
    const Grid g = c.grid();
    const ShrinkingSphere sphere = c.sphere();
    const TensorField q = build_initial(g, sphere, c.init.director, c.model, c.profile());
    DiagnosticsContext ctx;
    ctx.eps = eps;
    ctx.table = &runs.table();
    ctx.sphere = &sphere;
    ctx.threads = c.solver.threads;
    try {
      const WellPreparedness w = well_preparedness_report(q, ctx);
      lo = std::min(lo, w.ratio);
      hi = std::max(hi, w.ratio);
      const double expected = std::sqrt(3.0) * 2.0 * M_PI * c.interface.R0 + eps * eps * 4.0;
      const double gl_err = std::abs(w.E_gl - expected) / expected;
      worst_gl = std::max(worst_gl, gl_err);
      os << "eps " << eps << ": E_mod/eps = " << fmt(w.ratio) << ", E_gl rel. error = " << fmt(gl_err) << "; ";
    } catch (const DomainError& e) {
      nonneg = false;
      os << "eps " << eps << ": " << e.what() << "; ";
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double spread = hi / std::max(lo, 1e-300);
  const bool ok = nonneg && spread <= 3.0 && worst_gl <= 0.05 && secs < 120.0;
  return {ok, os.str() + "spread = " + fmt(spread) + ", " + fmt(secs) + " s"};
}

Outcome mcf_benchmark(Runs& runs) {
  const SimulationResult& r = runs.benchmark();
  const double tol = std::max(3 * 0.03, 3 * 0.0075);
  const double bound = *std::max_element(r.max_bound_ratio.begin(), r.max_bound_ratio.end());
  const bool ok = r.R_fit_available && !r.R_fit_lost && r.max_R_error <= tol && r.max_E_mod_growth <= 5.0 &&
                  bound <= 50.0 && r.wall_seconds <= 600.0;
  return {ok, "max |R_fit - R_exact| = " + fmt(r.max_R_error) + " (tol " + fmt(tol) +
                  "), max E_mod growth = " + fmt(r.max_E_mod_growth) + ", max bound ratio = " + fmt(bound) + ", " +
                  fmt(r.wall_seconds) + " s"};
}

Outcome dissipation(Runs& runs) {
  const SimulationResult& r = runs.benchmark();
  const double t_end = r.records.back().t;
  const double residual = std::abs(r.records.back().dissipation_residual);
  const double allowed = 0.02 * std::abs(r.E_gl0) * t_end;

  // The same run at half the step, compared on [0, 0.01].
  const auto at = [](const std::vector<DiagnosticsRecord>& rec, double t) {
    for (const auto& x : rec)
      if (std::abs(x.t - t) < 1e-12) return std::abs(x.dissipation_residual);
    throw DomainError("no sample at the requested time");
  };
  RunConfig c = runs.base();
  c.solver.safety = 0.125;
  c.solver.t_end = 0.01;
  c.diagnostics.director_reference = false;
  const SimulationResult half = run_simulation(c, runs.table());
  const double coarse = at(r.records, 0.01), fine = at(half.records, 0.01);
  const double gain = coarse / fine;
  const bool ok = residual <= allowed && gain >= 1.7;
  return {ok, "|residual(t_end)| = " + fmt(residual) + " (allowed " + fmt(allowed) +
                  "), residual at t = 0.01: " + fmt(coarse) + " -> " + fmt(fine) + " under dt halving, gain " +
                  fmt(gain)};
}

Outcome maximum_modulus(Runs& runs) {
  const RunState& s = runs.benchmark().state;
  return {s.max_sup <= s.initial_sup + 1e-6,
          "sup |Q| = " + fmt(s.max_sup) + ", initial " + fmt(s.initial_sup) + ", excess " +
              fmt(s.max_sup - s.initial_sup)};
}

Outcome commutators(Runs& runs) {
  const SimulationResult& fine = runs.in_plane(0.03);
  const SimulationResult& coarse = runs.in_plane(0.06);
  auto ratio = [](double a, double b) { return std::max(a, b) / std::max(std::min(a, b), 1e-300); };
  const double rg = ratio(fine.comm_grad_linf, coarse.comm_grad_linf);
  const double rt = ratio(fine.comm_time_l2, coarse.comm_time_l2);
  const double ident =
      std::max({fine.comm_identity_max, coarse.comm_identity_max, runs.benchmark().comm_identity_max});
  const bool ok = rg <= 1.5 && rt <= 1.5 && ident <= 1e-6;
  return {ok, "grad commutator " + fmt(coarse.comm_grad_linf) + " (eps 0.06) vs " + fmt(fine.comm_grad_linf) +
                  " (eps 0.03), ratio " + fmt(rg) + "; time commutator " + fmt(coarse.comm_time_l2) + " vs " +
                  fmt(fine.comm_time_l2) + ", ratio " + fmt(rt) + "; identity max " + fmt(ident)};
}

Outcome director_limit(Runs& runs) {
  const SimulationResult& a = runs.benchmark();
  const SimulationResult& b = runs.in_plane(0.03);
  const bool constant_ok = a.director_checked && !a.director_defect && a.director_max_dev <= 1e-3;
  const bool hm_ok = b.director_checked && !b.director_defect && b.director_final.l2 <= 0.1;
  const bool weak_ok = b.weak_form_relative <= 0.05;
  std::string failed;
  if (!constant_ok) failed += " constant-director";
  if (!hm_ok) failed += " harmonic-map";
  if (!weak_ok) failed += " weak-form";
  return {constant_ok && hm_ok && weak_ok,
          "constant director max deviation = " + fmt(a.director_max_dev) + ", harmonic map L2 at t = 0.04 = " +
              fmt(b.director_final.l2) + ", weak-form relative residual = " + fmt(b.weak_form_relative) +
              " (threshold 0.05; weighted form " + fmt(b.weak_form_weighted) + ")" +
              (failed.empty() ? "" : "; failing part:" + failed)};
}

Outcome stress_identity() {
  const PotentialCoefficients k;
  const double coarse = standing_stress_residual(k, 0.02, 1.0 / 512);
  const double fine = standing_stress_residual(k, 0.02, 1.0 / 1024);
  const double q = fine / coarse;
  return {q >= 0.35 && q <= 0.65,
          "residual " + fmt(coarse) + " (h = 1/512) -> " + fmt(fine) + " (h = 1/1024), ratio " + fmt(q)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--only" || a == "--expect-fail") && i + 1 < argc) {
      (a == "--only" ? only : expected).insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only N]... [--expect-fail N]...\n";
      return 2;
    }
  }

  Runs runs;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"potential algebra", potential_algebra},
      {"quasi-distance", quasi_distance},
      {"1-D standing wave", standing_wave_check},
      {"well-prepared initial data", [&] { return well_preparedness(runs); }},
      {"mean curvature flow benchmark", [&] { return mcf_benchmark(runs); }},
      {"dissipation identity", [&] { return dissipation(runs); }},
      {"maximum modulus", [&] { return maximum_modulus(runs); }},
      {"commutator uniformity", [&] { return commutators(runs); }},
      {"director limit", [&] { return director_limit(runs); }},
      {"stress identity", stress_identity},
  };

  int unexpected = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const int id = static_cast<int>(n) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[n].first << "): " << o.detail
              << (!o.pass && expected.count(id) ? " [expected failure]" : "") << std::endl;
    if (!o.pass && !expected.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
