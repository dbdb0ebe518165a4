#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "qmcf/diagnostics.hpp"
#include "qmcf/errors.hpp"
#include "qmcf/experiments.hpp"
#include "qmcf/initial_data.hpp"
#include "qmcf/solver.hpp"

using namespace qmcf;

namespace {

// Small-amplitude Fourier mode along x on a periodic 1-D grid, stored in the
// first tensor coefficient.
TensorField fourier_mode(const Grid& g, double amp, double k) {
  TensorField q(g);
  for (int i = 0; i < g.n[0]; ++i) q.plane(0)[g.index(i)] = amp * std::cos(k * g.coord(i));
  return q;
}

double mode_amplitude(const TensorField& q, double k) {
  const Grid& g = q.grid();
  double num = 0.0, den = 0.0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double c = std::cos(k * g.coord(i));
    num += q.plane(0)[g.index(i)] * c;
    den += c * c;
  }
  return num / den;
}

double evolve_mode(Scheme scheme, int steps, double T, double* discrete_gain = nullptr) {
  const double eps = 0.3, amp = 1e-9, k = M_PI;
  const Grid g = Grid::with_cells(1, 1.0, 64);
  SolverConfig cfg;
  cfg.eps = eps;
  cfg.scheme = scheme;
  cfg.bc = Boundary::Periodic;
  cfg.kernel = KernelKind::Scalar;
  LdgSolver solver(LandauPotential{}, cfg, g);
  TensorField q = fourier_mode(g, amp, k);
  solver.prepare(q);
  TensorField r(g);
  const double dt = T / steps;
  solver.rhs(q, r);
  for (int n = 0; n < steps; ++n) {
    solver.step(q, r, dt);
    solver.rhs(q, r);
  }
  const double lambda = 4.0 / (g.h * g.h) * std::pow(std::sin(k * g.h / 2.0), 2) + 3.0 / (eps * eps);
  if (discrete_gain) {
    const double x = lambda * dt;
    const double g1 = scheme == Scheme::Euler ? 1.0 - x : 1.0 - x + 0.5 * x * x;
    *discrete_gain = std::pow(g1, steps);
  }
  return mode_amplitude(q, k) / amp - std::exp(-lambda * T);
}

double max_abs(const TensorField& f) {
  double m = 0.0;
  for_each_cell(f.grid(), [&](int i, int j, int k) {
    for (int c = 0; c < 5; ++c) m = std::max(m, std::abs(f.plane(c)[f.grid().index(i, j, k)]));
  });
  return m;
}

SolverConfig small_2d_config() {
  SolverConfig cfg;
  cfg.eps = 0.1;
  cfg.t_end = 0.01;
  cfg.kernel = KernelKind::Scalar;
  return cfg;
}

TensorField small_2d_field(const Grid& g) {
  const ShrinkingSphere sphere(2, {0.0, 0.0, 0.0}, 0.5, 0.2);
  return build_initial(g, sphere, DirectorPreset::in_plane(1.0), PotentialCoefficients{}, ProfileParams{0.1, 0.3});
}

}  // namespace

TEST_CASE("stable step is the smaller of the diffusive and reactive limits") {
  const LandauPotential pot;
  const Grid g = Grid::with_cells(2, 1.0, 40);
  SolverConfig cfg;
  cfg.eps = 0.03;
  cfg.safety = 0.5;
  LdgSolver s(pot, cfg, g);
  const double diffusive = g.h * g.h / 8.0;
  const double reactive = cfg.eps * cfg.eps / pot.hessian_bound(3.2);
  CHECK(s.stable_dt(3.2) == doctest::Approx(0.5 * std::min(diffusive, reactive)).epsilon(1e-14));

  cfg.eps = 10.0;
  LdgSolver wide(pot, cfg, g);
  CHECK(wide.stable_dt(3.2) == doctest::Approx(0.5 * diffusive).epsilon(1e-14));
}

TEST_CASE("invalid solver settings are rejected") {
  const Grid g = Grid::with_cells(1, 1.0, 8);
  SolverConfig cfg;
  cfg.safety = 1.5;
  CHECK_THROWS_AS(LdgSolver(LandauPotential{}, cfg, g), ConfigError);
  cfg = SolverConfig{};
  cfg.eps = 0.0;
  CHECK_THROWS_AS(LdgSolver(LandauPotential{}, cfg, g), ConfigError);
  cfg = SolverConfig{};
  cfg.threads = 0;
  CHECK_THROWS_AS(LdgSolver(LandauPotential{}, cfg, g), ConfigError);
}

TEST_CASE("uniform nematic state is stationary under periodic conditions") {
  const Grid g = Grid::with_cells(2, 1.0, 16);
  SolverConfig cfg;
  cfg.bc = Boundary::Periodic;
  LdgSolver s(LandauPotential{}, cfg, g);
  TensorField q(g), r(g);
  q.fill(uniaxial(3.0, {0.6, 0.0, 0.8}).coeffs());
  s.rhs(q, r);
  double m = 0.0;
  for_each_cell(g, [&](int i, int j, int) {
    for (int c = 0; c < 5; ++c) m = std::max(m, std::abs(r.plane(c)[g.index(i, j)]));
  });
  CHECK(m < 1e-9);
}

TEST_CASE("linear Fourier mode follows the discrete amplification factor") {
  for (Scheme sc : {Scheme::Euler, Scheme::RK2}) {
    CAPTURE(to_string(sc));
    double gain = 0.0;
    const double err = evolve_mode(sc, 200, 0.02, &gain);
    const double lambda_T = (4.0 / std::pow(2.0 / 64, 2) * std::pow(std::sin(M_PI / 64), 2) + 3.0 / 0.09) * 0.02;
    const double amplitude = err + std::exp(-lambda_T);
    CHECK(amplitude == doctest::Approx(gain).epsilon(1e-6));
  }
}

TEST_CASE("Euler converges at first order and RK2 at second order") {
  const double e1 = std::abs(evolve_mode(Scheme::Euler, 100, 0.02));
  const double e2 = std::abs(evolve_mode(Scheme::Euler, 200, 0.02));
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
  const double r1 = std::abs(evolve_mode(Scheme::RK2, 100, 0.02));
  const double r2 = std::abs(evolve_mode(Scheme::RK2, 200, 0.02));
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("callbacks fire at every cadence multiple") {
  const Grid g = Grid::with_cells(1, 1.0, 16);
  SolverConfig cfg;
  cfg.eps = 0.2;
  cfg.t_end = 0.05;
  cfg.cadence = 0.01;
  std::vector<double> times;
  auto record = [&](const TensorField&, const TensorField&, const RunState& st) { times.push_back(st.t); };
  {
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q(g);
    s.run(q, record);
  }
  REQUIRE(times.size() == 6);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(times[k] == doctest::Approx(0.01 * k).epsilon(1e-12));

  times.clear();
  cfg.t_end = 0.055;
  {
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q(g);
    const RunState st = s.run(q, record);
    CHECK(st.t == doctest::Approx(0.055).epsilon(1e-14));
  }
  CHECK(times.size() == 6);

  times.clear();
  cfg.cadence = 0.0;
  {
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q(g);
    s.run(q, record);
  }
  REQUIRE(times.size() == 2);
  CHECK(times.back() == doctest::Approx(0.055).epsilon(1e-14));
}

TEST_CASE("non-finite states raise StabilityError") {
  const Grid g = Grid::with_cells(1, 1.0, 16);
  SolverConfig cfg;
  cfg.t_end = 0.01;
  {
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q(g);
    q.plane(2)[g.index(5)] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(s.run(q), StabilityError);
  }
  {
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q(g), r(g);
    q.plane(0)[g.index(3)] = 1e100;
    s.prepare(q);
    auto blow_up = [&] {
      for (int n = 0; n < 5; ++n) {
        s.rhs(q, r);
        s.step(q, r, 1e-3);
      }
    };
    CHECK_THROWS_AS(blow_up(), StabilityError);
  }
}

TEST_CASE("energy decreases and the dissipation balance converges with dt") {
  const Grid g = Grid::with_cells(2, 1.0, 32);
  const LandauPotential pot;
  auto residual = [&](Scheme sc, double safety) {
    SolverConfig cfg = small_2d_config();
    cfg.scheme = sc;
    cfg.safety = safety;
    cfg.cadence = 0.001;
    LdgSolver s(pot, cfg, g);
    TensorField q = small_2d_field(g);
    const double E0 = gl_energy(q, pot, cfg.eps, cfg.bc);
    double last = E0;
    bool monotone = true;
    s.run(q, [&](const TensorField& f, const TensorField&, const RunState&) {
      const double E = gl_energy(f, pot, cfg.eps, cfg.bc);
      monotone = monotone && E <= last + 1e-12 * std::abs(E0);
      last = E;
    });
    CHECK(monotone);
    CHECK(last < E0);
    return std::abs(last - E0 + s.state().dissipation);
  };
  const double coarse = residual(Scheme::Euler, 0.5);
  const double fine = residual(Scheme::Euler, 0.25);
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.2));
  CHECK(residual(Scheme::RK2, 0.5) < coarse);
}

TEST_CASE("results do not depend on the thread count") {
  const Grid g = Grid::with_cells(2, 1.0, 40);
  auto run = [&](int threads) {
    SolverConfig cfg = small_2d_config();
    cfg.scheme = Scheme::RK2;
    cfg.threads = threads;
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q = small_2d_field(g);
    const RunState st = s.run(q);
    return std::make_pair(q, st.dissipation);
  };
  const auto [q1, d1] = run(1);
  const auto [q4, d4] = run(4);
  CHECK(d1 == d4);
  bool same = true;
  for (int c = 0; c < 5; ++c)
    for (std::size_t p = 0; p < g.padded_count(); ++p) same = same && q1.plane(c)[p] == q4.plane(c)[p];
  CHECK(same);
}

TEST_CASE("vector and scalar kernels produce the same trajectory") {
  if (!avx2_compiled() || !cpu_supports_avx2()) return;
  const Grid g = Grid::with_cells(2, 1.0, 40);
  auto run = [&](KernelKind kind) {
    SolverConfig cfg = small_2d_config();
    cfg.kernel = kind;
    LdgSolver s(LandauPotential{}, cfg, g);
    TensorField q = small_2d_field(g);
    s.run(q);
    return q;
  };
  const TensorField a = run(KernelKind::Scalar);
  const TensorField b = run(KernelKind::Avx2);
  double diff = 0.0;
  for (int c = 0; c < 5; ++c)
    for_each_cell(g, [&](int i, int j, int) {
      diff = std::max(diff, std::abs(a.plane(c)[g.index(i, j)] - b.plane(c)[g.index(i, j)]));
    });
  CHECK(diff < 1e-10 * a.max_norm());
}

TEST_CASE("the standing profile is stationary up to the second-order truncation") {
  const PotentialCoefficients k;
  const double eps = 0.05;
  auto sup_rhs = [&](double h) {
    TensorField q = standing_profile(k, eps, h, 1.0, 0.5);
    SolverConfig cfg;
    cfg.eps = eps;
    cfg.kernel = KernelKind::Scalar;
    LdgSolver s(LandauPotential(k), cfg, q.grid());
    TensorField r(q.grid());
    s.rhs(q, r);
    return max_abs(r);
  };
  const double coarse = sup_rhs(eps / 8), fine = sup_rhs(eps / 16);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
  // Relative to the size of either side of the equation.
  CHECK(fine * eps * eps / 3.0 < 1e-2);
}
