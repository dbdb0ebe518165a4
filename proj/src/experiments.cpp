#include "qmcf/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "qmcf/errors.hpp"
#include "qmcf/field_io.hpp"
#include "qmcf/format.hpp"
#include "qmcf/harmonic_map.hpp"
#include "qmcf/initial_data.hpp"
#include "qmcf/interface_geometry.hpp"

namespace qmcf {

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

std::string fmt(double v) { return format_double(v); }

Check make_check(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vec3 v{g(rng), g(rng), g(rng)};
    const double n = norm(v);
    if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

Coeffs5 random_in_ball(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Coeffs5 c{};
  double n2 = 0.0;
  for (auto& x : c) {
    x = g(rng);
    n2 += x * x;
  }
  const double scale = radius * std::pow(u(rng), 0.2) / std::sqrt(n2);
  for (auto& x : c) x *= scale;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

PotentialVerification verify_potential(const PotentialCoefficients& k, std::uint64_t seed) {
  k.validate();
  const LandauPotential pot(k);
  PotentialVerification v;
  std::mt19937_64 rng(seed);
  v.s_plus = pot.s_plus();
  const double s_closed = (k.b + std::sqrt(k.b * k.b - 24.0 * k.a * k.c)) / (4.0 * k.c);
  v.checks.push_back(make_check("s_plus closed form", std::abs(v.s_plus - s_closed) <= 1e-14 * s_closed,
                                "s_plus = " + fmt(v.s_plus)));

  auto gnorm = [&](const Coeffs5& q) {
    const Coeffs5 g = pot.gradient(q);
    double acc = 0.0;
    for (double x : g) acc += x * x;
    return std::sqrt(acc);
  };
  v.max_grad_minima = gnorm(Coeffs5{});
  for (int n = 0; n < 20; ++n)
    v.max_grad_minima = std::max(v.max_grad_minima, gnorm(uniaxial(v.s_plus, random_unit(rng)).coeffs()));
  v.checks.push_back(make_check("gradient vanishes on minimizers", v.max_grad_minima <= 1e-12,
                                "max |grad F| = " + fmt(v.max_grad_minima)));

  for (int n = 0; n < 100; ++n) {
    const Coeffs5 q = random_in_ball(rng, 2.5);
    const Coeffs5 g = pot.gradient(q);
    double err = 0.0, gn = 0.0;
    for (int c = 0; c < 5; ++c) {
      constexpr double step = 1e-5;
      Coeffs5 qp = q, qm = q;
      qp[c] += step;
      qm[c] -= step;
      const double fd = (pot.energy(qp) - pot.energy(qm)) / (2.0 * step);
      err += (fd - g[c]) * (fd - g[c]);
      gn += g[c] * g[c];
    }
    v.max_fd_rel = std::max(v.max_fd_rel, std::sqrt(err) / std::max(std::sqrt(gn), 1.0));
  }
  v.checks.push_back(make_check("gradient matches finite differences", v.max_fd_rel <= 1e-6,
                                "max relative error = " + fmt(v.max_fd_rel)));

  for (int n = 0; n < 200; ++n) {
    const QTensor q(random_in_ball(rng, 3.0));
    const Eigensystem es = eigensystem(q);
    Mat3 rec;
    for (int i = 0; i < 3; ++i) rec += es.lambda[i] * Mat3::outer(es.frame[i], es.frame[i]);
    v.max_eig_residual = std::max(v.max_eig_residual, frob_norm(rec - q.matrix()));
  }
  v.checks.push_back(make_check("eigen-decomposition reconstructs tensors", v.max_eig_residual <= 1e-12,
                                "max residual = " + fmt(v.max_eig_residual)));

  double basis_err = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      basis_err = std::max(basis_err, std::abs(contract(basis_tensor(i), basis_tensor(j)) - (i == j ? 1.0 : 0.0)));
  v.checks.push_back(make_check("tensor basis is orthonormal", basis_err <= 1e-14, "max error = " + fmt(basis_err)));

  v.hessian_bound = pot.hessian_bound(v.s_plus + 0.1);
  v.checks.push_back(make_check("reaction stiffness bound is finite", std::isfinite(v.hessian_bound) && v.hessian_bound > 0,
                                "Lambda = " + fmt(v.hessian_bound)));
  return v;
}

// ---------------------------------------------------------------------------

GeodesicTable obtain_table(const RunConfig& cfg) {
  const LandauPotential pot(cfg.model);
  const std::string& path = cfg.diagnostics.dtable_path;
  if (path.empty()) return GeodesicTable::build(pot, cfg.table_spec());
  if (!std::filesystem::exists(path)) throw ConfigError("diagnostics.dtable_path: no such file '" + path + "'");
  GeodesicTable t = GeodesicTable::load_file(path);
  const auto& k = t.coeffs();
  if (k.a != cfg.model.a || k.b != cfg.model.b || k.c != cfg.model.c || k.K != cfg.model.K)
    throw ConfigError("diagnostics.dtable_path: table was built for different model coefficients");
  return t;
}

// ---------------------------------------------------------------------------

TensorField standing_profile(const PotentialCoefficients& k, double eps, double h, double L, double R0) {
  const Grid g = Grid::make(1, L, h);
  const ShrinkingSphere sphere(1, {0.0, 0.0, 0.0}, R0, std::min(0.2, 0.5 * (L - R0)));
  return build_initial(g, sphere, DirectorPreset::constant({0.0, 0.0, 1.0}), k, ProfileParams{eps, 2.0 * L});
}

double front_position(const TensorField& q, double level) {
  const Grid& g = q.grid();
  if (g.dim != 1) throw DomainError("front_position: one-dimensional fields only");
  for (int i = g.n[0] / 2; i + 1 < g.n[0]; ++i) {
    const double a = biaxiality(q.at(i)).s, b = biaxiality(q.at(i + 1)).s;
    if (a >= level && b < level) return g.coord(i) + (a - level) / (a - b) * g.h;
  }
  throw ExtinctionError("front_position: no crossing on the positive half-axis");
}

StandingWaveResult standing_wave(const PotentialCoefficients& k, const StandingWaveParams& p) {
  const LandauPotential pot(k);
  TensorField q = standing_profile(k, p.eps, p.h, p.L, p.R0);
  const Grid& g = q.grid();
  std::vector<double> s0(g.interior_count());
  for (int i = 0; i < g.n[0]; ++i) s0[i] = biaxiality(q.at(i)).s;
  const double level = 0.5 * pot.s_plus();
  StandingWaveResult r;
  r.h = g.h;
  const double x0 = front_position(q, level);
  r.E_gl0 = gl_energy(q, pot, p.eps, Boundary::Dirichlet);

  SolverConfig sc;
  sc.eps = p.eps;
  sc.scheme = p.scheme;
  sc.safety = p.safety;
  sc.t_end = p.t_end;
  sc.kernel = p.kernel;
  sc.threads = p.threads;
  LdgSolver solver(pot, sc, g);
  const RunState st = solver.run(q);
  r.steps = st.step;

  double acc = 0.0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double d = biaxiality(q.at(i)).s - s0[i];
    acc += d * d;
  }
  r.drift_l2 = std::sqrt(acc * g.h);
  r.front_shift = std::abs(front_position(q, level) - x0);
  r.E_gl1 = gl_energy(q, pot, p.eps, Boundary::Dirichlet);
  return r;
}

double standing_stress_residual(const PotentialCoefficients& k, double eps, double h) {
  const LandauPotential pot(k);
  TensorField q = standing_profile(k, eps, h, 1.0, 0.5);
  SolverConfig sc;
  sc.eps = eps;
  LdgSolver solver(pot, sc, q.grid());
  TensorField r(q.grid());
  solver.rhs(q, r);
  return stress_divergence_residual(q, r, pot, eps);
}

// ---------------------------------------------------------------------------

SimulationResult run_simulation(const RunConfig& cfg, const GeodesicTable& table, const SimulationOptions& opt) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const LandauPotential pot(cfg.model);
  const Grid grid = cfg.grid();
  const ShrinkingSphere sphere = cfg.sphere();
  const double eps = cfg.eps;
  TensorField q = build_initial(grid, sphere, cfg.init.director, cfg.model, cfg.profile());
  LdgSolver solver(pot, cfg.solver_config(), grid);

  DiagnosticsContext ctx;
  ctx.pot = pot;
  ctx.eps = eps;
  ctx.table = &table;
  ctx.sphere = &sphere;
  ctx.bc = cfg.solver.bc;
  ctx.threads = cfg.solver.threads;
  ctx.bound_ceiling = cfg.diagnostics.bound_ceiling;

  const bool planar = grid.dim == 2;
  const bool with_director = cfg.diagnostics.director_reference && planar && cfg.solver.bc == Boundary::Dirichlet;
  HarmonicMapFlow hm(grid, cfg.solver.bc);
  if (with_director) hm.init(cfg.init.director, &sphere, 0.0, 0.0);
  WeakFormResidual weak(pot.s_plus());

  const bool files = !opt.out_dir.empty();
  std::ofstream csv;
  if (files) {
    std::filesystem::create_directories(opt.out_dir);
    csv.open(std::filesystem::path(opt.out_dir) / "series.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write series.csv in " + opt.out_dir);
    csv << csv_header() << '\n';
  }

  SimulationResult res;
  res.director_checked = with_director;
  std::vector<double> ts, emods, comm_t;
  const double t_end = cfg.solver.t_end;

  auto on_sample = [&](const TensorField& qs, const TensorField& rhs, const RunState& st) {
    const double t = st.t;
    const FieldAnalysis fa = analyze_field(qs, &rhs, ctx, t);
    DiagnosticsRecord rec;
    rec.t = t;
    rec.E_gl = fa.E_gl;
    rec.E_mod = fa.E_mod;
    rec.E_mod_over_eps = fa.E_mod / eps;
    if (res.records.empty()) {
      res.E_gl0 = fa.E_gl;
      res.E_mod0 = fa.E_mod;
    }
    rec.dissipation_cum = st.dissipation;
    rec.dissipation_residual = fa.E_gl - res.E_gl0 + st.dissipation;
    rec.R_exact = sphere.radius(t);
    rec.R_fit = std::numeric_limits<double>::quiet_NaN();
    if (planar) {
      res.R_fit_available = true;
      try {
        rec.R_fit = interface_extract(qs, cfg.diagnostics.levelset_fraction, pot.s_plus()).R;
        res.max_R_error = std::max(res.max_R_error, std::abs(rec.R_fit - rec.R_exact));
      } catch (const ExtinctionError&) {
        res.R_fit_lost = true;
      }
    }
    rec.max_abs_Q = fa.max_abs_Q;
    rec.comm_grad_l2 = fa.comm_grad_l2;
    rec.comm_time_l2 = fa.comm_rhs_l2;
    rec.bounds = fa.bound_ratio;
    rec.stress_residual = stress_divergence_residual(qs, rhs, pot, eps);

    const double gap = std::abs(fa.calib_chain - fa.calib_ibp) / std::max(std::abs(fa.calib_ibp), 1e-300);
    if (std::abs(fa.calib_ibp) > 0.0) res.calib_max_rel_gap = std::max(res.calib_max_rel_gap, gap);
    res.lipschitz_excess = std::max(res.lipschitz_excess, fa.lipschitz_excess);
    res.comm_identity_max = std::max(res.comm_identity_max, fa.comm_identity_max);
    res.chain_rule_max_rel = std::max(res.chain_rule_max_rel, fa.chain_rule_max_rel);
    res.comm_grad_linf = std::max(res.comm_grad_linf, fa.comm_grad_l2);
    for (int k = 0; k < 5; ++k) res.max_bound_ratio[k] = std::max(res.max_bound_ratio[k], fa.bound_ratio[k]);
    ts.push_back(t);
    emods.push_back(fa.E_mod);
    comm_t.push_back(fa.comm_rhs_l2);

    if (with_director) {
      hm.advance_to(t, &sphere, 0.0);
      try {
        res.director_final = director_compare(qs, hm, sphere, t, eps);
        res.director_max_dev = std::max(res.director_max_dev, res.director_final.max_dev);
        res.director_defect = res.director_defect || res.director_final.defect;
      } catch (const ExtinctionError&) {
        res.director_defect = true;
      }
      weak.add_sample(qs, rhs, sphere, t);
    }

    res.records.push_back(rec);
    if (files) {
      csv << csv_row(rec) << '\n';
      csv.flush();
      const bool last = std::abs(t - t_end) <= 1e-12 * (1.0 + t_end);
      const int stride = cfg.output.snapshot_stride;
      const bool snap = stride > 0 ? st.sample % static_cast<std::size_t>(stride) == 0 : (st.sample == 0 || last);
      if (snap) {
        const auto base = std::filesystem::path(opt.out_dir);
        write_snapshot_file((base / ("snap_" + std::to_string(st.step) + ".qmcf")).string(), qs, eps);
        if (cfg.output.vtk) write_vtk_s((base / ("field_s_" + std::to_string(st.step) + ".vtk")).string(), qs);
      }
    }
    if (opt.log)
      *opt.log << "t=" << std::setprecision(6) << t << " E_gl=" << fa.E_gl << " E_mod=" << fa.E_mod
               << " R_fit=" << rec.R_fit << " R_exact=" << rec.R_exact << '\n';
  };

  res.kernel = solver.kernel();
  res.state = solver.run(q, on_sample);

  // Summaries.
  for (std::size_t k = 1; k < ts.size(); ++k)
    res.comm_time_l2 += 0.5 * (ts[k] - ts[k - 1]) * (comm_t[k] * comm_t[k] + comm_t[k - 1] * comm_t[k - 1]);
  res.comm_time_l2 = std::sqrt(res.comm_time_l2);
  const double floor = eps * 1e-6;
  for (double e : emods) res.max_E_mod_growth = std::max(res.max_E_mod_growth, std::max(e, floor) / std::max(res.E_mod0, floor));
  if (ts.size() >= 10) res.gronwall = gronwall_report(ts, emods, eps, cfg.diagnostics.gronwall_ceiling);
  if (with_director && weak.samples() >= 2) {
    res.weak_form_relative = weak.relative();
    res.weak_form_absolute = weak.absolute();
    res.weak_form_weighted = weak.relative_weighted();
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  // Checks against the configured thresholds.
  auto& c = res.checks;
  const double h = grid.h;
  if (res.R_fit_available) {
    const double tol = std::max(3.0 * eps, 3.0 * h);
    c.push_back(make_check("radius tracks the exact law", !res.R_fit_lost && res.max_R_error <= tol,
                           "max |R_fit - R_exact| = " + fmt(res.max_R_error) + ", tolerance " + fmt(tol)));
  }
  c.push_back(make_check("modulated energy growth", res.max_E_mod_growth <= 5.0,
                         "max E_mod(t)/E_mod(0) = " + fmt(res.max_E_mod_growth)));
  double worst = 0.0;
  for (double b : res.max_bound_ratio) worst = std::max(worst, b);
  c.push_back(make_check("bound suite ratios", worst <= cfg.diagnostics.bound_ceiling,
                         "max ratio = " + fmt(worst) + ", ceiling " + fmt(cfg.diagnostics.bound_ceiling)));
  c.push_back(make_check("maximum modulus", res.state.max_sup <= res.state.initial_sup + 1e-6,
                         "sup |Q| = " + fmt(res.state.max_sup) + ", initial " + fmt(res.state.initial_sup)));
  if (ts.size() >= 10)
    c.push_back(make_check("gronwall growth", res.gronwall.ok, "C_fit = " + fmt(res.gronwall.C_fit)));
  c.push_back(make_check("calibration quadratures agree", res.calib_max_rel_gap <= 0.01,
                         "max relative gap = " + fmt(res.calib_max_rel_gap)));
  const double resid = res.records.empty() ? 0.0 : std::abs(res.records.back().dissipation_residual);
  const double allowed = 0.02 * std::abs(res.E_gl0) * std::max(t_end, 1e-300);
  c.push_back(make_check("energy dissipation balance", resid <= allowed,
                         "|residual| = " + fmt(resid) + ", allowed " + fmt(allowed)));
  c.push_back(make_check("commutator identity", res.comm_identity_max <= 1e-6,
                         "max |[grad dF, Q]| / (1 + |Q|^2) = " + fmt(res.comm_identity_max)));
  if (with_director) {
    if (cfg.init.director.kind == DirectorPreset::Kind::Constant)
      c.push_back(make_check("director stays constant", !res.director_defect && res.director_max_dev <= 1e-3,
                             "max deviation = " + fmt(res.director_max_dev)));
    else
      c.push_back(make_check("director follows harmonic map flow", !res.director_defect && res.director_final.l2 <= 0.1,
                             "final L2 distance = " + fmt(res.director_final.l2)));
    c.push_back(make_check("director weak form", res.weak_form_relative <= 0.05,
                           "relative residual = " + fmt(res.weak_form_relative)));
  }
  return res;
}

// ---------------------------------------------------------------------------

std::vector<ColumnSummary> summarize_series(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw DomainError("report: cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("report: empty series");
  std::vector<ColumnSummary> cols;
  {
    std::istringstream hs(line);
    std::string name;
    while (std::getline(hs, name, ',')) cols.push_back({name});
  }
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string tok;
    std::size_t k = 0;
    for (; std::getline(rs, tok, ','); ++k) {
      if (k >= cols.size()) throw DomainError("report: too many fields in row " + std::to_string(rows + 1));
      const double v = tok == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_double(tok);
      auto& c = cols[k];
      if (rows == 0) {
        c.min = c.max = c.first = v;
      } else {
        c.min = std::fmin(c.min, v);
        c.max = std::fmax(c.max, v);
      }
      c.last = v;
    }
    if (k != cols.size()) throw DomainError("report: too few fields in row " + std::to_string(rows + 1));
    ++rows;
  }
  if (rows == 0) throw DomainError("report: series has no rows");
  return cols;
}

// ---------------------------------------------------------------------------

namespace {

struct ManifestData {
  std::string command;
  std::string checksum;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> values;
  std::string error;
};

std::string render_manifest(const RunConfig& cfg, const ManifestData& m, double wall) {
  std::ostringstream os;
  os << "qmcf manifest\nversion = " << kVersion << "\ncommand = " << m.command << "\n";
  os << "dtable_checksum = " << (m.checksum.empty() ? "none" : m.checksum) << "\n";
  os << "wall_seconds = " << fmt(wall) << "\n";
  for (const auto& [k, v] : m.values) os << k << " = " << v << "\n";
  if (!m.error.empty()) os << "error = " << m.error << "\n";
  os << "\n[checks]\n";
  for (const auto& c : m.checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << " : " << c.detail << "\n";
  os << "\n[config]\n" << config_echo(cfg);
  return os.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

int command_code(const std::string& name) {
  if (name == "verify-potential") return kExitVerifyPotential;
  if (name == "build-dtable") return kExitBuildTable;
  if (name == "profile-1d") return kExitProfile;
  if (name == "mcf-benchmark") return kExitBenchmark;
  if (name == "simulate") return kExitSimulate;
  if (name == "report") return kExitReport;
  throw ConfigError("unknown subcommand '" + name + "'");
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const auto& c : checks) out << (c.pass ? "PASS " : "FAIL ") << c.name << " : " << c.detail << '\n';
}

}  // namespace

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int fail_code = command_code(name);
  const auto wall0 = std::chrono::steady_clock::now();
  const std::filesystem::path dir(cfg.output.out_dir);
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / ".failed");
  ManifestData m;
  m.command = name;
  int code = kExitOk;
  bool checks_gate = false;

  try {
    if (name == "verify-potential") {
      const auto v = verify_potential(cfg.model, cfg.output.seed);
      out << "s_plus = " << fmt(v.s_plus) << '\n';
      m.checks = v.checks;
      m.values = {{"s_plus", fmt(v.s_plus)}, {"hessian_bound", fmt(v.hessian_bound)}};
      checks_gate = true;
    } else if (name == "build-dtable") {
      const LandauPotential pot(cfg.model);
      const GeodesicTable t = GeodesicTable::build(pot, cfg.table_spec());
      const std::string path =
          cfg.diagnostics.dtable_path.empty() ? (dir / "dtable.txt").string() : cfg.diagnostics.dtable_path;
      t.save_file(path);
      m.checksum = hex64(t.checksum());
      out << "checksum = " << m.checksum << "\nwritten " << path << '\n';
      const double c0 = t.value(0.0, 0.0), cf = cF(pot);
      m.values = {{"path", path}, {"value_at_origin", fmt(c0)}, {"surface_tension", fmt(cf)}};
      m.checks.push_back(make_check("table at the isotropic state", std::abs(c0 - cf) <= 0.02 * cf,
                                    "table(0,0) = " + fmt(c0) + ", exact " + fmt(cf)));
      checks_gate = true;
    } else if (name == "profile-1d") {
      StandingWaveParams p;
      p.scheme = cfg.solver.scheme;
      p.safety = cfg.solver.safety;
      p.kernel = cfg.solver.kernel;
      p.threads = cfg.solver.threads;
      const auto r = standing_wave(cfg.model, p);
      const double r1 = standing_stress_residual(cfg.model, p.eps, p.h);
      const double r2 = standing_stress_residual(cfg.model, p.eps, 0.5 * p.h);
      m.values = {{"drift_l2", fmt(r.drift_l2)}, {"front_shift", fmt(r.front_shift)}, {"steps", std::to_string(r.steps)},
                  {"stress_residual_h", fmt(r1)}, {"stress_residual_h2", fmt(r2)}};
      m.checks.push_back(make_check("profile drift", r.drift_l2 <= 1e-3, "L2 drift = " + fmt(r.drift_l2)));
      m.checks.push_back(make_check("front displacement", r.front_shift <= r.h,
                                    "shift = " + fmt(r.front_shift) + ", h = " + fmt(r.h)));
      const double ratio = r1 / r2;
      m.checks.push_back(make_check("stress residual first order", ratio >= 1.4 && ratio <= 2.6,
                                    "ratio under h-halving = " + fmt(ratio)));
      checks_gate = true;
    } else if (name == "mcf-benchmark" || name == "simulate") {
      const GeodesicTable table = obtain_table(cfg);
      m.checksum = hex64(table.checksum());
      SimulationOptions opt;
      opt.out_dir = dir.string();
      opt.log = &out;
      const auto r = run_simulation(cfg, table, opt);
      m.checks = r.checks;
      m.values = {{"steps", std::to_string(r.state.step)},
                  {"dt", fmt(r.state.dt)},
                  {"kernel", to_string(r.kernel)},
                  {"E_mod0", fmt(r.E_mod0)},
                  {"E_mod0_over_eps", fmt(r.E_mod0 / cfg.eps)},
                  {"gronwall_C_fit", fmt(r.gronwall.C_fit)},
                  {"comm_grad_linf", fmt(r.comm_grad_linf)},
                  {"comm_time_l2", fmt(r.comm_time_l2)},
                  {"lipschitz_excess", fmt(r.lipschitz_excess)},
                  {"chain_rule_max_rel", fmt(r.chain_rule_max_rel)},
                  {"weak_form_relative", fmt(r.weak_form_relative)},
                  {"weak_form_weighted", fmt(r.weak_form_weighted)},
                  {"director_l2", fmt(r.director_final.l2)},
                  {"modulus_warnings", std::to_string(r.state.modulus_warnings)}};
      checks_gate = name == "mcf-benchmark";
    } else if (name == "report") {
      const auto cols = summarize_series((dir / "series.csv").string());
      std::ostringstream os;
      os << std::left << std::setw(22) << "column" << std::setw(26) << "first" << std::setw(26) << "last"
         << std::setw(26) << "min" << "max\n";
      for (const auto& c : cols)
        os << std::setw(22) << c.name << std::setw(26) << fmt(c.first) << std::setw(26) << fmt(c.last) << std::setw(26)
           << fmt(c.min) << fmt(c.max) << '\n';
      out << os.str();
      write_file_atomic((dir / "report.txt").string(), os.str());
    }
    print_checks(out, m.checks);
    if (checks_gate && !all_pass(m.checks)) code = fail_code;
  } catch (const StabilityError& e) {
    m.error = e.what();
    code = kExitInstability;
  } catch (const ConfigError& e) {
    m.error = e.what();
    code = kExitConfig;
  } catch (const std::exception& e) {
    m.error = e.what();
    code = fail_code;
  }
  if (!m.error.empty()) err << "error: " << m.error << '\n';
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_file_atomic((dir / "manifest.txt").string(), render_manifest(cfg, m, wall));
  if (code != kExitOk) write_file_atomic((dir / ".failed").string(), m.error.empty() ? "checks failed\n" : m.error + "\n");
  return code;
}

}  // namespace qmcf
