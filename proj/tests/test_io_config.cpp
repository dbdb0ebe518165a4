#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qmcf/config.hpp"
#include "qmcf/contour.hpp"
#include "qmcf/errors.hpp"
#include "qmcf/field_io.hpp"

using namespace qmcf;
namespace fs = std::filesystem;

namespace {

TensorField random_field(const Grid& g, std::uint64_t seed) {
  TensorField q(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for_each_cell(g, [&](int i, int j, int k) {
    for (int c = 0; c < 5; ++c) q.plane(c)[g.index(i, j, k)] = n(rng) / 3.0;
  });
  q.t = 0.0123456789012345;
  return q;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qmcf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("snapshots round-trip bit for bit") {
  for (int dim : {1, 2, 3}) {
    CAPTURE(dim);
    const Grid g = Grid::with_cells(dim, 0.75, 6);
    const TensorField q = random_field(g, 100 + dim);
    std::stringstream ss;
    write_snapshot(ss, q, 0.037);
    const Snapshot s = read_snapshot(ss);
    CHECK(s.eps == 0.037);
    CHECK(s.field.t == q.t);
    const Grid& r = s.field.grid();
    CHECK(r.dim == dim);
    CHECK(r.n == g.n);
    CHECK(r.h == g.h);
    CHECK(r.L == doctest::Approx(0.75).epsilon(1e-15));
    bool same = true;
    for_each_cell(g, [&](int i, int j, int k) {
      same = same && q.get(g.index(i, j, k)) == s.field.get(r.index(i, j, k));
    });
    CHECK(same);
  }
}

TEST_CASE("malformed snapshots are rejected") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_snapshot(in);
  };
  CHECK_THROWS_AS(parse(""), DomainError);
  CHECK_THROWS_AS(parse("VTK 1 4 0.5 0 0.03\n"), DomainError);
  CHECK_THROWS_AS(parse("QMCF1 4 4 0.5 0 0.03\n"), DomainError);
  CHECK_THROWS_AS(parse("QMCF1 1 2 0.5 0 0.03\n0 0 0 0 0\n"), DomainError);
  CHECK_THROWS_AS(parse("QMCF1 1 2 0.5 0 0.03\n0 0 0 0 0\n0 0 x 0 0\n"), DomainError);
  CHECK_THROWS_AS(parse("QMCF1 1 2 -0.5 0 0.03\n0 0 0 0 0\n0 0 0 0 0\n"), DomainError);
  CHECK_NOTHROW(parse("QMCF1 1 2 0.5 0 0.03\n0 0 0 0 0\n0 0 1 0 0\n"));
  CHECK_THROWS_AS(read_snapshot_file("/nonexistent/snapshot.qmcf"), DomainError);
}

TEST_CASE("snapshot and VTK files are written atomically") {
  const fs::path dir = scratch_dir("io");
  const Grid g = Grid::with_cells(2, 1.0, 4);
  TensorField q(g);
  q.fill(uniaxial(2.0, {0, 0, 1}).coeffs());
  write_snapshot_file((dir / "a.qmcf").string(), q, 0.05);
  const Snapshot s = read_snapshot_file((dir / "a.qmcf").string());
  CHECK(s.field.at(3, 3)[0] == q.at(3, 3)[0]);

  write_vtk_s((dir / "s.vtk").string(), q);
  const std::string vtk = slurp(dir / "s.vtk");
  CHECK(vtk.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(vtk.find("DATASET STRUCTURED_POINTS") != std::string::npos);
  CHECK(vtk.find("DIMENSIONS 4 4 1") != std::string::npos);
  CHECK(vtk.find("POINT_DATA 16") != std::string::npos);
  std::istringstream lines(vtk.substr(vtk.find("LOOKUP_TABLE default") + 21));
  int values = 0;
  for (double v; lines >> v; ++values) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(values == 16);

  write_file_atomic((dir / "m.txt").string(), "first");
  write_file_atomic((dir / "m.txt").string(), "second");
  CHECK(slurp(dir / "m.txt") == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 3);
  fs::remove_all(dir);
}

TEST_CASE("marching squares and circle fit") {
  const int n = 100;
  const double h = 0.02, x0 = -0.99;
  std::vector<double> f(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) f[j * n + i] = std::hypot(x0 + i * h - 0.1, x0 + j * h + 0.2);
  const Contour c = marching_squares(f, n, n, x0, x0, h, 0.5);
  CHECK(c.points.size() > 50);
  CHECK(c.segments.size() >= c.points.size() - 1);
  for (const auto& p : c.points) CHECK(std::hypot(p[0] - 0.1, p[1] + 0.2) == doctest::Approx(0.5).epsilon(2e-3));
  const CircleFit fit = fit_circle(c.points);
  CHECK(fit.R == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(fit.cx == doctest::Approx(0.1).epsilon(1e-3));
  CHECK(fit.cy == doctest::Approx(-0.2).epsilon(1e-3));
  CHECK(fit.rms < 1e-3);

  CHECK_THROWS_AS(fit_circle({{0, 0}, {1, 1}}), DegenerateInputError);
  CHECK_THROWS_AS(fit_circle({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateInputError);
  CHECK(marching_squares(std::vector<double>(16, 1.0), 4, 4, 0, 0, 1, 0.5).points.empty());
}

TEST_CASE("an empty configuration yields the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.eps == 0.03);
  CHECK(c.domain.dim == 2);
  CHECK(c.spacing() == doctest::Approx(0.0075));
  CHECK(c.solver.t_end == 0.06);
  CHECK(c.model.s_plus() == 3.0);
  CHECK(c.diagnostics.table_ns == 400);
  CHECK(c.diagnostics.table_nr == 500);
}

TEST_CASE("configuration values and overrides") {
  const std::string text =
      "[domain]\nL = 1.2\nh = 0.01\n"
      "[model]\neps = 0.04\n"
      "[init]\ndirector = in-plane\nkappa = 0.7\n"
      "[solver]\nscheme = rk2\nthreads = 3\nbc = dirichlet\n"
      "[output]\nout_dir = results\nvtk = true\n";
  const RunConfig c = parse_config(text, {"solver.t_end=0.01", "model.eps=0.05"});
  CHECK(c.domain.L == 1.2);
  CHECK(c.spacing() == 0.01);
  CHECK(c.eps == 0.05);
  CHECK(c.init.director.kind == DirectorPreset::Kind::InPlane);
  CHECK(c.init.director.kappa == 0.7);
  CHECK(c.solver.scheme == Scheme::RK2);
  CHECK(c.solver.threads == 3);
  CHECK(c.solver.t_end == 0.01);
  CHECK(c.output.out_dir == "results");
  CHECK(c.output.vtk);
  CHECK(c.solver_config().eps == 0.05);
  CHECK(c.grid().n[0] == 240);

  const RunConfig back = parse_config(config_echo(c));
  CHECK(config_echo(back) == config_echo(c));
  CHECK(back.eps == c.eps);
  CHECK(back.init.director.kappa == c.init.director.kappa);
}

TEST_CASE("invalid configurations name the offending key") {
  auto message = [](const std::string& text, std::vector<std::string> ov = {}) -> std::string {
    try {
      parse_config(text, ov);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("[model]\nb = 10\n").find("model") != std::string::npos);
  CHECK(message("[model]\neps = -0.1\n").find("model.eps") != std::string::npos);
  CHECK(message("[model]\neps = 0\n").find("model.eps") != std::string::npos);
  CHECK(message("[domain]\nwidth = 2\n").find("domain.width") != std::string::npos);
  CHECK(message("[nowhere]\nx = 1\n").find("nowhere.x") != std::string::npos);
  CHECK(message("[domain]\ndim = two\n").find("domain.dim") != std::string::npos);
  CHECK(message("[solver]\nscheme = leapfrog\n").find("leapfrog") != std::string::npos);
  CHECK(message("", {"solver.t_end"}).find("solver.t_end") != std::string::npos);
  CHECK(message("", {"solver.t_end=1.0"}).find("solver.t_end") != std::string::npos);
  CHECK(message("[output]\nvtk = maybe\n").find("output.vtk") != std::string::npos);
  CHECK(message("[interface]\nR0 = 0.95\n") != "");
  CHECK_THROWS_AS(parse_config_file("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("overrides apply one key at a time") {
  RunConfig c;
  apply_override(c, "interface.center=0.1, -0.2");
  CHECK(c.interface.center[0] == 0.1);
  CHECK(c.interface.center[1] == -0.2);
  CHECK(c.interface.center[2] == 0.0);
  apply_override(c, "diagnostics.table_method=dijkstra8");
  CHECK(c.diagnostics.table_method == TableMethod::Dijkstra8);
  CHECK_THROWS_AS(apply_override(c, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "interface.center=1,2,3,4"), ConfigError);
}
