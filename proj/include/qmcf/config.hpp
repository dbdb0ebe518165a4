#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmcf/grid.hpp"
#include "qmcf/initial_data.hpp"
#include "qmcf/kernels.hpp"
#include "qmcf/potential.hpp"
#include "qmcf/quasi_distance.hpp"
#include "qmcf/solver.hpp"

namespace qmcf {

/// Complete description of a run. Every field has a default, so an empty
/// configuration file is valid.
struct RunConfig {
  struct Domain {
    double L = 1.0;  ///< half-width of the box [-L, L]^dim
    int dim = 2;
    double h = 0.0;  ///< grid spacing; 0 selects eps / 4
  } domain;
  struct Interface {
    double R0 = 0.4;
    Vec3 center{0.0, 0.0, 0.0};
    double delta_I = 0.2;
  } interface;
  PotentialCoefficients model;
  double eps = 0.03;
  struct Init {
    DirectorPreset director;
    double delta0 = 0.2;
  } init;
  struct Solver {
    Scheme scheme = Scheme::Euler;
    double safety = 0.25;
    double t_end = 0.06;
    double snapshot_every = 0.002;
    KernelKind kernel = KernelKind::Auto;
    int threads = 1;
    Boundary bc = Boundary::Dirichlet;
  } solver;
  struct Diagnostics {
    std::string dtable_path;  ///< load the table from here when set
    double levelset_fraction = 0.5;
    double bound_ceiling = 50.0;
    double gronwall_ceiling = 100.0;
    int table_ns = 400;
    int table_nr = 500;
    TableMethod table_method = TableMethod::FastMarching;
    bool director_reference = true;  ///< run the harmonic map reference (2-D only)
  } diagnostics;
  struct Output {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int snapshot_stride = 0;  ///< write every k-th sample; 0 writes only the first and last
    bool vtk = false;
  } output;

  double spacing() const { return domain.h > 0.0 ? domain.h : eps / 4.0; }
  Grid grid() const { return Grid::make(domain.dim, domain.L, spacing()); }
  ShrinkingSphere sphere() const;
  SolverConfig solver_config() const;
  ProfileParams profile() const { return {eps, init.delta0}; }
  TableSpec table_spec() const;

  /// Runs every consistency check of the owning modules. ConfigError on failure.
  void validate() const;
};

/// Parses INI text. Unknown sections or keys, malformed values and failed
/// checks raise ConfigError naming the offending key path.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

/// Applies one "section.key=value" assignment without validating.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// INI rendering that parses back to the same configuration.
std::string config_echo(const RunConfig& cfg);

}  // namespace qmcf
