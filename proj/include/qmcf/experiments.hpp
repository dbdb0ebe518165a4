#pragma once

// Experiment drivers shared by the command-line tool and the test suites.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmcf/config.hpp"
#include "qmcf/diagnostics.hpp"
#include "qmcf/quasi_distance.hpp"
#include "qmcf/solver.hpp"

namespace qmcf {

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitVerifyPotential = 2,
  kExitBuildTable = 3,
  kExitProfile = 4,
  kExitBenchmark = 5,
  kExitSimulate = 6,
  kExitReport = 7,
  kExitInstability = 8,
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};
bool all_pass(const std::vector<Check>& checks);

// --- potential -------------------------------------------------------------

struct PotentialVerification {
  double s_plus = 0.0;
  double max_grad_minima = 0.0;  ///< max |grad F| over Q = 0 and random nematic points
  double max_fd_rel = 0.0;       ///< worst relative error of grad F against central differences
  double max_eig_residual = 0.0; ///< eigen-decomposition reconstruction error on random tensors
  double hessian_bound = 0.0;
  std::vector<Check> checks;
};
PotentialVerification verify_potential(const PotentialCoefficients& k, std::uint64_t seed);

// --- geodesic table --------------------------------------------------------

/// Loads the table named in the configuration (checking the coefficients) or builds one.
GeodesicTable obtain_table(const RunConfig& cfg);

// --- 1-D standing wave -----------------------------------------------------

struct StandingWaveParams {
  double eps = 0.02;
  double h = 1.0 / 512.0;
  double L = 1.0;
  double t_end = 0.01;
  double R0 = 0.5;  ///< the two fronts sit at +-R0
  Scheme scheme = Scheme::Euler;
  double safety = 0.25;
  KernelKind kernel = KernelKind::Auto;
  int threads = 1;
};

struct StandingWaveResult {
  double h = 0.0;
  double drift_l2 = 0.0;     ///< || s(t_end) - s(0) ||_{L2}
  double front_shift = 0.0;  ///< displacement of the s = s_plus / 2 crossing
  double E_gl0 = 0.0, E_gl1 = 0.0;
  std::size_t steps = 0;
};

/// The profile glued at x = +-R0 in one dimension, with no plateau cutoff.
TensorField standing_profile(const PotentialCoefficients& k, double eps, double h, double L, double R0);
StandingWaveResult standing_wave(const PotentialCoefficients& k, const StandingWaveParams& p);
/// Stress identity residual of the standing profile at spacing h.
double standing_stress_residual(const PotentialCoefficients& k, double eps, double h);
/// Crossing of s = level on the positive half-axis of a 1-D field, by linear interpolation.
double front_position(const TensorField& q, double level);

// --- time-dependent runs ---------------------------------------------------

struct SimulationOptions {
  std::string out_dir;  ///< empty: no files are written
  std::ostream* log = nullptr;
};

struct SimulationResult {
  std::vector<DiagnosticsRecord> records;
  RunState state;
  KernelKind kernel = KernelKind::Scalar;  ///< variant actually used
  double E_gl0 = 0.0, E_mod0 = 0.0;
  double calib_max_rel_gap = 0.0;    ///< max |chain - by parts| / |by parts| over samples
  double lipschitz_excess = -1.0;    ///< max over samples
  double comm_identity_max = 0.0;
  double chain_rule_max_rel = 0.0;
  double comm_grad_linf = 0.0;       ///< max over samples of || [D Q, Q] ||_{L2}
  double comm_time_l2 = 0.0;         ///< time-L2 norm of || [dQ/dt, Q] ||_{L2}
  std::array<double, 5> max_bound_ratio{};
  double max_R_error = 0.0;          ///< NaN-free maximum of |R_fit - R_exact| (2-D only)
  bool R_fit_available = false;
  bool R_fit_lost = false;           ///< some sample had no contour
  double max_E_mod_growth = 0.0;     ///< max E_mod(t) / E_mod(0)
  GronwallReport gronwall;
  bool director_checked = false;
  DirectorComparison director_final;
  double director_max_dev = 0.0;     ///< max over samples of the pointwise deviation
  bool director_defect = false;
  double weak_form_relative = 0.0;
  double weak_form_absolute = 0.0;
  double weak_form_weighted = 0.0;  ///< commutator form over the whole grid
  double wall_seconds = 0.0;
  std::vector<Check> checks;
};

/// Builds the initial data of cfg, integrates it, evaluates the diagnostics at
/// every sample, and writes series.csv and snapshots when opt.out_dir is set.
SimulationResult run_simulation(const RunConfig& cfg, const GeodesicTable& table, const SimulationOptions& opt = {});

// --- reports ---------------------------------------------------------------

struct ColumnSummary {
  std::string name;
  double min = 0.0, max = 0.0, first = 0.0, last = 0.0;
};
/// Per-column statistics of a series.csv file. DomainError on malformed input.
std::vector<ColumnSummary> summarize_series(const std::string& csv_path);

// --- command dispatch ------------------------------------------------------

/// Runs one subcommand with outputs in cfg.output.out_dir. Writes manifest.txt
/// at the end and a .failed marker on failure; returns the exit code.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qmcf
