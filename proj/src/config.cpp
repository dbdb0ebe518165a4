#include "qmcf/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qmcf/errors.hpp"
#include "qmcf/format.hpp"

namespace qmcf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double as_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(trim(v));
  } catch (const DomainError&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long as_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long out = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool as_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

Vec3 as_vec(const std::string& key, const std::string& v) {
  std::string t = v;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream is(t);
  Vec3 out{0.0, 0.0, 0.0};
  std::string tok;
  int k = 0;
  while (is >> tok) {
    if (k == 3) throw ConfigError(key + ": at most three components are allowed");
    out[k++] = as_double(key, tok);
  }
  if (k == 0) throw ConfigError(key + ": expected a vector such as '0, 0, 1'");
  return out;
}

template <class Fn>
auto wrap(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.L", [](RunConfig& c, auto& k, auto& v) { c.domain.L = as_double(k, v); }},
      {"domain.dim", [](RunConfig& c, auto& k, auto& v) { c.domain.dim = static_cast<int>(as_int(k, v)); }},
      {"domain.h", [](RunConfig& c, auto& k, auto& v) { c.domain.h = as_double(k, v); }},
      {"interface.R0", [](RunConfig& c, auto& k, auto& v) { c.interface.R0 = as_double(k, v); }},
      {"interface.center", [](RunConfig& c, auto& k, auto& v) { c.interface.center = as_vec(k, v); }},
      {"interface.delta_I", [](RunConfig& c, auto& k, auto& v) { c.interface.delta_I = as_double(k, v); }},
      {"model.a", [](RunConfig& c, auto& k, auto& v) { c.model.a = as_double(k, v); }},
      {"model.b", [](RunConfig& c, auto& k, auto& v) { c.model.b = as_double(k, v); }},
      {"model.c", [](RunConfig& c, auto& k, auto& v) { c.model.c = as_double(k, v); }},
      {"model.critical", [](RunConfig& c, auto& k, auto& v) { c.model.critical = as_bool(k, v); }},
      {"model.K", [](RunConfig& c, auto& k, auto& v) { c.model.K = static_cast<int>(as_int(k, v)); }},
      {"model.eps", [](RunConfig& c, auto& k, auto& v) { c.eps = as_double(k, v); }},
      {"init.director",
       [](RunConfig& c, auto& k, auto& v) {
         c.init.director.kind = wrap(k, [&] { return director_kind_from_string(trim(v)); });
       }},
      {"init.u0", [](RunConfig& c, auto& k, auto& v) { c.init.director.u0 = as_vec(k, v); }},
      {"init.kappa", [](RunConfig& c, auto& k, auto& v) { c.init.director.kappa = as_double(k, v); }},
      {"init.delta0", [](RunConfig& c, auto& k, auto& v) { c.init.delta0 = as_double(k, v); }},
      {"solver.scheme",
       [](RunConfig& c, auto& k, auto& v) { c.solver.scheme = wrap(k, [&] { return scheme_from_string(trim(v)); }); }},
      {"solver.safety", [](RunConfig& c, auto& k, auto& v) { c.solver.safety = as_double(k, v); }},
      {"solver.t_end", [](RunConfig& c, auto& k, auto& v) { c.solver.t_end = as_double(k, v); }},
      {"solver.snapshot_every", [](RunConfig& c, auto& k, auto& v) { c.solver.snapshot_every = as_double(k, v); }},
      {"solver.kernel",
       [](RunConfig& c, auto& k, auto& v) {
         c.solver.kernel = wrap(k, [&] { return kernel_kind_from_string(trim(v)); });
       }},
      {"solver.threads", [](RunConfig& c, auto& k, auto& v) { c.solver.threads = static_cast<int>(as_int(k, v)); }},
      {"solver.bc",
       [](RunConfig& c, auto& k, auto& v) { c.solver.bc = wrap(k, [&] { return boundary_from_string(trim(v)); }); }},
      {"diagnostics.dtable_path", [](RunConfig& c, auto&, auto& v) { c.diagnostics.dtable_path = trim(v); }},
      {"diagnostics.levelset_fraction",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.levelset_fraction = as_double(k, v); }},
      {"diagnostics.bound_ceiling",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.bound_ceiling = as_double(k, v); }},
      {"diagnostics.gronwall_ceiling",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.gronwall_ceiling = as_double(k, v); }},
      {"diagnostics.table_ns",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.table_ns = static_cast<int>(as_int(k, v)); }},
      {"diagnostics.table_nr",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.table_nr = static_cast<int>(as_int(k, v)); }},
      {"diagnostics.table_method",
       [](RunConfig& c, auto& k, auto& v) {
         c.diagnostics.table_method = wrap(k, [&] { return table_method_from_string(trim(v)); });
       }},
      {"diagnostics.director_reference",
       [](RunConfig& c, auto& k, auto& v) { c.diagnostics.director_reference = as_bool(k, v); }},
      {"output.out_dir", [](RunConfig& c, auto&, auto& v) { c.output.out_dir = trim(v); }},
      {"output.seed",
       [](RunConfig& c, auto& k, auto& v) {
         const long long s = as_int(k, v);
         if (s < 0) throw ConfigError(k + ": must be nonnegative");
         c.output.seed = static_cast<std::uint64_t>(s);
       }},
      {"output.snapshot_stride",
       [](RunConfig& c, auto& k, auto& v) { c.output.snapshot_stride = static_cast<int>(as_int(k, v)); }},
      {"output.vtk", [](RunConfig& c, auto& k, auto& v) { c.output.vtk = as_bool(k, v); }},
  };
  return table;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& tbl = setters();
  const auto it = tbl.find(key);
  if (it == tbl.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(cfg, key, value);
}

std::string vec_text(const Vec3& v) {
  return format_double(v[0]) + ", " + format_double(v[1]) + ", " + format_double(v[2]);
}

}  // namespace

ShrinkingSphere RunConfig::sphere() const { return ShrinkingSphere(domain.dim, interface.center, interface.R0, interface.delta_I); }

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.eps = eps;
  s.scheme = solver.scheme;
  s.safety = solver.safety;
  s.t_end = solver.t_end;
  s.cadence = solver.snapshot_every;
  s.kernel = solver.kernel;
  s.threads = solver.threads;
  s.bc = solver.bc;
  return s;
}

TableSpec RunConfig::table_spec() const {
  TableSpec t;
  t.ns = diagnostics.table_ns;
  t.nr = diagnostics.table_nr;
  t.method = diagnostics.table_method;
  return t;
}

namespace {

// Re-raises a module check under the configuration section it belongs to.
template <class F>
void in_section(const char* section, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(section) + ": " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  in_section("model", [&] { model.validate(); });
  if (!(eps > 0.0)) throw ConfigError("model.eps: must be positive");
  if (domain.h < 0.0) throw ConfigError("domain.h: must be nonnegative");
  in_section("domain", [&] { (void)grid(); });
  const ShrinkingSphere s = [&] {
    try {
      return sphere();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("interface: ") + e.what());
    }
  }();
  if (solver.bc == Boundary::Dirichlet) in_section("interface", [&] { s.check_inside_box(domain.L); });
  if (solver.t_end > s.t_valid()) throw ConfigError("solver.t_end: beyond the validity time of the interface");
  in_section("init", [&] { profile().validate(); });
  in_section("solver", [&] { solver_config().validate(); });
  in_section("diagnostics", [&] { table_spec().validate(model.s_plus()); });
  if (!(diagnostics.levelset_fraction > 0.0 && diagnostics.levelset_fraction < 1.0))
    throw ConfigError("diagnostics.levelset_fraction: must lie in (0, 1)");
  if (!(diagnostics.bound_ceiling > 0.0) || !(diagnostics.gronwall_ceiling > 0.0))
    throw ConfigError("diagnostics: ceilings must be positive");
  if (output.snapshot_stride < 0) throw ConfigError("output.snapshot_stride: must be nonnegative");
  if (output.out_dir.empty()) throw ConfigError("output.out_dir: must not be empty");
  if (init.director.kind == DirectorPreset::Kind::Constant && norm(init.director.u0) == 0.0)
    throw ConfigError("init.u0: must be nonzero");
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected section.key=value");
  assign(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("configuration syntax: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("unknown configuration key '" + section + "' (keys belong in a section)");
    for (const auto& [key, node] : body) assign(cfg, section + "." + key, node.get_value<std::string>());
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), overrides);
}

std::string config_echo(const RunConfig& c) {
  std::ostringstream os;
  os << "[domain]\nL = " << format_double(c.domain.L) << "\ndim = " << c.domain.dim
     << "\nh = " << format_double(c.spacing()) << "\n\n";
  os << "[interface]\nR0 = " << format_double(c.interface.R0) << "\ncenter = " << vec_text(c.interface.center)
     << "\ndelta_I = " << format_double(c.interface.delta_I) << "\n\n";
  os << "[model]\na = " << format_double(c.model.a) << "\nb = " << format_double(c.model.b)
     << "\nc = " << format_double(c.model.c) << "\ncritical = " << (c.model.critical ? "true" : "false")
     << "\nK = " << c.model.K << "\neps = " << format_double(c.eps) << "\n\n";
  os << "[init]\ndirector = " << to_string(c.init.director.kind) << "\nu0 = " << vec_text(c.init.director.u0)
     << "\nkappa = " << format_double(c.init.director.kappa) << "\ndelta0 = " << format_double(c.init.delta0)
     << "\n\n";
  os << "[solver]\nscheme = " << to_string(c.solver.scheme) << "\nsafety = " << format_double(c.solver.safety)
     << "\nt_end = " << format_double(c.solver.t_end) << "\nsnapshot_every = " << format_double(c.solver.snapshot_every)
     << "\nkernel = " << to_string(c.solver.kernel) << "\nthreads = " << c.solver.threads
     << "\nbc = " << to_string(c.solver.bc) << "\n\n";
  os << "[diagnostics]\n";
  if (!c.diagnostics.dtable_path.empty()) os << "dtable_path = " << c.diagnostics.dtable_path << "\n";
  os << "levelset_fraction = " << format_double(c.diagnostics.levelset_fraction)
     << "\nbound_ceiling = " << format_double(c.diagnostics.bound_ceiling)
     << "\ngronwall_ceiling = " << format_double(c.diagnostics.gronwall_ceiling)
     << "\ntable_ns = " << c.diagnostics.table_ns << "\ntable_nr = " << c.diagnostics.table_nr
     << "\ntable_method = " << to_string(c.diagnostics.table_method)
     << "\ndirector_reference = " << (c.diagnostics.director_reference ? "true" : "false") << "\n\n";
  os << "[output]\nout_dir = " << c.output.out_dir << "\nseed = " << c.output.seed
     << "\nsnapshot_stride = " << c.output.snapshot_stride << "\nvtk = " << (c.output.vtk ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace qmcf
