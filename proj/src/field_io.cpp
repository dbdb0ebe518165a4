#include "qmcf/field_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmcf/errors.hpp"
#include "qmcf/format.hpp"

namespace qmcf {

void write_snapshot(std::ostream& out, const TensorField& q, double eps) {
  const Grid& g = q.grid();
  out << "QMCF1 " << g.dim;
  for (int a = 0; a < g.dim; ++a) out << ' ' << g.n[a];
  out << ' ' << format_double(g.h) << ' ' << format_double(q.t) << ' ' << format_double(eps) << '\n';
  for_each_cell(g, [&](int i, int j, int k) {
    const Coeffs5 c = q.get(g.index(i, j, k));
    for (int m = 0; m < 5; ++m) out << (m ? " " : "") << format_double(c[m]);
    out << '\n';
  });
  if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot_file(const std::string& path, const TensorField& q, double eps) {
  std::ostringstream os;
  write_snapshot(os, q, eps);
  write_file_atomic(path, os.str());
}

Snapshot read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("snapshot: empty input");
  std::istringstream hs(line);
  std::string magic;
  int dim = 0;
  hs >> magic >> dim;
  if (magic != "QMCF1") throw DomainError("snapshot: bad magic '" + magic + "'");
  if (dim < 1 || dim > 3) throw DomainError("snapshot: bad dimension");
  int n[3] = {1, 1, 1};
  for (int a = 0; a < dim; ++a) hs >> n[a];
  std::string hh, ht, he;
  hs >> hh >> ht >> he;
  if (!hs) throw DomainError("snapshot: truncated header");
  const double h = parse_double(hh);
  for (int a = 1; a < dim; ++a)
    if (n[a] != n[0]) throw DomainError("snapshot: only cubic grids are supported");
  Grid g;
  try {
    g = Grid::with_cells(dim, 0.5 * n[0] * h, n[0]);
  } catch (const ConfigError& e) {
    throw DomainError(std::string("snapshot: ") + e.what());
  }
  Snapshot s{TensorField(g), parse_double(he)};
  s.field.t = parse_double(ht);
  for_each_cell(g, [&](int i, int j, int k) {
    Coeffs5 c{};
    std::string tok;
    for (int m = 0; m < 5; ++m) {
      if (!(in >> tok)) throw DomainError("snapshot: truncated data");
      c[m] = parse_double(tok);
    }
    s.field.set(g.index(i, j, k), c);
  });
  return s;
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("snapshot: cannot open " + path);
  return read_snapshot(in);
}

void write_vtk_s(const std::string& path, const TensorField& q) {
  const Grid& g = q.grid();
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\nscalar order parameter s\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << g.n[0] << ' ' << g.n[1] << ' ' << g.n[2] << '\n';
  const Vec3 o = g.center(0, 0, 0);
  os << "ORIGIN " << format_double(o[0]) << ' ' << format_double(o[1]) << ' ' << format_double(o[2]) << '\n';
  os << "SPACING " << format_double(g.h) << ' ' << format_double(g.h) << ' ' << format_double(g.h) << '\n';
  os << "POINT_DATA " << g.interior_count() << "\nSCALARS s double 1\nLOOKUP_TABLE default\n";
  for_each_cell(g, [&](int i, int j, int k) { os << format_double(biaxiality(q.at(i, j, k)).s) << '\n'; });
  write_file_atomic(path, os.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qmcf
