#include "qmcf/quasi_distance.hpp"

#include <algorithm>
#include <cstring>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>

#include "qmcf/errors.hpp"
#include "qmcf/format.hpp"

namespace qmcf {

double effective_bulk(const PotentialCoefficients& k, double s, double r) {
  const double m = 3.0 * s * s + r * r;
  return k.a / 9.0 * m + k.c / 81.0 * m * m - 2.0 * k.b / 27.0 * (s * s * s - s * r * r);
}

double dF_uniaxial(const LandauPotential& pot, double s0) {
  const double sp = pot.s_plus();
  if (!(s0 >= 0.0 && s0 <= sp)) throw DomainError("dF_uniaxial: s0 outside [0, s_plus]");
  if (!pot.coeffs().critical) throw DomainError("dF_uniaxial: closed form needs critical coefficients");
  const auto prim = [sp](double t) { return sp * t * t / 2.0 - t * t * t / 3.0; };
  return 2.0 * std::sqrt(pot.coeffs().c) / (3.0 * std::sqrt(3.0)) * (prim(sp) - prim(s0));
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double dF_uniaxial_quadrature(const LandauPotential& pot, double s0, double tol) {
  const double sp = pot.s_plus();
  if (!(s0 >= 0.0 && s0 <= sp)) throw DomainError("dF_uniaxial_quadrature: s0 outside [0, s_plus]");
  if (s0 == sp) return 0.0;
  const std::function<double(double)> f = [&pot](double t) {
    return 2.0 / std::sqrt(3.0) * std::sqrt(std::max(0.0, pot.uniaxial_f(t)));
  };
  const double fa = f(s0), fb = f(sp), fm = f(0.5 * (s0 + sp));
  const double whole = (sp - s0) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, s0, sp, fa, fm, fb, whole, tol, 40);
}

double cF(const LandauPotential& pot) {
  if (!pot.coeffs().critical) throw DomainError("cF: surface tension is defined for critical coefficients");
  return dF_uniaxial(pot, 0.0);
}

const char* to_string(TableMethod m) { return m == TableMethod::FastMarching ? "fmm" : "dijkstra8"; }

TableMethod table_method_from_string(const std::string& name) {
  if (name == "fmm") return TableMethod::FastMarching;
  if (name == "dijkstra8") return TableMethod::Dijkstra8;
  throw ConfigError("unknown table method '" + name + "' (expected fmm or dijkstra8)");
}

void TableSpec::validate(double s_plus) const {
  if (ns < 32 || nr < 32) throw ConfigError("geodesic table: resolution must be at least 32 per axis");
  if (!(s_hi > s_lo) || !(r_hi > 0.0)) throw ConfigError("geodesic table: empty sampling range");
  if (!(s_lo <= 0.0 && s_hi >= s_plus)) throw ConfigError("geodesic table: s range must contain [0, s_plus]");
}

// ---------------------------------------------------------------------------
// Construction

namespace {

struct HeapEntry {
  double value;
  std::size_t index;
  bool operator>(const HeapEntry& o) const { return value > o.value || (value == o.value && index > o.index); }
};
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Distances solve |grad d| = w in coordinates (sigma, r) = (sqrt(3) s, r),
// where the metric is isotropic with weight w = (2/3) sqrt(F~).
struct Solver {
  int ns, nr;
  double hsig, hr;
  std::vector<double> w;
  std::vector<double> d;
  std::vector<unsigned char> known;

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * (nr + 1) + j; }
  // r = 0 is a mirror line: the node below row 0 is row 1.
  int mirror_j(int j) const { return j < 0 ? -j : j; }

  void run_fmm(std::size_t src) {
    MinHeap heap;
    d[src] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      heap.pop();
      if (known[top.index] || top.value > d[top.index]) continue;
      known[top.index] = 1;
      const int i = static_cast<int>(top.index / (nr + 1));
      const int j = static_cast<int>(top.index % (nr + 1));
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& n : nb) {
        const int ni = n[0], nj = mirror_j(n[1]);
        if (ni < 0 || ni > ns || nj > nr) continue;
        const std::size_t k = idx(ni, nj);
        if (known[k]) continue;
        const double v = fmm_update(ni, nj);
        if (v < d[k]) {
          d[k] = v;
          heap.push({v, k});
        }
      }
    }
  }

  // Smallest known neighbor value along one axis, with its weight.
  bool axis_min(int i, int j, bool along_s, double& val, double& wn) const {
    val = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      int ni = i, nj = j;
      if (along_s) ni += sgn; else nj = mirror_j(j + sgn);
      if (ni < 0 || ni > ns || nj > nr) continue;
      const std::size_t k = idx(ni, nj);
      if (known[k] && d[k] < val) {
        val = d[k];
        wn = w[k];
        found = true;
      }
    }
    return found;
  }

  double fmm_update(int i, int j) const {
    const double wp = w[idx(i, j)];
    double a = 0, wa = 0, b = 0, wb = 0;
    const bool has_a = axis_min(i, j, true, a, wa);
    const bool has_b = axis_min(i, j, false, b, wb);
    double best = std::numeric_limits<double>::infinity();
    if (has_a) best = std::min(best, a + hsig * 0.5 * (wp + wa));
    if (has_b) best = std::min(best, b + hr * 0.5 * (wp + wb));
    if (has_a && has_b) {
      const double wbar = 0.5 * wp + 0.25 * (wa + wb);
      const double al = 1.0 / (hsig * hsig), be = 1.0 / (hr * hr);
      const double p = al * a + be * b;
      const double disc = p * p - (al + be) * (al * a * a + be * b * b - wbar * wbar);
      if (disc >= 0.0) {
        const double t = (p + std::sqrt(disc)) / (al + be);
        if (t >= std::max(a, b)) best = std::min(best, t);
      }
    }
    return best;
  }

  void run_dijkstra(std::size_t src, const std::function<double(double, double)>& wfun, double s_lo, double hs) {
    MinHeap heap;
    d[src] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      heap.pop();
      if (known[top.index]) continue;
      known[top.index] = 1;
      const int i = static_cast<int>(top.index / (nr + 1));
      const int j = static_cast<int>(top.index % (nr + 1));
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ni = i + di, nj = mirror_j(j + dj);
          if (ni < 0 || ni > ns || nj > nr) continue;
          const std::size_t k = idx(ni, nj);
          if (known[k]) continue;
          // Midpoint of the edge in the unfolded plane (j + dj may be -1).
          const double sm = s_lo + (i + 0.5 * di) * hs;
          const double rm = (j + 0.5 * dj) * hr;
          const double len = std::hypot(di * hsig, dj * hr);
          const double v = d[top.index] + len * wfun(sm, rm);
          if (v < d[k]) {
            d[k] = v;
            heap.push({v, k});
          }
        }
      }
    }
  }
};

}  // namespace

GeodesicTable GeodesicTable::build(const LandauPotential& pot, const TableSpec& spec) {
  const double sp = pot.s_plus();
  spec.validate(sp);
  GeodesicTable t;
  t.spec_ = spec;
  t.coeffs_ = pot.coeffs();
  t.hs_ = (spec.s_hi - spec.s_lo) / spec.ns;
  t.hr_ = spec.r_hi / spec.nr;

  Solver solver;
  solver.ns = spec.ns;
  solver.nr = spec.nr;
  solver.hsig = std::sqrt(3.0) * t.hs_;
  solver.hr = t.hr_;
  const std::size_t count = static_cast<std::size_t>(spec.ns + 1) * (spec.nr + 1);
  solver.w.resize(count);
  solver.d.assign(count, std::numeric_limits<double>::infinity());
  solver.known.assign(count, 0);
  const PotentialCoefficients k = pot.coeffs();
  const auto weight = [k](double s, double r) { return 2.0 / 3.0 * std::sqrt(std::max(0.0, effective_bulk(k, s, r))); };
  for (int i = 0; i <= spec.ns; ++i)
    for (int j = 0; j <= spec.nr; ++j) solver.w[solver.idx(i, j)] = weight(spec.s_lo + i * t.hs_, j * t.hr_);

  const int isrc = static_cast<int>(std::lround((sp - spec.s_lo) / t.hs_));
  const std::size_t src = solver.idx(isrc, 0);
  if (spec.method == TableMethod::FastMarching)
    solver.run_fmm(src);
  else
    solver.run_dijkstra(src, weight, spec.s_lo, t.hs_);

  t.d_ = std::move(solver.d);
  t.finalize();
  return t;
}

void GeodesicTable::finalize() {
  const int ns = spec_.ns, nr = spec_.nr;
  ds_.assign(d_.size(), 0.0);
  dr_.assign(d_.size(), 0.0);
  for (int i = 0; i <= ns; ++i) {
    for (int j = 0; j <= nr; ++j) {
      const std::size_t k = idx(i, j);
      if (i == 0)
        ds_[k] = (d_[idx(1, j)] - d_[idx(0, j)]) / hs_;
      else if (i == ns)
        ds_[k] = (d_[idx(ns, j)] - d_[idx(ns - 1, j)]) / hs_;
      else
        ds_[k] = (d_[idx(i + 1, j)] - d_[idx(i - 1, j)]) / (2.0 * hs_);
      if (j == 0)
        dr_[k] = 0.0;
      else if (j == nr)
        dr_[k] = (d_[idx(i, nr)] - d_[idx(i, nr - 1)]) / hr_;
      else
        dr_[k] = (d_[idx(i, j + 1)] - d_[idx(i, j - 1)]) / (2.0 * hr_);
    }
  }
}

// ---------------------------------------------------------------------------
// Queries

bool GeodesicTable::contains(double s, double r) const {
  return s >= spec_.s_lo && s <= spec_.s_hi && r >= 0.0 && r <= spec_.r_hi;
}

void GeodesicTable::locate(double s, double r, int& i, int& j, double& fs, double& fr) const {
  if (!contains(s, r)) {
    std::ostringstream os;
    os << "geodesic table: (s, r) = (" << s << ", " << r << ") outside the tabulated range";
    throw DomainError(os.str());
  }
  const double xs = (s - spec_.s_lo) / hs_, xr = r / hr_;
  i = std::min(static_cast<int>(xs), spec_.ns - 1);
  j = std::min(static_cast<int>(xr), spec_.nr - 1);
  fs = xs - i;
  fr = xr - j;
}

namespace {
double bilinear(const std::vector<double>& v, std::size_t k00, std::size_t k10, std::size_t k01, std::size_t k11,
                double fs, double fr) {
  return (1 - fs) * ((1 - fr) * v[k00] + fr * v[k01]) + fs * ((1 - fr) * v[k10] + fr * v[k11]);
}
}  // namespace

double GeodesicTable::value(double s, double r) const {
  int i, j;
  double fs, fr;
  locate(s, r, i, j, fs, fr);
  return bilinear(d_, idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1), fs, fr);
}

std::pair<double, double> GeodesicTable::partials(double s, double r) const {
  int i, j;
  double fs, fr;
  locate(s, r, i, j, fs, fr);
  const std::size_t k00 = idx(i, j), k10 = idx(i + 1, j), k01 = idx(i, j + 1), k11 = idx(i + 1, j + 1);
  return {bilinear(ds_, k00, k10, k01, k11, fs, fr), bilinear(dr_, k00, k10, k01, k11, fs, fr)};
}

GeodesicTable::Evaluation GeodesicTable::evaluate(const QTensor& q) const {
  Evaluation e;
  e.es = eigensystem(q);
  e.sr = biaxiality(e.es);
  e.psi = value(e.sr.s, e.sr.r);
  const auto [ps, pr] = partials(e.sr.s, e.sr.r);
  const Vec3& n1 = e.es.frame[0];
  const Vec3& n2 = e.es.frame[1];
  const Vec3& n3 = e.es.frame[2];
  Mat3 g = (Mat3::outer(n3, n3) - Mat3::identity() * (1.0 / 3.0)) * (1.5 * ps);
  if (e.sr.r >= kDegenerateR) g += (Mat3::outer(n2, n2) - Mat3::outer(n1, n1)) * (1.5 * pr);
  e.grad = QTensor::from_matrix(g);
  return e;
}

double GeodesicTable::dF(const QTensor& q) const {
  const Biaxiality b = biaxiality(q);
  return value(b.s, b.r);
}

QTensor GeodesicTable::grad(const QTensor& q) const { return evaluate(q).grad; }

// ---------------------------------------------------------------------------
// Persistence

void GeodesicTable::save(std::ostream& out) const {
  out << "QMCF-DTABLE 1\n";
  out << "method " << to_string(spec_.method) << "\n";
  out << "coeffs " << format_double(coeffs_.a) << ' ' << format_double(coeffs_.b) << ' ' << format_double(coeffs_.c)
      << ' ' << (coeffs_.critical ? 1 : 0) << ' ' << coeffs_.K << "\n";
  out << "s_range " << format_double(spec_.s_lo) << ' ' << format_double(spec_.s_hi) << ' ' << spec_.ns << "\n";
  out << "r_range " << format_double(spec_.r_hi) << ' ' << spec_.nr << "\n";
  out << "values\n";
  for (int i = 0; i <= spec_.ns; ++i) {
    for (int j = 0; j <= spec_.nr; ++j) {
      if (j) out << ' ';
      out << format_double(d_[idx(i, j)]);
    }
    out << '\n';
  }
}

void GeodesicTable::save_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  save(f);
  if (!f) throw DomainError("failed writing '" + path + "'");
}

GeodesicTable GeodesicTable::load(std::istream& in) {
  auto expect = [&in](const std::string& word) {
    std::string got;
    if (!(in >> got) || got != word) throw DomainError("geodesic table: expected '" + word + "', got '" + got + "'");
  };
  auto number = [&in]() {
    std::string tok;
    if (!(in >> tok)) throw DomainError("geodesic table: truncated input");
    return parse_double(tok);
  };
  expect("QMCF-DTABLE");
  expect("1");
  GeodesicTable t;
  expect("method");
  std::string m;
  in >> m;
  t.spec_.method = table_method_from_string(m);
  expect("coeffs");
  t.coeffs_.a = number();
  t.coeffs_.b = number();
  t.coeffs_.c = number();
  t.coeffs_.critical = number() != 0.0;
  t.coeffs_.K = static_cast<int>(number());
  expect("s_range");
  t.spec_.s_lo = number();
  t.spec_.s_hi = number();
  t.spec_.ns = static_cast<int>(number());
  expect("r_range");
  t.spec_.r_hi = number();
  t.spec_.nr = static_cast<int>(number());
  expect("values");
  t.spec_.validate(t.coeffs_.s_plus());
  t.hs_ = (t.spec_.s_hi - t.spec_.s_lo) / t.spec_.ns;
  t.hr_ = t.spec_.r_hi / t.spec_.nr;
  t.d_.resize(static_cast<std::size_t>(t.spec_.ns + 1) * (t.spec_.nr + 1));
  for (auto& v : t.d_) v = number();
  t.finalize();
  return t;
}

GeodesicTable GeodesicTable::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open geodesic table '" + path + "'");
  return load(f);
}

std::uint64_t GeodesicTable::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : d_) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace qmcf
