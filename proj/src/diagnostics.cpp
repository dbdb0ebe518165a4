#include "qmcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "qmcf/contour.hpp"
#include "qmcf/errors.hpp"
#include "qmcf/format.hpp"
#include "qmcf/reduce.hpp"

namespace qmcf {

namespace {

Coeffs5 load(const TensorField& q, std::size_t p) { return q.get(p); }

double dot5(const Coeffs5& a, const Coeffs5& b) {
  double acc = 0.0;
  for (int c = 0; c < 5; ++c) acc += a[c] * b[c];
  return acc;
}

Coeffs5 central(const TensorField& q, std::size_t p, std::ptrdiff_t s, double inv2h) {
  Coeffs5 d{};
  for (int c = 0; c < 5; ++c) d[c] = (q.plane(c)[p + s] - q.plane(c)[p - s]) * inv2h;
  return d;
}

Coeffs5 forward(const TensorField& q, std::size_t p, std::ptrdiff_t s, double invh) {
  Coeffs5 d{};
  for (int c = 0; c < 5; ++c) d[c] = (q.plane(c)[p + s] - q.plane(c)[p]) * invh;
  return d;
}

// Interior (i, j, k) of padded index p.
std::array<int, 3> cell_of(const Grid& g, std::size_t p) {
  const int o1 = g.dim >= 2 ? 1 : 0, o2 = g.dim >= 3 ? 1 : 0;
  const auto z = static_cast<int>(p / g.stride[2]);
  const auto rem = static_cast<std::ptrdiff_t>(p) - z * g.stride[2];
  const auto y = static_cast<int>(rem / g.stride[1]);
  const auto x = static_cast<int>(rem - y * g.stride[1]);
  return {x - 1, y - o1, z - o2};
}

// Scalar padded array with ghosts set to a constant (Dirichlet) or wrapped.
void fill_scalar_ghosts(const Grid& g, std::vector<double>& v, Boundary bc, double outside) {
  for (int a = 0; a < g.dim; ++a) {
    for (int side = 0; side < 2; ++side) {
      const int ghost = side == 0 ? 0 : g.np[a] - 1;
      const int src = side == 0 ? g.n[a] : 1;
      std::array<int, 3> l{0, 0, 0}, h{g.np[0], g.np[1], g.np[2]};
      l[a] = ghost;
      h[a] = ghost + 1;
      for (int z = l[2]; z < h[2]; ++z)
        for (int y = l[1]; y < h[1]; ++y)
          for (int x = l[0]; x < h[0]; ++x) {
            std::array<int, 3> s{x, y, z};
            s[a] = src;
            const std::size_t p = x + y * g.stride[1] + z * g.stride[2];
            const std::size_t q = s[0] + s[1] * g.stride[1] + s[2] * g.stride[2];
            v[p] = bc == Boundary::Periodic ? v[q] : outside;
          }
    }
  }
}

double sq(double x) { return x * x; }

}  // namespace

// ---------------------------------------------------------------------------

double gl_energy(const TensorField& q, const LandauPotential& pot, double eps, Boundary bc, int threads) {
  const Grid& g = q.grid();
  const double invh = 1.0 / g.h;
  const double shift = pot.regularization(eps);
  const double sum = row_reduce(g.row_count(), threads, [&](std::size_t row) {
    const std::size_t p0 = g.row_start(row);
    double bulk = 0.0, grad = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
      const std::size_t p = p0 + i;
      const Coeffs5 qc = load(q, p);
      bulk += pot.energy(qc) + shift;
      const auto cell = cell_of(g, p);
      for (int a = 0; a < g.dim; ++a) {
        const Coeffs5 d = forward(q, p, g.stride[a], invh);
        grad += dot5(d, d);
        if (bc == Boundary::Dirichlet && cell[a] == 0) grad += dot5(qc, qc) * invh * invh;
      }
    }
    return bulk / eps + 0.5 * eps * grad;
  });
  return sum * g.cell_volume();
}

FieldAnalysis analyze_field(const TensorField& q, const TensorField* rhs, const DiagnosticsContext& ctx, double t) {
  if (!ctx.table) throw DomainError("diagnostics: a geodesic table is required");
  const Grid& g = q.grid();
  const GeodesicTable& table = *ctx.table;
  const double eps = ctx.eps, seps = std::sqrt(eps);
  const double shift = ctx.pot.regularization(eps);
  const double inv2h = 0.5 / g.h;
  const double vol = g.cell_volume();

  // psi on all cells (ghosts hold the isotropic value or wrap), grad_dF on interior cells.
  std::vector<double> psi(g.padded_count(), 0.0);
  std::array<std::vector<double>, 5> G;
  for (auto& v : G) v.assign(g.padded_count(), 0.0);
  std::vector<double> s_inv(g.padded_count(), 0.0);
  parallel_ranges(g.row_count(), ctx.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t row = b; row < e; ++row) {
      const std::size_t p0 = g.row_start(row);
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t p = p0 + i;
        const auto ev = table.evaluate(QTensor(load(q, p)));
        psi[p] = ev.psi;
        s_inv[p] = ev.sr.s;
        for (int c = 0; c < 5; ++c) G[c][p] = ev.grad[c];
      }
    }
  });
  fill_scalar_ghosts(g, psi, ctx.bc, table.value(0.0, 0.0));

  enum Sum { kBulk, kFace, kChain, kDirect, kIbp, kBa, kBb, kBbt, kBc, kBd, kCommG, kCommR, kSums };
  enum Max { kModulus, kLip, kCommId, kChainRel, kMaxes };
  struct RowAcc {
    std::array<double, kSums> s{};
    std::array<double, kMaxes> m{};
    std::size_t chain_cells = 0;
  };
  std::vector<RowAcc> acc(g.row_count());
  for (auto& a : acc) a.m[kLip] = -std::numeric_limits<double>::infinity();

  parallel_ranges(g.row_count(), ctx.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t row = b; row < e; ++row) {
      RowAcc& A = acc[row];
      const std::size_t p0 = g.row_start(row);
      for (int i = 0; i < g.n[0]; ++i) {
        const std::size_t p = p0 + i;
        const Coeffs5 qc = load(q, p);
        const QTensor Q(qc);
        const auto cell = cell_of(g, p);
        const Vec3 x = g.center(cell[0], cell[1], cell[2]);
        CalibrationSample cal;
        if (ctx.sphere) cal = ctx.sphere->sample(x, t);

        const double F = ctx.pot.energy(qc) + shift;
        A.s[kBulk] += F / eps;
        std::array<Coeffs5, 3> D{};
        double DQ2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          const Coeffs5 f = forward(q, p, g.stride[a], 1.0 / g.h);
          A.s[kFace] += 0.5 * eps * dot5(f, f);
          if (ctx.bc == Boundary::Dirichlet && cell[a] == 0) A.s[kFace] += 0.5 * eps * dot5(qc, qc) / (g.h * g.h);
          D[a] = central(q, p, g.stride[a], inv2h);
          DQ2 += dot5(D[a], D[a]);
        }
        Coeffs5 Gc{};
        for (int c = 0; c < 5; ++c) Gc[c] = G[c][p];
        const double Gn = std::sqrt(dot5(Gc, Gc));
        Vec3 gpsi{}, dpsi{};
        double gpsi2 = 0.0;
        // The calibration uses -psi, which increases into the nematic region like xi.
        for (int a = 0; a < g.dim; ++a) {
          gpsi[a] = -dot5(Gc, D[a]);
          gpsi2 += gpsi[a] * gpsi[a];
          dpsi[a] = -(psi[p + g.stride[a]] - psi[p - g.stride[a]]) * inv2h;
        }
        const double gpsin = std::sqrt(gpsi2);
        const double pi2 = Gn > 0.0 ? gpsi2 / (Gn * Gn) : 0.0;
        const double pin = std::sqrt(pi2);

        A.s[kChain] += dot(cal.xi, gpsi);
        A.s[kDirect] += dot(cal.xi, dpsi);
        A.s[kIbp] += cal.div_xi * psi[p];

        const double e_cent = 0.5 * eps * DQ2 + F / eps;
        A.s[kBa] -= gpsin;
        A.s[kBb] += 0.5 * sq(seps * pin - std::sqrt(2.0 * F / eps)) + 0.5 * eps * std::max(0.0, DQ2 - pi2);
        A.s[kBbt] += 0.5 * sq(seps * pin - Gn / seps);
        Vec3 n_eps{};
        if (gpsin > 1e-8) {
          for (int a = 0; a < 3; ++a) n_eps[a] = gpsi[a] / gpsin;
        } else if (const double xn = norm(cal.xi); xn > 0.0) {
          for (int a = 0; a < 3; ++a) n_eps[a] = cal.xi[a] / xn;
        }
        A.s[kBc] += sq(seps * std::sqrt(DQ2) - Gn / seps) + (1.0 - dot(cal.xi, n_eps)) * (0.5 * eps * pi2 + gpsin);
        A.s[kBd] += (e_cent + gpsin) * std::min(cal.d * cal.d, 1.0);

        const Mat3 Qm = Q.matrix();
        for (int a = 0; a < g.dim; ++a) A.s[kCommG] += sq(frob_norm(commutator(basis_embed(D[a]), Qm)));
        if (rhs) A.s[kCommR] += sq(frob_norm(commutator(basis_embed(rhs->get(p)), Qm)));

        const double qn2 = dot5(qc, qc);
        A.m[kModulus] = std::max(A.m[kModulus], std::sqrt(qn2));
        A.m[kLip] = std::max(A.m[kLip], Gn - std::sqrt(2.0 * F));
        A.m[kCommId] = std::max(A.m[kCommId], frob_norm(commutator(basis_embed(Gc), Qm)) / (1.0 + qn2));
        const double s = s_inv[p];
        const double dpsin = norm(dpsi);
        if (s >= 0.3 && s <= 2.7 && dpsin > 0.1) {
          const Vec3 diff{dpsi[0] - gpsi[0], dpsi[1] - gpsi[1], dpsi[2] - gpsi[2]};
          A.m[kChainRel] = std::max(A.m[kChainRel], norm(diff) / dpsin);
          ++A.chain_cells;
        }
      }
    }
  });

  FieldAnalysis r;
  std::array<double, kSums> tot{};
  std::vector<double> col(acc.size());
  for (int k = 0; k < kSums; ++k) {
    for (std::size_t i = 0; i < acc.size(); ++i) col[i] = acc[i].s[k];
    tot[k] = pairwise_sum(col) * vol;
  }
  r.lipschitz_excess = -std::numeric_limits<double>::infinity();
  for (const auto& a : acc) {
    r.max_abs_Q = std::max(r.max_abs_Q, a.m[kModulus]);
    r.lipschitz_excess = std::max(r.lipschitz_excess, a.m[kLip]);
    r.comm_identity_max = std::max(r.comm_identity_max, a.m[kCommId]);
    r.chain_rule_max_rel = std::max(r.chain_rule_max_rel, a.m[kChainRel]);
    r.chain_rule_cells += a.chain_cells;
  }
  r.E_gl = tot[kBulk] + tot[kFace];
  r.calib_chain = tot[kChain];
  r.calib_direct = tot[kDirect];
  r.calib_ibp = tot[kIbp];
  r.E_mod = r.E_gl - r.calib_chain;
  r.bound_lhs = {r.E_gl + tot[kBa], tot[kBb], tot[kBbt], tot[kBc], tot[kBd]};
  const double denom = std::max(r.E_mod, eps * 1e-6);
  for (int k = 0; k < 5; ++k) {
    r.bound_ratio[k] = r.bound_lhs[k] / denom;
    if (r.bound_ratio[k] > ctx.bound_ceiling) r.bounds_ok = false;
  }
  r.comm_grad_l2 = std::sqrt(tot[kCommG]);
  r.comm_rhs_l2 = std::sqrt(tot[kCommR]);
  return r;
}

double modulated_energy(const TensorField& q, const DiagnosticsContext& ctx, double t) {
  return analyze_field(q, nullptr, ctx, t).E_mod;
}

std::array<double, 5> bound_suite(const TensorField& q, const DiagnosticsContext& ctx, double t) {
  return analyze_field(q, nullptr, ctx, t).bound_ratio;
}

ProjectionFields projection_fields(const TensorField& q, const TensorField& rhs, const DiagnosticsContext& ctx,
                                   double t) {
  if (!ctx.table) throw DomainError("diagnostics: a geodesic table is required");
  const Grid& g = q.grid();
  const double inv2h = 0.5 / g.h;
  ProjectionFields out;
  const std::size_t n = g.interior_count();
  out.pi_grad.resize(n);
  out.n_eps.resize(n);
  out.H_eps.resize(n);
  std::size_t c = 0;
  for_each_cell(g, [&](int i, int j, int k) {
    const std::size_t p = g.index(i, j, k);
    const QTensor Q(q.get(p));
    const Coeffs5 G = ctx.table->grad(Q).coeffs();
    const double Gn = std::sqrt(dot5(G, G));
    std::array<Coeffs5, 3> D{};
    Vec3 gpsi{};
    double DQ2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      D[a] = central(q, p, g.stride[a], inv2h);
      DQ2 += dot5(D[a], D[a]);
      gpsi[a] = -dot5(G, D[a]);
      Coeffs5 pr{};
      if (Gn > 0.0)
        for (int m = 0; m < 5; ++m) pr[m] = -gpsi[a] / (Gn * Gn) * G[m];
      out.pi_grad[c][a] = pr;
    }
    const double gn = norm(gpsi);
    if (gn > 1e-8) {
      for (int a = 0; a < 3; ++a) out.n_eps[c][a] = gpsi[a] / gn;
    } else if (ctx.sphere) {
      const Vec3 xi = ctx.sphere->xi(g.center(i, j, k), t);
      const double xn = norm(xi);
      if (xn > 0.0)
        for (int a = 0; a < 3; ++a) out.n_eps[c][a] = xi[a] / xn;
    }
    const double dqn = std::sqrt(DQ2);
    if (dqn > 1e-12) {
      const Coeffs5 R = rhs.get(p);
      for (int a = 0; a < g.dim; ++a) out.H_eps[c][a] = -ctx.eps * dot5(R, D[a]) / dqn;
    }
    ++c;
  });
  return out;
}

Mat3 stress_tensor(const std::array<Coeffs5, 3>& grad, int dim, const QTensor& q, double eps,
                   const LandauPotential& pot) {
  double g2 = 0.0;
  for (int a = 0; a < dim; ++a) g2 += dot5(grad[a], grad[a]);
  const double e = 0.5 * eps * g2 + pot.regularized_energy(q, eps) / eps;
  Mat3 T;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) T(i, j) = (i == j ? e : 0.0) - eps * dot5(grad[i], grad[j]);
  return T;
}

double stress_divergence_residual(const TensorField& q, const TensorField& rhs, const LandauPotential& pot,
                                  double eps) {
  const Grid& g = q.grid();
  const double invh = 1.0 / g.h, inv2h = 0.5 / g.h;
  // Forward-difference stress and central energy density on interior cells.
  std::vector<Mat3> T(g.padded_count());
  std::vector<double> e(g.padded_count(), 0.0);
  for_each_cell(g, [&](int i, int j, int k) {
    const std::size_t p = g.index(i, j, k);
    const QTensor Q(q.get(p));
    std::array<Coeffs5, 3> Df{}, Dc{};
    double dc2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      Df[a] = forward(q, p, g.stride[a], invh);
      Dc[a] = central(q, p, g.stride[a], inv2h);
      dc2 += dot5(Dc[a], Dc[a]);
    }
    T[p] = stress_tensor(Df, g.dim, Q, eps, pot);
    e[p] = 0.5 * eps * dc2 + pot.regularized_energy(Q, eps) / eps;
  });
  double num = 0.0, den = 0.0;
  for_each_cell(g, [&](int i, int j, int k) {
    const int idx[3] = {i, j, k};
    for (int a = 0; a < g.dim; ++a)
      if (idx[a] < 2 || idx[a] > g.n[a] - 3) return;
    const std::size_t p = g.index(i, j, k);
    std::array<Coeffs5, 3> Dc{};
    double dc2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      Dc[a] = central(q, p, g.stride[a], inv2h);
      dc2 += dot5(Dc[a], Dc[a]);
    }
    if (std::sqrt(dc2) <= 1e-6) return;
    const Coeffs5 R = rhs.get(p);
    for (int jj = 0; jj < g.dim; ++jj) {
      double div = 0.0;
      for (int ii = 0; ii < g.dim; ++ii) div += (T[p + g.stride[ii]](ii, jj) - T[p](ii, jj)) * invh;
      const double target = -eps * dot5(R, Dc[jj]);
      num += sq(div - target);
      den += sq((e[p + g.stride[jj]] - e[p - g.stride[jj]]) * inv2h);
    }
  });
  if (den == 0.0) return 0.0;
  return std::sqrt(num / den);
}

CommutatorNorms commutator_norms(const TensorField& q, const TensorField& rhs, int threads) {
  const Grid& g = q.grid();
  const double inv2h = 0.5 / g.h;
  CommutatorNorms out;
  const double sg = row_reduce(g.row_count(), threads, [&](std::size_t row) {
    double acc = 0.0;
    const std::size_t p0 = g.row_start(row);
    for (int i = 0; i < g.n[0]; ++i) {
      const Mat3 Qm = basis_embed(q.get(p0 + i));
      for (int a = 0; a < g.dim; ++a)
        acc += sq(frob_norm(commutator(basis_embed(central(q, p0 + i, g.stride[a], inv2h)), Qm)));
    }
    return acc;
  });
  const double sr = row_reduce(g.row_count(), threads, [&](std::size_t row) {
    double acc = 0.0;
    const std::size_t p0 = g.row_start(row);
    for (int i = 0; i < g.n[0]; ++i)
      acc += sq(frob_norm(commutator(basis_embed(rhs.get(p0 + i)), basis_embed(q.get(p0 + i)))));
    return acc;
  });
  out.grad_l2 = std::sqrt(sg * g.cell_volume());
  out.rhs_l2 = std::sqrt(sr * g.cell_volume());
  return out;
}

InterfaceFit interface_extract(const TensorField& q, double level_fraction, double s_plus) {
  const Grid& g = q.grid();
  if (g.dim != 2) throw DomainError("interface_extract: only 2-D fields are supported");
  std::vector<double> s(g.interior_count());
  for_each_cell(g, [&](int i, int j, int) {
    s[static_cast<std::size_t>(j) * g.n[0] + i] = biaxiality(q.at(i, j)).s;
  });
  const Contour c = marching_squares(s, g.n[0], g.n[1], g.coord(0), g.coord(0), g.h, level_fraction * s_plus);
  if (c.points.size() < 3) throw ExtinctionError("interface_extract: no level-set contour found");
  const CircleFit fit = fit_circle(c.points);
  return {fit.R, fit.cx, fit.cy, fit.rms, fit.count};
}

DirectorComparison director_compare(const TensorField& q, const HarmonicMapFlow& hm, const ShrinkingSphere& sphere,
                                    double t, double eps) {
  const Grid& g = q.grid();
  const std::size_t n = g.interior_count();
  std::vector<Vec3> u(n);
  std::vector<std::uint8_t> region(n, 0);
  DirectorComparison out;
  for_each_cell(g, [&](int i, int j, int k) {
    const std::size_t c = hm.cell_index(i, j, k);
    if (!hm.mask()[c] || !(sphere.signed_distance(g.center(i, j, k), t) > 2.0 * eps)) return;
    region[c] = 1;
    u[c] = eigensystem(q.at(i, j, k)).frame[2];
    ++out.cells;
  });
  if (out.cells == 0) throw ExtinctionError("director_compare: empty comparison region");

  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!region[c]) continue;
    const Vec3& v = hm.u()[c];
    double dm = 0.0, dp = 0.0;
    for (int a = 0; a < 3; ++a) {
      dm += sq(u[c][a] - v[a]);
      dp += sq(u[c][a] + v[a]);
    }
    const double d2 = std::min(dm, dp);
    acc += d2;
    out.max_dev = std::max(out.max_dev, std::sqrt(d2));
  }
  out.l2 = std::sqrt(acc * g.cell_volume());

  // Orient by breadth-first propagation, then check every region edge.
  std::vector<std::uint8_t> seen(n, 0);
  auto neighbors = [&](std::size_t c, auto&& f) {
    const int i = static_cast<int>(c % g.n[0]);
    const int j = static_cast<int>((c / g.n[0]) % g.n[1]);
    const int k = static_cast<int>(c / (static_cast<std::size_t>(g.n[0]) * g.n[1]));
    const int idx[3] = {i, j, k};
    for (int a = 0; a < g.dim; ++a)
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        int nb[3] = {idx[0], idx[1], idx[2]};
        nb[a] += sgn;
        if (nb[a] < 0 || nb[a] >= g.n[a]) continue;
        const std::size_t cn = hm.cell_index(nb[0], nb[1], nb[2]);
        if (region[cn]) f(cn);
      }
  };
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!region[seed] || seen[seed]) continue;
    std::deque<std::size_t> queue{seed};
    seen[seed] = 1;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      neighbors(c, [&](std::size_t cn) {
        if (seen[cn]) return;
        if (dot(u[c], u[cn]) < 0.0) u[cn] = {-u[cn][0], -u[cn][1], -u[cn][2]};
        seen[cn] = 1;
        queue.push_back(cn);
      });
    }
  }
  for (std::size_t c = 0; c < n && !out.defect; ++c)
    if (region[c]) neighbors(c, [&](std::size_t cn) {
        if (dot(u[c], u[cn]) < 0.0) out.defect = true;
      });
  return out;
}

// ---------------------------------------------------------------------------
// Weak form

Vec3 director_derivative(const Eigensystem& es, const Mat3& dq) {
  const Vec3& n3 = es.frame[2];
  const Vec3 an3 = dq * n3;
  Vec3 out{0.0, 0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const double gap = es.lambda[2] - es.lambda[k];
    if (gap <= 0.0) continue;
    const double coef = dot(es.frame[k], an3) / gap;
    for (int a = 0; a < 3; ++a) out[a] += coef * es.frame[k][a];
  }
  return out;
}

namespace {

// Smooth vector test fields and their spatial gradients (by central differences
// of the closed forms, accurate to roughly 1e-10).
Vec3 basket_phi(int m, const Vec3& x) {
  const double X = x[0], Y = x[1];
  switch (m) {
    case 0: return {0, 0, 1};
    case 1: return {0, 0, X};
    case 2: return {0, 0, Y};
    case 3: return {0, 0, X * X};
    case 4: return {0, 0, X * Y};
    case 5: return {0, 0, Y * Y};
    case 6: return {0, 0, std::sin(2.0 * X) * std::cos(Y)};
    case 7: return {X, Y, 0};
    case 8: return {std::cos(Y), 0, std::sin(X)};
    default: {
      const double e = std::exp(-(X * X + Y * Y));
      return {e, e, e};
    }
  }
}

}  // namespace

void WeakFormResidual::add_sample(const TensorField& q, const TensorField& rhs, const ShrinkingSphere& sphere,
                                  double t) {
  const Grid& g = q.grid();
  const double inv2h = 0.5 / g.h, vol = g.cell_volume();
  Sample smp;
  smp.t = t;
  for_each_cell(g, [&](int i, int j, int k) {
    const Vec3 x = g.center(i, j, k);
    const bool inside = sphere.signed_distance(x, t) > band_;
    const std::size_t p = g.index(i, j, k);
    const Eigensystem es = eigensystem(QTensor(q.get(p)));
    if (es.lambda[2] - es.lambda[1] <= 1e-8) return;
    const double s = biaxiality(es).s;
    const double w = s * s / (s_plus_ * s_plus_);
    const Vec3& u = es.frame[2];
    const Vec3 ut = cross(director_derivative(es, basis_embed(rhs.get(p))), u);
    std::array<Vec3, 3> ux{};
    for (int a = 0; a < g.dim; ++a)
      ux[a] = cross(director_derivative(es, basis_embed(central(q, p, g.stride[a], inv2h))), u);
    double ux2 = 0.0;
    for (int a = 0; a < g.dim; ++a) ux2 += dot(ux[a], ux[a]);
    auto add = [&](Sums& S, double weight) {
      S.ut2 += weight * weight * dot(ut, ut) * vol;
      S.ux2 += weight * weight * ux2 * vol;
    };
    if (inside) add(smp.sharp, 1.0);
    add(smp.weighted, w);
    for (int m = 0; m < kBasket; ++m) {
      const Vec3 phi = basket_phi(m, x);
      double form = dot(ut, phi);
      double dphi2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        constexpr double step = 1e-5;
        Vec3 xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        const Vec3 fp = basket_phi(m, xp), fm = basket_phi(m, xm);
        const Vec3 dphi{(fp[0] - fm[0]) / (2 * step), (fp[1] - fm[1]) / (2 * step), (fp[2] - fm[2]) / (2 * step)};
        form += dot(ux[a], dphi);
        dphi2 += dot(dphi, dphi);
      }
      if (inside) {
        smp.sharp.form[m] += form * vol;
        smp.sharp.phi2[m] += dot(phi, phi) * vol;
        smp.sharp.dphi2[m] += dphi2 * vol;
      }
      smp.weighted.form[m] += w * form * vol;
      smp.weighted.phi2[m] += dot(phi, phi) * vol;
      smp.weighted.dphi2[m] += dphi2 * vol;
    }
  });
  data_.push_back(smp);
}

double WeakFormResidual::absolute() const {
  double best = 0.0;
  for (int m = 0; m < kBasket; ++m) {
    double integral = 0.0;
    for (std::size_t s = 1; s < data_.size(); ++s)
      integral += 0.5 * (data_[s].t - data_[s - 1].t) * (data_[s].sharp.form[m] + data_[s - 1].sharp.form[m]);
    best = std::max(best, std::abs(integral));
  }
  return best;
}

double WeakFormResidual::relative_of(const std::vector<Sample>& data, Sums Sample::*which) {
  auto integrate = [&](auto&& f) {
    double acc = 0.0;
    for (std::size_t s = 1; s < data.size(); ++s)
      acc += 0.5 * (data[s].t - data[s - 1].t) * (f(data[s].*which) + f(data[s - 1].*which));
    return acc;
  };
  const double ut2 = integrate([](const Sums& s) { return s.ut2; });
  const double ux2 = integrate([](const Sums& s) { return s.ux2; });
  double best = 0.0;
  for (int m = 0; m < kBasket; ++m) {
    const double form = integrate([m](const Sums& s) { return s.form[m]; });
    const double phi2 = integrate([m](const Sums& s) { return s.phi2[m]; });
    const double dphi2 = integrate([m](const Sums& s) { return s.dphi2[m]; });
    const double bound = std::sqrt(ut2 * phi2) + std::sqrt(ux2 * dphi2);
    if (bound > 0.0) best = std::max(best, std::abs(form) / bound);
  }
  return best;
}

double WeakFormResidual::relative() const { return relative_of(data_, &Sample::sharp); }
double WeakFormResidual::relative_weighted() const { return relative_of(data_, &Sample::weighted); }

// ---------------------------------------------------------------------------

GronwallReport gronwall_report(const std::vector<double>& t, const std::vector<double>& E, double eps,
                               double ceiling, double growth_limit) {
  if (t.size() != E.size()) throw DomainError("gronwall_report: size mismatch");
  if (t.size() < 10) throw DomainError("gronwall_report: at least ten records are required");
  const double floor = eps * 1e-6;
  const double e0 = std::max(E.front(), floor);
  GronwallReport r;
  r.max_growth = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double ek = std::max(E[k], floor);
    r.max_growth = std::max(r.max_growth, ek / e0);
    const double dt = t[k] - t.front();
    if (dt > 0.0) r.C_fit = std::max(r.C_fit, (std::log(ek) - std::log(e0)) / dt);
  }
  r.ok = r.C_fit <= ceiling && r.max_growth <= growth_limit;
  return r;
}

std::string csv_header() {
  return "t,E_gl,E_mod,E_mod_over_eps,dissipation_cum,dissipation_residual,R_fit,R_exact,max_abs_Q,"
         "comm_grad_l2,comm_time_l2,bound_a,bound_b,bound_btilde,bound_c,bound_d,stress_residual";
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::string s;
  const double v[] = {r.t,         r.E_gl,      r.E_mod,          r.E_mod_over_eps, r.dissipation_cum,
                      r.dissipation_residual,   r.R_fit,          r.R_exact,        r.max_abs_Q,
                      r.comm_grad_l2,           r.comm_time_l2,   r.bounds[0],      r.bounds[1],
                      r.bounds[2],              r.bounds[3],      r.bounds[4],      r.stress_residual};
  for (std::size_t k = 0; k < std::size(v); ++k) {
    if (k) s += ',';
    s += format_double(v[k]);
  }
  return s;
}

WellPreparedness well_preparedness_report(const TensorField& q, const DiagnosticsContext& ctx) {
  const FieldAnalysis a = analyze_field(q, nullptr, ctx, 0.0);
  if (a.E_mod < -1e-8) {
    std::ostringstream os;
    os << "well-preparedness: negative modulated energy " << a.E_mod;
    throw DomainError(os.str());
  }
  return {a.E_mod, a.E_mod / ctx.eps, a.E_gl};
}

}  // namespace qmcf
