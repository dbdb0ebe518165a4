#include "qmcf/qtensor.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "qmcf/errors.hpp"
#include "qmcf/tensor_basis.hpp"

namespace qmcf {

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  return r;
}

Mat3 Mat3::outer(const Vec3& a, const Vec3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (std::size_t k = 0; k < 9; ++k) m[k] += o.m[k];
  return *this;
}
Mat3& Mat3::operator-=(const Mat3& o) {
  for (std::size_t k = 0; k < 9; ++k) m[k] -= o.m[k];
  return *this;
}
Mat3& Mat3::operator*=(double s) {
  for (auto& v : m) v *= s;
  return *this;
}
Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
Mat3 operator*(Mat3 a, double s) { return a *= s; }
Mat3 operator*(double s, Mat3 a) { return a *= s; }

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
          a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
          a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------

QTensor QTensor::from_matrix(const Mat3& a) { return QTensor(basis_project(a)); }

Mat3 QTensor::matrix() const { return basis_embed(c_); }

double QTensor::norm() const {
  double acc = 0.0;
  for (double v : c_) acc += v * v;
  return std::sqrt(acc);
}

QTensor& QTensor::operator+=(const QTensor& o) {
  for (std::size_t k = 0; k < 5; ++k) c_[k] += o.c_[k];
  return *this;
}
QTensor& QTensor::operator-=(const QTensor& o) {
  for (std::size_t k = 0; k < 5; ++k) c_[k] -= o.c_[k];
  return *this;
}
QTensor& QTensor::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
QTensor operator*(QTensor a, double s) { return a *= s; }
QTensor operator*(double s, QTensor a) { return a *= s; }

Mat3 basis_embed(const Coeffs5& c) {
  using namespace basis;
  Mat3 r;
  r(0, 0) = kE1[0] * c[0] + kE2[0] * c[1];
  r(1, 1) = kE1[1] * c[0] + kE2[1] * c[1];
  r(2, 2) = kE1[2] * (c[0] + c[1]);
  r(0, 1) = r(1, 0) = kInvSqrt2 * c[2];
  r(0, 2) = r(2, 0) = kInvSqrt2 * c[3];
  r(1, 2) = r(2, 1) = kInvSqrt2 * c[4];
  return r;
}

Coeffs5 basis_project(const Mat3& a) {
  using namespace basis;
  return {kE1[0] * a(0, 0) + kE1[1] * a(1, 1) + kE1[2] * a(2, 2),
          kE2[0] * a(0, 0) + kE2[1] * a(1, 1) + kE2[2] * a(2, 2),
          kInvSqrt2 * (a(0, 1) + a(1, 0)), kInvSqrt2 * (a(0, 2) + a(2, 0)),
          kInvSqrt2 * (a(1, 2) + a(2, 1))};
}

Mat3 basis_tensor(int k) {
  Coeffs5 c{};
  c.at(static_cast<std::size_t>(k)) = 1.0;
  return basis_embed(c);
}

QTensor uniaxial(double s, const Vec3& u) {
  const double nu = norm(u);
  if (!(std::abs(nu - 1.0) <= 1e-10)) throw DomainError("uniaxial: director must be a unit vector");
  Mat3 m = Mat3::outer(u, u);
  m -= Mat3::identity() * (1.0 / 3.0);
  return QTensor::from_matrix(m * s);
}

// ---------------------------------------------------------------------------
// Eigensolver

namespace {

double sym_scale(const Mat3& a) {
  double acc = 0.0;
  for (double v : a.m) acc = std::max(acc, std::abs(v));
  return acc;
}

Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Kernel vector of (A - lambda I) from the largest cross product of its rows.
Vec3 null_vector(const Mat3& a, double lambda) {
  const Vec3 r0{a(0, 0) - lambda, a(0, 1), a(0, 2)};
  const Vec3 r1{a(1, 0), a(1, 1) - lambda, a(1, 2)};
  const Vec3 r2{a(2, 0), a(2, 1), a(2, 2) - lambda};
  const std::array<Vec3, 3> c{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  std::size_t best = 0;
  double best_n = dot(c[0], c[0]);
  for (std::size_t k = 1; k < 3; ++k) {
    const double n = dot(c[k], c[k]);
    if (n > best_n) {
      best_n = n;
      best = k;
    }
  }
  return normalized(c[best]);
}

double reconstruction_error(const Mat3& a, const Eigensystem& es) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) r += Mat3::outer(es.frame[i], es.frame[i]) * es.lambda[i];
  return frob_norm(r - a);
}

void sort_ascending(Eigensystem& es) {
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return es.lambda[x] < es.lambda[y]; });
  Eigensystem out;
  for (int k = 0; k < 3; ++k) {
    out.lambda[k] = es.lambda[idx[k]];
    out.frame[k] = es.frame[idx[k]];
  }
  es = out;
}

}  // namespace

Eigensystem eigensystem_jacobi(const Mat3& input) {
  Mat3 a = input;
  Mat3 v = Mat3::identity();
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double diag = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2);
    if (off <= 1e-34 * diag || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  Eigensystem es;
  for (int k = 0; k < 3; ++k) {
    es.lambda[k] = a(k, k);
    es.frame[k] = {v(0, k), v(1, k), v(2, k)};
  }
  sort_ascending(es);
  return es;
}

Eigensystem eigensystem(const Mat3& a) {
  const double scale = sym_scale(a);
  Eigensystem es;
  if (scale == 0.0) {
    es.frame = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return es;
  }
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  const double d0 = a(0, 0) - q, d1 = a(1, 1) - q, d2 = a(2, 2) - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p <= 1e-14 * scale) {
    es.lambda = {q, q, q};
    es.frame = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return es;
  }
  Mat3 b = (a - Mat3::identity() * q) * (1.0 / p);
  const double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double half = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(half) / 3.0;
  const double l3 = q + 2.0 * p * std::cos(phi);
  const double l1 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double l2 = 3.0 * q - l1 - l3;
  es.lambda = {l1, l2, l3};

  // Cross-product eigenvectors are accurate only when the eigenvalues are well
  // separated relative to the matrix scale.
  const double gap = std::min(l2 - l1, l3 - l2);
  if (gap < 1e-4 * p) return eigensystem_jacobi(a);

  Vec3 n3 = null_vector(a, l3);
  Vec3 n1 = null_vector(a, l1);
  const double proj = dot(n1, n3);
  n1 = normalized({n1[0] - proj * n3[0], n1[1] - proj * n3[1], n1[2] - proj * n3[2]});
  es.frame = {n1, cross(n3, n1), n3};
  if (reconstruction_error(a, es) > 1e-12 * std::max(1.0, scale)) return eigensystem_jacobi(a);
  return es;
}

Eigensystem eigensystem(const QTensor& q) { return eigensystem(q.matrix()); }

Biaxiality biaxiality(const Eigensystem& es) {
  return {1.5 * es.lambda[2], std::max(0.0, 1.5 * (es.lambda[1] - es.lambda[0]))};
}

Biaxiality biaxiality(const QTensor& q) { return biaxiality(eigensystem(q)); }

Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }
Mat3 commutator(const QTensor& a, const QTensor& b) { return commutator(a.matrix(), b.matrix()); }

double contract(const Mat3& a, const Mat3& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < 9; ++k) acc += a.m[k] * b.m[k];
  return acc;
}
double contract(const QTensor& a, const QTensor& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < 5; ++k) acc += a[k] * b[k];
  return acc;
}
double frob_norm(const Mat3& a) { return std::sqrt(contract(a, a)); }
double frob_norm(const QTensor& a) { return a.norm(); }

}  // namespace qmcf
