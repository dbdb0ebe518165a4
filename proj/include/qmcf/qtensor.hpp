#pragma once

// Algebra of 3x3 symmetric traceless tensors stored as coefficient 5-vectors
// on an orthonormal basis E1..E5 of the tensor space.

#include <array>
#include <cmath>
#include <cstddef>

namespace qmcf {

using Vec3 = std::array<double, 3>;
using Coeffs5 = std::array<double, 5>;

/// Dense 3x3 matrix, row-major.
struct Mat3 {
  std::array<double, 9> m{};

  double& operator()(int i, int j) { return m[3 * i + j]; }
  double operator()(int i, int j) const { return m[3 * i + j]; }

  static Mat3 identity();
  static Mat3 outer(const Vec3& a, const Vec3& b);

  Mat3& operator+=(const Mat3& o);
  Mat3& operator-=(const Mat3& o);
  Mat3& operator*=(double s);
  double trace() const { return m[0] + m[4] + m[8]; }
  Mat3 transposed() const;
};

Mat3 operator+(Mat3 a, const Mat3& b);
Mat3 operator-(Mat3 a, const Mat3& b);
Mat3 operator*(Mat3 a, double s);
Mat3 operator*(double s, Mat3 a);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

/// A point of the 5-dimensional space of symmetric traceless 3x3 tensors.
/// The coefficient vector is the storage; the matrix view is computed on demand,
/// so symmetry and tracelessness hold by construction.
class QTensor {
 public:
  QTensor() = default;
  explicit QTensor(const Coeffs5& c) : c_(c) {}

  /// Orthogonal projection of an arbitrary 3x3 matrix onto the tensor space.
  static QTensor from_matrix(const Mat3& a);

  const Coeffs5& coeffs() const { return c_; }
  Coeffs5& coeffs() { return c_; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }

  Mat3 matrix() const;
  double norm() const;

  QTensor& operator+=(const QTensor& o);
  QTensor& operator-=(const QTensor& o);
  QTensor& operator*=(double s);

 private:
  Coeffs5 c_{};
};

QTensor operator+(QTensor a, const QTensor& b);
QTensor operator-(QTensor a, const QTensor& b);
QTensor operator*(QTensor a, double s);
QTensor operator*(double s, QTensor a);

/// Sum c_k E_k.
Mat3 basis_embed(const Coeffs5& c);
/// Coefficients (A:E_k)_k; the trace and antisymmetric parts of A are discarded.
Coeffs5 basis_project(const Mat3& a);
/// The k-th basis tensor, k in [0,5).
Mat3 basis_tensor(int k);

/// s (u (x) u - I/3). Throws DomainError unless |u| = 1 within 1e-10.
QTensor uniaxial(double s, const Vec3& u);

struct Eigensystem {
  std::array<double, 3> lambda{};  ///< ascending
  std::array<Vec3, 3> frame{};     ///< frame[i] is the unit eigenvector of lambda[i]
};

/// Closed-form (trigonometric) symmetric 3x3 eigensolver with cyclic Jacobi
/// fallback for clustered spectra. Degenerate spectra return some orthonormal
/// frame of the repeated eigenspace.
Eigensystem eigensystem(const Mat3& a);
Eigensystem eigensystem(const QTensor& q);

/// Cyclic Jacobi on a symmetric 3x3 matrix; ascending output.
Eigensystem eigensystem_jacobi(const Mat3& a);

struct Biaxiality {
  double s = 0.0;  ///< degree of orientation, (3/2) lambda_3
  double r = 0.0;  ///< biaxiality, (3/2)(lambda_2 - lambda_1), nonnegative
};

Biaxiality biaxiality(const Eigensystem& es);
Biaxiality biaxiality(const QTensor& q);

/// AB - BA.
Mat3 commutator(const Mat3& a, const Mat3& b);
Mat3 commutator(const QTensor& a, const QTensor& b);

double contract(const Mat3& a, const Mat3& b);
double contract(const QTensor& a, const QTensor& b);
double frob_norm(const Mat3& a);
double frob_norm(const QTensor& a);

}  // namespace qmcf
