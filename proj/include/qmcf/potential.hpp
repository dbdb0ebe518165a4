#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "qmcf/qtensor.hpp"

namespace qmcf {

/// Material constants of the quartic bulk potential.
struct PotentialCoefficients {
  double a = 3.0;
  double b = 9.0;
  double c = 1.0;
  bool critical = true;  ///< require b^2 = 27 a c
  int K = 4;             ///< regularization exponent, shift eps^(K-1)

  /// Throws ConfigError on nonpositive constants, K < 1, or a failed critical check.
  void validate() const;
  /// (b + sqrt(b^2 - 24ac)) / (4c). Throws DomainError if the discriminant is negative.
  double s_plus() const;
  double s_minus() const { return 0.0; }
};

/// The Landau-de Gennes bulk potential for a fixed coefficient set.
class LandauPotential {
 public:
  explicit LandauPotential(PotentialCoefficients k = {});

  const PotentialCoefficients& coeffs() const { return k_; }
  double s_plus() const { return s_plus_; }

  double energy(const QTensor& q) const;
  double energy(const Coeffs5& q) const;
  /// Gradient in the coefficient coordinates (equivalently in the tensor space).
  QTensor gradient(const QTensor& q) const;
  Coeffs5 gradient(const Coeffs5& q) const;
  /// Matrix form a Q - b Q^2 + c|Q|^2 Q + (b/3)|Q|^2 I; same tensor as gradient().
  Mat3 gradient_matrix(const QTensor& q) const;

  /// F + eps^(K-1). Throws DomainError if eps <= 0.
  double regularized_energy(const QTensor& q, double eps) const;
  double regularization(double eps) const;

  /// Restriction to uniaxial tensors with order parameter s.
  double uniaxial_f(double s) const;
  double uniaxial_f_prime(double s) const;
  /// Nonnegative square root of uniaxial_f on [0, s_plus]; DomainError outside.
  double sqrt_f(double s) const;

  /// Largest |eigenvalue| of the finite-difference Hessian over sampled tensors
  /// with |Q| <= c0. Deterministic; cached per c0.
  double hessian_bound(double c0) const;

 private:
  PotentialCoefficients k_;
  double s_plus_;
  struct Cache {
    std::mutex mutex;
    std::map<double, double> hessian;
  };
  std::shared_ptr<Cache> cache_;
};

}  // namespace qmcf
