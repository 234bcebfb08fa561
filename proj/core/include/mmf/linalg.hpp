#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mmf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kUnitaryTolerance = 1e-10;

/// Max absolute entry of C*C - I (orthonormal-column residual).
double column_orthonormality_residual(const ComplexMatrix& c);

/// Max absolute entry of C C* - I (orthonormal-row residual).
double row_orthonormality_residual(const ComplexMatrix& c);

/// Square matrix with orthonormal columns.
///
/// Samplers construct these with `adopt`, which trusts the caller; `checked`
/// verifies the residual and throws InvalidInput when it exceeds `tolerance`.
class UnitaryMatrix {
 public:
  static UnitaryMatrix adopt(ComplexMatrix m);
  static UnitaryMatrix checked(ComplexMatrix m, double tolerance = kUnitaryTolerance);
  static UnitaryMatrix identity(Index m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index size() const noexcept { return m_.rows(); }

 private:
  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// M x N matrix (M >= N) with orthonormal columns: a point on the complex
/// Stiefel manifold.
class StiefelMatrix {
 public:
  static StiefelMatrix adopt(ComplexMatrix m);
  static StiefelMatrix checked(ComplexMatrix m, double tolerance = kUnitaryTolerance);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }

 private:
  explicit StiefelMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Singular values in descending order.
RealVector singular_values(const ComplexMatrix& h);

/// Eigenvalues of H H* (squared singular values), descending.
RealVector channel_eigenvalues(const ComplexMatrix& h);

}  // namespace mmf
