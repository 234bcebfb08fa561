#include "mmf/linalg.hpp"

#include <string>

#include "mmf/errors.hpp"

namespace mmf {

double column_orthonormality_residual(const ComplexMatrix& c) {
  const ComplexMatrix gram = c.adjoint() * c;
  return (gram - ComplexMatrix::Identity(c.cols(), c.cols())).cwiseAbs().maxCoeff();
}

double row_orthonormality_residual(const ComplexMatrix& c) {
  const ComplexMatrix gram = c * c.adjoint();
  return (gram - ComplexMatrix::Identity(c.rows(), c.rows())).cwiseAbs().maxCoeff();
}

UnitaryMatrix UnitaryMatrix::adopt(ComplexMatrix m) { return UnitaryMatrix(std::move(m)); }

UnitaryMatrix UnitaryMatrix::checked(ComplexMatrix m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidDimension("unitary matrix must be square and non-empty");
  }
  const double residual = column_orthonormality_residual(m);
  if (!(residual <= tolerance)) {
    throw InvalidInput("matrix is not unitary: residual " + std::to_string(residual));
  }
  return UnitaryMatrix(std::move(m));
}

UnitaryMatrix UnitaryMatrix::identity(Index m) {
  return UnitaryMatrix(ComplexMatrix::Identity(m, m));
}

StiefelMatrix StiefelMatrix::adopt(ComplexMatrix m) { return StiefelMatrix(std::move(m)); }

StiefelMatrix StiefelMatrix::checked(ComplexMatrix m, double tolerance) {
  if (m.cols() == 0 || m.rows() < m.cols()) {
    throw InvalidDimension("Stiefel matrix must be M x N with M >= N >= 1");
  }
  const double residual = column_orthonormality_residual(m);
  if (!(residual <= tolerance)) {
    throw InvalidInput("columns are not orthonormal: residual " + std::to_string(residual));
  }
  return StiefelMatrix(std::move(m));
}

RealVector singular_values(const ComplexMatrix& h) {
  if (h.size() == 0) {
    return RealVector();
  }
  Eigen::BDCSVD<ComplexMatrix> svd(h);
  return svd.singularValues();
}

RealVector channel_eigenvalues(const ComplexMatrix& h) {
  return singular_values(h).array().square().matrix();
}

}  // namespace mmf
