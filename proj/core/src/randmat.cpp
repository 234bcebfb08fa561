#include "mmf/randmat.hpp"

#include <cmath>
#include <numeric>

#include "mmf/errors.hpp"
#include "mmf/stats.hpp"

namespace mmf {

UnitaryMatrix haar_unitary(Index m, Rng& rng) {
  if (m < 1) {
    throw InvalidDimension("haar_unitary: dimension must be at least 1");
  }
  ComplexMatrix z(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      z(i, j) = rng.complex_normal();
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Index k = 0; k < m; ++k) {
    const double magnitude = std::abs(r(k, k));
    if (magnitude > 0.0) {
      q.col(k) *= r(k, k) / magnitude;
    }
  }
  return UnitaryMatrix::adopt(std::move(q));
}

void apply_haar_left(ComplexMatrix& target, Rng& rng) {
  const Index m = target.rows();
  if (m < 1) {
    throw InvalidDimension("apply_haar_left: empty target");
  }
  ComplexMatrix vectors = ComplexMatrix::Zero(m, m);
  ComplexVector coeffs(m);
  RealVector signs(m);
  ComplexVector work(m);
  for (Index k = 0; k < m; ++k) {
    auto x = work.head(m - k);
    for (Index i = 0; i < m - k; ++i) {
      x(i) = rng.complex_normal();
    }
    Complex tau;
    double beta = 0.0;
    x.makeHouseholderInPlace(tau, beta);
    vectors.col(k).tail(m - k - 1) = x.tail(m - k - 1);
    coeffs(k) = tau;
    // Eigen leaves r_kk = beta real, so the phase correction is a sign.
    signs(k) = beta < 0.0 ? -1.0 : 1.0;
  }
  target = signs.asDiagonal() * target;
  Eigen::HouseholderSequence<ComplexMatrix, ComplexVector> q(vectors, coeffs);
  q.applyThisOnTheLeft(target);
}

StiefelMatrix stiefel_sample(Index m, Index n, Rng& rng) {
  if (m < 1 || n < 1 || n > m) {
    throw InvalidDimension("stiefel_sample: need 1 <= n <= m");
  }
  const UnitaryMatrix a = haar_unitary(m, rng);
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < n; ++i) {
    const auto j = i + static_cast<Index>(rng.index(static_cast<std::size_t>(m - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  ComplexMatrix c(m, n);
  for (Index i = 0; i < n; ++i) {
    c.col(i) = a.matrix().col(order[static_cast<std::size_t>(i)]);
  }
  return StiefelMatrix::adopt(std::move(c));
}

std::vector<double> eigenphases(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) {
    throw InvalidDimension("eigenphases: matrix must be square");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(u, /*computeEigenvectors=*/false);
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(u.rows()));
  for (Index i = 0; i < u.rows(); ++i) {
    phases.push_back(std::arg(solver.eigenvalues()(i)));
  }
  return phases;
}

double left_invariance_statistic(std::span<const UnitaryMatrix> samples,
                                 const UnitaryMatrix& fixed) {
  if (samples.empty()) {
    throw InvalidInput("left_invariance_statistic: empty sample list");
  }
  std::vector<double> plain;
  std::vector<double> rotated;
  for (const auto& u : samples) {
    if (u.size() != fixed.size()) {
      throw InvalidDimension("left_invariance_statistic: dimension mismatch");
    }
    const auto a = eigenphases(u.matrix());
    const auto b = eigenphases(fixed.matrix() * u.matrix());
    plain.insert(plain.end(), a.begin(), a.end());
    rotated.insert(rotated.end(), b.begin(), b.end());
  }
  return ks_statistic(std::move(plain), std::move(rotated));
}

}  // namespace mmf
