#pragma once

#include <span>
#include <vector>

#include "mmf/linalg.hpp"
#include "mmf/rng.hpp"

namespace mmf {

/// Haar-distributed m x m unitary.
///
/// Draws Z with i.i.d. unit-variance complex Gaussian entries, factors
/// Z = QR and returns Q * diag(r_ii / |r_ii|). The phase correction makes the
/// result the unique QR factor with positive diagonal R, which is what makes
/// the law uniform on U(m) regardless of the QR routine's sign convention.
/// Throws InvalidDimension when m == 0.
UnitaryMatrix haar_unitary(Index m, Rng& rng);

/// target <- W * target for a fresh Haar W, without forming W.
///
/// The Householder vectors of a QR factorization of a Gaussian matrix are
/// themselves functions of independent Gaussian vectors of lengths m, m-1, ...,
/// 1, so they are drawn directly and applied as a blocked reflector sequence.
/// Same law as haar_unitary(m) * target, at roughly a third of the cost.
void apply_haar_left(ComplexMatrix& target, Rng& rng);

/// M x N matrix of N columns chosen uniformly without replacement
/// (Fisher-Yates on the same stream) from a Haar unitary.
/// Throws InvalidDimension unless 1 <= n <= m.
StiefelMatrix stiefel_sample(Index m, Index n, Rng& rng);

/// Arguments of the eigenvalues of a square matrix, in (-pi, pi].
std::vector<double> eigenphases(const ComplexMatrix& u);

/// Two-sample KS distance between the pooled eigenphases of {U_i} and of
/// {fixed * U_i}. Haar samples are left-invariant, so the value should stay
/// below the KS critical value.
double left_invariance_statistic(std::span<const UnitaryMatrix> samples,
                                 const UnitaryMatrix& fixed);

}  // namespace mmf
