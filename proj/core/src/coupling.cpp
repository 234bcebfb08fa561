#include "mmf/coupling.hpp"

#include <cmath>

#include "mmf/errors.hpp"
#include "mmf/randmat.hpp"

namespace mmf {

CouplingPair::CouplingPair(ComplexMatrix input, ComplexMatrix output, double tolerance)
    : input_(std::move(input)), output_(std::move(output)) {
  if (input_.cols() == 0 || output_.rows() == 0) {
    throw InvalidDimension("coupler with no streams");
  }
  if (input_.rows() != output_.cols()) {
    throw InvalidDimension("C_I rows and C_O columns must both equal the mode count");
  }
  if (input_.cols() > input_.rows() || output_.rows() > output_.cols()) {
    throw InvalidDimension("couplers cannot have more streams than modes");
  }
  if (column_orthonormality_residual(input_) > tolerance) {
    throw InvalidInput("C_I columns are not orthonormal");
  }
  if (row_orthonormality_residual(output_) > tolerance) {
    throw InvalidInput("C_O rows are not orthonormal");
  }
}

CouplingPair CouplingPair::identity(Index m) {
  return CouplingPair(ComplexMatrix::Identity(m, m), ComplexMatrix::Identity(m, m));
}

std::string to_string(CouplingScenario s) {
  switch (s) {
    case CouplingScenario::controlled: return "controlled";
    case CouplingScenario::random: return "random";
    case CouplingScenario::nmode_baseline: return "nmode";
    case CouplingScenario::ideal: return "ideal";
  }
  return "unknown";
}

CoupledChannel couple(const ComplexMatrix& h, const CouplingPair& pair, CouplingScenario scenario) {
  if (h.rows() != h.cols() || h.rows() != pair.modes()) {
    throw InvalidDimension("couple: H must be M x M with M matching the couplers");
  }
  return {pair.output() * h * pair.input(), scenario};
}

CouplingPair controlled_pair(const EndToEndDecomposition& decomp, Index n_t, Index n_r) {
  if (n_t != n_r) {
    throw UnsupportedConfiguration("controlled coupling requires n_t == n_r");
  }
  const Index m = decomp.v_h.cols();
  if (n_t < 1 || n_t > m) {
    throw InvalidDimension("controlled coupling: stream count must be in [1, M]");
  }
  return CouplingPair(decomp.v_h.leftCols(n_t), decomp.u_h.leftCols(n_r).adjoint());
}

CouplingPair random_pair(Index m, Index n_t, Index n_r, Rng& rng) {
  StiefelMatrix in = stiefel_sample(m, n_t, rng);
  StiefelMatrix out = stiefel_sample(m, n_r, rng);
  return CouplingPair(in.matrix(), out.matrix().adjoint());
}

std::pair<double, double> proposition1_check(const ComplexMatrix& h, const CouplingPair& pair,
                                             const ComplexMatrix& v_i, const ComplexMatrix& u_o,
                                             SnrSpec snr) {
  if (v_i.rows() != pair.n_t() || v_i.cols() != pair.n_t() || u_o.rows() != pair.n_r() ||
      u_o.cols() != pair.n_r()) {
    throw InvalidDimension("proposition1_check: rotations must match the stream counts");
  }
  const auto streams = static_cast<std::size_t>(pair.n_t());
  const ComplexMatrix h_t = couple(h, pair).h_t;
  const ComplexMatrix rotated = u_o * pair.output() * h * pair.input() * v_i;
  return {flat_capacity(h_t, snr, streams), flat_capacity(rotated, snr, streams)};
}

double controlled_capacity_formula(const RealVector& rho, Index n, SnrSpec snr) {
  if (n < 1 || n > rho.size()) {
    throw InvalidDimension("controlled_capacity_formula: n must be in [1, M]");
  }
  const double scale = snr.linear() / static_cast<double>(n);
  double total = 0.0;
  for (Index k = 0; k < n; ++k) total += std::log2(1.0 + scale * std::exp(rho(k)));
  return total;
}

}  // namespace mmf
