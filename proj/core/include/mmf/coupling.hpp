#pragma once

#include <string>
#include <utility>

#include "mmf/capacity.hpp"
#include "mmf/fiber.hpp"
#include "mmf/linalg.hpp"
#include "mmf/rng.hpp"

namespace mmf {

/// Input coupler C_I (M x N_t, orthonormal columns) and output coupler
/// C_O (N_r x M, orthonormal rows).
class CouplingPair {
 public:
  /// Throws InvalidDimension when the shapes disagree and InvalidInput when
  /// either orthonormality residual exceeds `tolerance`.
  CouplingPair(ComplexMatrix input, ComplexMatrix output, double tolerance = kUnitaryTolerance);

  static CouplingPair identity(Index m);

  const ComplexMatrix& input() const noexcept { return input_; }
  const ComplexMatrix& output() const noexcept { return output_; }
  Index modes() const noexcept { return input_.rows(); }
  Index n_t() const noexcept { return input_.cols(); }
  Index n_r() const noexcept { return output_.rows(); }

 private:
  ComplexMatrix input_;
  ComplexMatrix output_;
};

enum class CouplingScenario { controlled, random, nmode_baseline, ideal };

std::string to_string(CouplingScenario s);

struct CoupledChannel {
  ComplexMatrix h_t;
  CouplingScenario scenario = CouplingScenario::random;
};

/// H_t = C_O H C_I. Throws InvalidDimension unless H is M x M.
CoupledChannel couple(const ComplexMatrix& h, const CouplingPair& pair,
                      CouplingScenario scenario = CouplingScenario::random);

/// C_I = first n_t columns of V_H, C_O = first n_r rows of U_H*, which turns
/// H into diag(lambda_1, ..., lambda_n).
/// Throws UnsupportedConfiguration when n_t != n_r, InvalidDimension when
/// n exceeds M or is zero.
CouplingPair controlled_pair(const EndToEndDecomposition& decomp, Index n_t, Index n_r);

/// Independent uniform Stiefel draws for C_I and C_O*.
CouplingPair random_pair(Index m, Index n_t, Index n_r, Rng& rng);

/// Capacities with (C_I, C_O) and with (C_I V_I, U_O C_O), n_t streams each.
std::pair<double, double> proposition1_check(const ComplexMatrix& h, const CouplingPair& pair,
                                             const ComplexMatrix& v_i, const ComplexMatrix& u_o,
                                             SnrSpec snr);

/// sum_{n < N} log2(1 + (snr / N) exp(rho_n)) over the N largest rho.
double controlled_capacity_formula(const RealVector& rho, Index n, SnrSpec snr);

}  // namespace mmf
