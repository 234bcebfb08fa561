#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mmf/coupling.hpp"
#include "mmf/errors.hpp"
#include "mmf/randmat.hpp"
#include "oracles.hpp"

namespace mmf {
namespace {

PropagationConfig make_config(Index m, Index k, double xi_db) {
  PropagationConfig c;
  c.modes = m;
  c.sections = k;
  c.xi_db = xi_db;
  return c;
}

double max_off_diagonal(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

TEST(CouplingPair, Validation) {
  EXPECT_THROW(CouplingPair(ComplexMatrix::Identity(4, 2), ComplexMatrix::Identity(2, 3)), InvalidDimension);
  EXPECT_THROW(CouplingPair(ComplexMatrix::Identity(2, 3), ComplexMatrix::Identity(3, 2)), InvalidDimension);
  ComplexMatrix bad = ComplexMatrix::Identity(4, 2);
  bad(3, 0) = 0.1;
  EXPECT_THROW(CouplingPair(bad, ComplexMatrix::Identity(2, 4)), InvalidInput);
  EXPECT_THROW(CouplingPair(ComplexMatrix::Identity(4, 2), 2.0 * ComplexMatrix::Identity(2, 4)), InvalidInput);
  const CouplingPair ok(ComplexMatrix::Identity(4, 2), ComplexMatrix::Identity(3, 4));
  EXPECT_EQ(ok.modes(), 4);
  EXPECT_EQ(ok.n_t(), 2);
  EXPECT_EQ(ok.n_r(), 3);
}

TEST(Couple, IdentityCouplers) {
  Rng rng(1);
  const ComplexMatrix h = oracle::gaussian_matrix(5, 5, rng);
  const auto out = couple(h, CouplingPair::identity(5), CouplingScenario::ideal);
  EXPECT_TRUE(out.h_t == h);
  EXPECT_EQ(out.scenario, CouplingScenario::ideal);
}

TEST(Couple, DimensionMismatch) {
  EXPECT_THROW(couple(ComplexMatrix::Identity(4, 4), CouplingPair::identity(5)), InvalidDimension);
  EXPECT_THROW(couple(ComplexMatrix::Identity(5, 4), CouplingPair::identity(5)), InvalidDimension);
}

TEST(Couple, IdentityFiberWithHaarInput) {
  Rng rng(2);
  const Index m = 12;
  const Index n = 3;
  const StiefelMatrix ci = stiefel_sample(m, n, rng);
  const StiefelMatrix co = stiefel_sample(m, n, rng);
  const CouplingPair pair(ci.matrix(), co.matrix().adjoint());
  const ComplexMatrix h_t = couple(ComplexMatrix::Identity(m, m), pair).h_t;
  EXPECT_LE((h_t - oracle::naive_product(oracle::naive_adjoint(co.matrix()), ci.matrix())).cwiseAbs().maxCoeff(), 1e-14);
  const double ideal = flat_capacity(ComplexMatrix::Identity(n, n), {20.0}, n);
  EXPECT_LT(flat_capacity(h_t, {20.0}, n), ideal);
  // Output rows spanning the input column space recover the ideal channel.
  const CouplingPair matched(ci.matrix(), ci.matrix().adjoint());
  EXPECT_NEAR(flat_capacity(couple(ComplexMatrix::Identity(m, m), matched).h_t, {20.0}, n), ideal, 1e-12);
}

TEST(Couple, RandomCouplingOfLosslessFiberIsNotUnitary) {
  // C_O H C_I keeps unit singular values only when the rows of C_O H contain
  // the image of C_I; independent Stiefel draws almost never satisfy that.
  Rng rng(3);
  const ComplexMatrix h = sample_channel(make_config(100, 16, 0.0), rng);
  const CouplingPair pair = random_pair(100, 4, 4, rng);
  const RealVector s = Eigen::JacobiSVD<ComplexMatrix>(couple(h, pair).h_t).singularValues();
  EXPECT_LE(s.maxCoeff(), 1.0 + 1e-12);
  EXPECT_LT(s.minCoeff(), 1.0 - 1e-3);
  // Rotating the output coupler onto the transported input restores them.
  const ComplexMatrix transported = h * pair.input();
  const CouplingPair aligned(pair.input(), transported.adjoint());
  const RealVector t = Eigen::JacobiSVD<ComplexMatrix>(couple(h, aligned).h_t).singularValues();
  EXPECT_LE((t.array() - 1.0).abs().maxCoeff(), 1e-8);
}

TEST(ControlledPair, IdentityChannel) {
  const auto pair = controlled_pair(decompose(ComplexMatrix::Identity(6, 6)), 3, 3);
  const ComplexMatrix h_t = couple(ComplexMatrix::Identity(6, 6), pair, CouplingScenario::controlled).h_t;
  EXPECT_LE((h_t - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ControlledPair, DiagonalChannel) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = 3.0;
  h(2, 2) = 2.0;
  const auto pair = controlled_pair(decompose(h), 2, 2);
  const ComplexMatrix h_t = couple(h, pair).h_t;
  EXPECT_NEAR(std::abs(h_t(0, 0)), 3.0, 1e-12);
  EXPECT_NEAR(std::abs(h_t(1, 1)), 2.0, 1e-12);
  EXPECT_NEAR(h_t(0, 0).imag(), 0.0, 1e-12);
  EXPECT_GT(h_t(0, 0).real(), 0.0);
  EXPECT_LE(max_off_diagonal(h_t), 1e-12);
}

TEST(ControlledPair, Errors) {
  const auto d = decompose(ComplexMatrix::Identity(4, 4));
  EXPECT_THROW(controlled_pair(d, 2, 3), UnsupportedConfiguration);
  EXPECT_THROW(controlled_pair(d, 5, 5), InvalidDimension);
  EXPECT_THROW(controlled_pair(d, 0, 0), InvalidDimension);
}

TEST(ControlledPair, DiagonalizesARandomFiber) {
  Rng rng(4);
  const ComplexMatrix h = sample_channel(make_config(100, 256, 4.0), rng);
  const auto pair = controlled_pair(decompose(h), 4, 4);
  const ComplexMatrix h_t = couple(h, pair, CouplingScenario::controlled).h_t;
  const RealVector oracle_sv = Eigen::JacobiSVD<ComplexMatrix>(h).singularValues();
  EXPECT_LE(max_off_diagonal(h_t), 1e-8);
  for (Index i = 0; i < 4; ++i) {
    EXPECT_NEAR(h_t(i, i).real(), oracle_sv(i), 1e-8 * oracle_sv(0));
    EXPECT_NEAR(h_t(i, i).imag(), 0.0, 1e-8 * oracle_sv(0));
  }
}

TEST(ControlledPair, CapacityFormula) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix h = sample_channel(make_config(16, 32, 4.0), rng);
    const auto d = decompose(h);
    const ComplexMatrix h_t = couple(h, controlled_pair(d, 4, 4)).h_t;
    for (double s : {0.0, 15.0, 30.0}) {
      const double direct = flat_capacity(h_t, {s}, 4);
      EXPECT_NEAR(controlled_capacity_formula(d.rho, 4, {s}), direct, 1e-9 * direct);
    }
  }
  EXPECT_THROW(controlled_capacity_formula(RealVector::Zero(3), 4, {0.0}), InvalidDimension);
}

TEST(RandomPair, SquareCouplersAreUnitary) {
  Rng rng(6);
  const auto pair = random_pair(5, 5, 5, rng);
  EXPECT_LE(column_orthonormality_residual(pair.input()), 1e-12);
  EXPECT_LE(row_orthonormality_residual(pair.input()), 1e-12);
  EXPECT_LE(column_orthonormality_residual(pair.output()), 1e-12);
  EXPECT_LE(row_orthonormality_residual(pair.output()), 1e-12);
}

TEST(RandomPair, HundredModesFourStreams) {
  Rng rng(7);
  const auto pair = random_pair(100, 4, 4, rng);
  EXPECT_EQ(pair.input().rows(), 100);
  EXPECT_EQ(pair.output().cols(), 100);
  EXPECT_LE(column_orthonormality_residual(pair.input()), 1e-10);
  EXPECT_LE(row_orthonormality_residual(pair.output()), 1e-10);
}

TEST(RandomPair, UnequalStreamCountsAllowed) {
  Rng rng(8);
  const auto pair = random_pair(10, 3, 5, rng);
  EXPECT_EQ(pair.n_t(), 3);
  EXPECT_EQ(pair.n_r(), 5);
  EXPECT_THROW(random_pair(4, 5, 2, rng), InvalidDimension);
}

TEST(RandomPair, SeedsAgreeStatistically) {
  const auto c = make_config(12, 16, 4.0);
  auto mean_capacity = [&](std::uint64_t seed, double& se) {
    Rng rng(seed);
    std::vector<double> v;
    for (int t = 0; t < 600; ++t) {
      const ComplexMatrix h = sample_channel(c, rng);
      v.push_back(flat_capacity(couple(h, random_pair(12, 4, 4, rng)).h_t, {15.0}, 4));
    }
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    se = std::sqrt(ss / (v.size() - 1.0) / v.size());
    return m;
  };
  double se_a = 0.0, se_b = 0.0;
  const double a = mean_capacity(100, se_a);
  const double b = mean_capacity(200, se_b);
  EXPECT_LT(std::abs(a - b), 4.0 * std::hypot(se_a, se_b));
}

TEST(Proposition1, IdentityRotationsAreBitIdentical) {
  Rng rng(9);
  const ComplexMatrix h = sample_channel(make_config(10, 8, 4.0), rng);
  const auto pair = random_pair(10, 4, 4, rng);
  const auto [a, b] = proposition1_check(h, pair, ComplexMatrix::Identity(4, 4), ComplexMatrix::Identity(4, 4), {10.0});
  EXPECT_EQ(a, b);
}

TEST(Proposition1, RandomRotationsPreserveCapacity) {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix h = sample_channel(make_config(16, 16, 4.0), rng);
    const auto pair = random_pair(16, 4, 4, rng);
    const ComplexMatrix v = haar_unitary(4, rng).matrix();
    const ComplexMatrix u = haar_unitary(4, rng).matrix();
    const auto [a, b] = proposition1_check(h, pair, v, u, {rng.uniform(0.0, 30.0)});
    EXPECT_NEAR(a, b, 1e-9 * a);
  }
}

TEST(Proposition1, NonUnitaryRotationBreaksEquality) {
  Rng rng(11);
  const ComplexMatrix h = sample_channel(make_config(8, 8, 4.0), rng);
  const auto pair = random_pair(8, 4, 4, rng);
  ComplexMatrix v = haar_unitary(4, rng).matrix();
  v.col(0) *= 1.5;
  const auto [a, b] = proposition1_check(h, pair, v, ComplexMatrix::Identity(4, 4), {10.0});
  EXPECT_GT(std::abs(a - b), 1e-3);
  EXPECT_THROW(proposition1_check(h, pair, ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(4, 4), {10.0}),
               InvalidDimension);
}

TEST(Couplers, PreserveEnergy) {
  Rng rng(12);
  const auto pair = random_pair(30, 6, 6, rng);
  for (int i = 0; i < 100; ++i) {
    const ComplexVector x = oracle::gaussian_matrix(6, 1, rng);
    EXPECT_NEAR((pair.input() * x).norm(), x.norm(), 1e-10 * x.norm());
  }
}

TEST(Couplers, SingularValuesAreOne) {
  Rng rng(13);
  for (Index n = 1; n <= 8; ++n) {
    const auto pair = random_pair(8, n, n, rng);
    const RealVector si = Eigen::JacobiSVD<ComplexMatrix>(pair.input()).singularValues();
    const RealVector so = Eigen::JacobiSVD<ComplexMatrix>(pair.output()).singularValues();
    EXPECT_LE((si.array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_LE((so.array() - 1.0).abs().maxCoeff(), 1e-10);
  }
}

TEST(Couplers, ControlledDominatesRandom) {
  const auto c = make_config(16, 64, 4.0);
  Rng rng(14);
  int wins = 0;
  double worst = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix h = sample_channel(c, rng);
    const double controlled = flat_capacity(couple(h, controlled_pair(decompose(h), 4, 4)).h_t, {20.0}, 4);
    const double random = flat_capacity(couple(h, random_pair(16, 4, 4, rng)).h_t, {20.0}, 4);
    wins += controlled >= random;
    worst = std::max(worst, random - controlled);
  }
  EXPECT_GE(wins, static_cast<int>(std::ceil(0.999 * trials)));
  EXPECT_LE(worst, 1e-6);
}

TEST(Couplers, NeverExceedIntrinsicCapacity) {
  const auto c = make_config(16, 32, 4.0);
  Rng rng(15);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix h = sample_channel(c, rng);
    const double snr_db = rng.uniform(0.0, 30.0);
    for (const auto& pair : {random_pair(16, 4, 4, rng), controlled_pair(decompose(h), 4, 4)}) {
      const double coupled = flat_capacity(couple(h, pair).h_t, {snr_db}, 4);
      // Same per-stream power P/4 on every mode of H.
      const double all_modes = flat_capacity(h, {snr_db + 10.0 * std::log10(16.0 / 4.0)}, 16);
      // Best use of the same total power on H.
      const RealVector gains = channel_eigenvalues(h);
      const double best = allocated_capacity(gains, waterfill(gains, SnrSpec{snr_db}.linear()).powers);
      EXPECT_LE(coupled, all_modes + 1e-9);
      EXPECT_LE(coupled, best + 1e-9);
    }
  }
}

}  // namespace
}  // namespace mmf
