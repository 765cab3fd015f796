#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "prwf/errors.hpp"
#include "prwf/linalg.hpp"
#include "prwf/rng.hpp"

namespace prwf {
namespace {

const cplx I1(0.0, 1.0);

Vec<cplx> cvec(std::initializer_list<cplx> v) {
  Vec<cplx> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (cplx x : v) out(k++) = x;
  return out;
}

Vec<double> rvec(std::initializer_list<double> v) {
  Vec<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

Mat<cplx> random_hermitian(Eigen::Index n, Rng& rng) {
  Mat<cplx> g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  return (g + g.adjoint()) / 2.0;
}

TEST(PhaseAlignedDistance, GlobalPhaseIsInvisible) {
  EXPECT_NEAR(phase_aligned_distance(cvec({1.0, 0.0}), cvec({I1, 0.0})), 0.0, 1e-15);
}

TEST(PhaseAlignedDistance, OrthogonalVectors) {
  EXPECT_NEAR(phase_aligned_distance(cvec({1.0, 0.0}), cvec({0.0, 1.0})), std::sqrt(2.0),
              1e-15);
}

TEST(PhaseAlignedDistance, MatchesPhaseGrid) {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec<cplx> z1 = standard_normal_vector<cplx>(8, rng);
    const Vec<cplx> z2 = standard_normal_vector<cplx>(8, rng);
    EXPECT_NEAR(phase_aligned_distance(z1, z2), oracle::phase_grid_distance(z1, z2, 100000),
                1e-6);
  }
}

TEST(PhaseAlignedDistance, LengthMismatchThrows) {
  EXPECT_THROW(phase_aligned_distance(cvec({1.0}), cvec({1.0, 0.0})), DimensionError);
  EXPECT_THROW(align_phase(cvec({1.0}), cvec({1.0, 0.0})), DimensionError);
  EXPECT_THROW(sign_distance(rvec({1.0}), rvec({1.0, 0.0})), DimensionError);
}

TEST(PhaseAlignedDistance, MetricProperties) {
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec<cplx> a = standard_normal_vector<cplx>(5, rng);
    const Vec<cplx> b = standard_normal_vector<cplx>(5, rng);
    const Vec<cplx> c = standard_normal_vector<cplx>(5, rng);
    const double ab = phase_aligned_distance(a, b);
    EXPECT_NEAR(ab, phase_aligned_distance(b, a), 1e-12);
    EXPECT_LE(ab, phase_aligned_distance(a, c) + phase_aligned_distance(c, b) + 1e-12);
    const cplx u = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    EXPECT_NEAR(phase_aligned_distance(u * a, b), ab, 1e-12 * (1.0 + ab));
    EXPECT_NEAR(phase_aligned_distance(a, u * a), 0.0, 1e-12);
  }
}

TEST(PhaseAlignedDistance, NearlyCoincidentInputsKeepRelativeAccuracy) {
  Rng rng(103);
  const Vec<cplx> z = standard_normal_vector<cplx>(50, rng);
  const Vec<cplx> d = standard_normal_vector<cplx>(50, rng).normalized() * 1e-12;
  const cplx u = std::polar(1.0, 0.7);
  // d is not exactly orthogonal to the phase orbit, so the distance is at most ||d||.
  const double dist = phase_aligned_distance(u * (z + d), z);
  EXPECT_LE(dist, 1e-12 * (1.0 + 1e-3));
  EXPECT_GE(dist, 0.5e-12);
}

TEST(AlignPhase, Examples) {
  const cplx a = align_phase(cvec({1.0, 1.0}), cvec({1.0, 1.0}));
  EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-15);
  const cplx b = align_phase(cvec({I1, 0.0}), cvec({1.0, 0.0}));
  EXPECT_NEAR(std::abs(b + I1), 0.0, 1e-15);
  EXPECT_EQ(align_phase(cvec({1.0, 0.0}), cvec({0.0, 1.0})), cplx(1.0, 0.0));
}

TEST(AlignPhase, ConsistentWithDistance) {
  Rng rng(104);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec<cplx> z1 = standard_normal_vector<cplx>(6, rng);
    const Vec<cplx> z2 = standard_normal_vector<cplx>(6, rng);
    const cplx a = align_phase(z1, z2);
    EXPECT_NEAR(std::abs(a), 1.0, 1e-15);
    EXPECT_NEAR((a * z1 - z2).norm(), phase_aligned_distance(z1, z2), 1e-10);
  }
}

TEST(SignDistance, Examples) {
  EXPECT_EQ(sign_distance(rvec({1.0, 2.0}), rvec({-1.0, -2.0})), 0.0);
  EXPECT_NEAR(sign_distance(rvec({1.0, 0.0}), rvec({0.0, 1.0})), std::sqrt(2.0), 1e-15);
}

TEST(SignDistance, MatchesTwoPointEnumerationAndBound) {
  Rng rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec<double> z1 = standard_normal_vector<double>(7, rng);
    const Vec<double> z2 = standard_normal_vector<double>(7, rng);
    EXPECT_EQ(sign_distance(z1, z2), oracle::sign_enumeration_distance(z1, z2));
    EXPECT_LE(sign_distance(z1, z2), (z1 - z2).norm());
    EXPECT_EQ(ambiguity_distance(z1, z2), sign_distance(z1, z2));
  }
}

TEST(HermitianMatrix, RejectsNonHermitian) {
  Mat<cplx> m(2, 2);
  m << 1.0, I1, I1, 1.0;
  EXPECT_THROW(HermitianMatrix<cplx>{m}, ArgumentError);
  Mat<double> r(2, 3);
  r.setZero();
  EXPECT_THROW(HermitianMatrix<double>{r}, DimensionError);
}

TEST(HermitianMatrix, SymmetrizesWithinTolerance) {
  Mat<cplx> m(2, 2);
  m << 1.0, cplx(2.0, 1.0), cplx(2.0, -1.0 + 1e-14), 3.0;
  const HermitianMatrix<cplx> h(m);
  EXPECT_EQ(h(0, 1), std::conj(h(1, 0)));
  EXPECT_EQ(h(0, 0).imag(), 0.0);
}

TEST(LeadingEigenpair, RankOneBump) {
  Mat<double> m = Mat<double>::Identity(4, 4);
  m(0, 0) += 1.0;
  const auto p = leading_eigenpair(HermitianMatrix<double>(m));
  EXPECT_NEAR(p.value, 2.0, 1e-9);
  EXPECT_NEAR(std::abs(p.vector(0)), 1.0, 1e-9);
  EXPECT_LE(p.residual, 1e-9);
}

TEST(LeadingEigenpair, Diagonal) {
  Mat<double> m = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const auto p = leading_eigenpair(HermitianMatrix<double>(m));
  EXPECT_NEAR(p.value, 3.0, 1e-9);
  EXPECT_NEAR(std::abs(p.vector(2)), 1.0, 1e-9);
}

TEST(LeadingEigenpair, AlgebraicallyLargestNotLargestMagnitude) {
  Mat<double> m = Eigen::Vector3d(-10.0, 1.0, 2.0).asDiagonal();
  const auto p = leading_eigenpair(HermitianMatrix<double>(m));
  EXPECT_NEAR(p.value, 2.0, 1e-9);
}

TEST(LeadingEigenpair, MatchesJacobiOracleComplex) {
  Rng rng(106);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Mat<cplx> m = random_hermitian(n, rng);
    const auto ref = oracle::jacobi_hermitian(m);
    PowerIterationOptions opts;
    opts.seed = 7 + trial;
    const auto p = leading_eigenpair(HermitianMatrix<cplx>(m), opts);
    EXPECT_NEAR(p.value, ref.values.back(), 1e-7);
    EXPECT_GE(std::abs(p.vector.dot(ref.vectors.col(n - 1))), 1.0 - 1e-6);
    EXPECT_LE(p.residual, 1e-9);
  }
}

TEST(LeadingEigenpair, MatchesJacobiOracleReal) {
  Rng rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(8));
    Mat<double> g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    const Mat<double> m = (g + g.transpose()) / 2.0;
    const auto ref = oracle::jacobi_symmetric(m);
    const auto p = leading_eigenpair(HermitianMatrix<double>(m));
    EXPECT_NEAR(p.value, ref.values.back(), 1e-7);
    EXPECT_GE(std::abs(p.vector.cast<cplx>().dot(ref.vectors.col(n - 1))), 1.0 - 1e-6);
  }
}

TEST(LeadingEigenpair, DeterministicGivenSeed) {
  Rng rng(108);
  const Mat<cplx> m = random_hermitian(6, rng);
  PowerIterationOptions opts;
  opts.seed = 99;
  const auto a = leading_eigenpair(HermitianMatrix<cplx>(m), opts);
  const auto b = leading_eigenpair(HermitianMatrix<cplx>(m), opts);
  EXPECT_EQ(a.value, b.value);
  EXPECT_TRUE(a.vector == b.vector);
}

TEST(LeadingEigenpair, NonConvergenceThrows) {
  Rng rng(109);
  const Mat<cplx> m = random_hermitian(6, rng);
  PowerIterationOptions opts;
  opts.max_iterations = 1;
  EXPECT_THROW(leading_eigenpair(HermitianMatrix<cplx>(m), opts), ConvergenceError);
}

TEST(SpectralNorm, Examples) {
  EXPECT_EQ(spectral_norm(HermitianMatrix<double>(Mat<double>::Zero(3, 3))), 0.0);
  Mat<double> d = Eigen::Vector2d(-5.0, 2.0).asDiagonal();
  EXPECT_NEAR(spectral_norm(HermitianMatrix<double>(d)), 5.0, 1e-9);
}

TEST(SpectralNorm, MatchesJacobiOracle) {
  Rng rng(110);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat<cplx> m = random_hermitian(6, rng);
    const auto ref = oracle::jacobi_hermitian(m);
    const double expected = std::max(std::abs(ref.values.front()), std::abs(ref.values.back()));
    EXPECT_NEAR(spectral_norm(HermitianMatrix<cplx>(m)), expected, 1e-7);
  }
}

}  // namespace
}  // namespace prwf
