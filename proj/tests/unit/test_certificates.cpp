#include "oracles.hpp"

#include "sphsync/certificates.hpp"
#include "sphsync/circulant.hpp"
#include "sphsync/error.hpp"
#include "sphsync/models.hpp"
#include "sphsync/rng.hpp"
#include "sphsync/spectral.hpp"
#include "sphsync/sphere_ops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sphsync;

namespace {

SymmetricCost complete(Index n) { return SymmetricCost::from_real(oracle::complete_graph(n)); }

RealMatrix gaussian_noise(Index n, std::uint64_t seed) {
  Rng rng(seed);
  RealMatrix w = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) w(i, j) = w(j, i) = rng.normal();
  }
  return w;
}

RealVector random_signs(Index n, std::uint64_t seed) {
  Rng rng(seed);
  RealVector z(n);
  for (Index i = 0; i < n; ++i) z[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  return z;
}

}  // namespace

TEST(CertifySdp, CompleteGraph) {
  const CertificateReport rep = certify_sdp_optimality(complete(12), SignVector::ones(12));
  EXPECT_TRUE(rep.dual_feasible);
  EXPECT_NEAR(rep.lambda_2, 12.0, 1e-9 * 12);
  EXPECT_EQ(rep.verdict, Verdict::kPsdCertifiedOnly);
}

TEST(CertifySdp, SmallPerturbationOfRankOne) {
  const Index n = 50;
  const RealVector z = random_signs(n, 3);
  const RealMatrix c = z * z.transpose() + 0.01 * gaussian_noise(n, 4);
  const CertificateReport rep =
      certify_sdp_optimality(SymmetricCost::from_real(c), SignVector::from_real(z));
  EXPECT_TRUE(rep.dual_feasible);
  EXPECT_GT(rep.lambda_2, 0.0);
}

TEST(CertifySdp, NegatedCompleteGraphIsInfeasible) {
  const auto c = SymmetricCost::from_real(-oracle::complete_graph(8));
  const CertificateReport rep = certify_sdp_optimality(c, SignVector::ones(8));
  EXPECT_FALSE(rep.dual_feasible);
  EXPECT_LT(rep.lambda_1, 0.0);
  EXPECT_EQ(rep.verdict, Verdict::kInconclusive);
}

TEST(BenignCheck, CompleteGraphAtRankTwo) {
  const CertificateReport rep = benign_landscape_check(complete(30), SignVector::ones(30), 2);
  EXPECT_EQ(rep.verdict, Verdict::kBenignForR);
  EXPECT_NEAR(rep.condition_number, 1.0, 1e-12);
}

TEST(BenignCheck, SubcriticalCirculantIsNotBenign) {
  // 2k/n = 0.6
  const Index n = 60;
  const Index k = 18;
  const CertificateReport rep =
      benign_landscape_check(SymmetricCost::from_real(oracle::circulant_adjacency(n, k)),
                             SignVector::ones(n), 2);
  EXPECT_GT(rep.condition_number, 2.0);
  EXPECT_NE(rep.verdict, Verdict::kBenignForR);
  // Ratio equals the DFT value max H_L / H_L[1].
  const auto dft = oracle::circulant_laplacian_dft(n, k);
  EXPECT_NEAR(rep.condition_number, dft.back() / dft[1], 1e-9);
}

TEST(BenignCheck, VerdictFlipsAtCeilingOfRatio) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Index n = 40;
    const RealVector z = random_signs(n, seed);
    const RealMatrix c = z * z.transpose() + 0.15 * gaussian_noise(n, 50 + seed);
    const auto cost = SymmetricCost::from_real(c);
    const auto zz = SignVector::from_real(z);
    const double ratio = benign_landscape_check(cost, zz, 1).condition_number;
    ASSERT_TRUE(std::isfinite(ratio));
    const int flip = static_cast<int>(std::floor(ratio)) + 1;  // smallest integer r > ratio
    for (int r = std::max(1, flip - 2); r <= flip + 2; ++r) {
      const bool benign = benign_landscape_check(cost, zz, r).verdict == Verdict::kBenignForR;
      EXPECT_EQ(benign, r >= flip) << "ratio " << ratio << " r " << r;
    }
  }
}

TEST(BenignCheck, DegreePreconditionerMatchesNormalizedLaplacian) {
  RealMatrix a = oracle::circulant_adjacency(20, 2);
  for (Index j = 2; j < 18; ++j) a(0, j) = a(j, 0) = 1.0;  // hub
  const auto c = SymmetricCost::from_real(a);
  const CertificateReport rep = benign_landscape_check(c, SignVector::ones(20), 2, Preconditioner::degree());
  const RealVector deg = a.rowwise().sum();
  RealMatrix norm_l = RealMatrix::Identity(20, 20);
  for (Index i = 0; i < 20; ++i) {
    for (Index j = 0; j < 20; ++j) norm_l(i, j) -= a(i, j) / std::sqrt(deg[i] * deg[j]);
  }
  const auto ev = oracle::jacobi_eigenvalues(norm_l);
  EXPECT_NEAR(rep.condition_number, ev.back() / ev[1], 1e-9);
  EXPECT_NE(rep.condition_number,
            benign_landscape_check(c, SignVector::ones(20), 2).condition_number);
}

TEST(BenignCheck, CustomNonPositivePreconditionerThrows) {
  RealVector d = RealVector::Ones(5);
  d[1] = -1.0;
  try {
    benign_landscape_check(complete(5), SignVector::ones(5), 2, Preconditioner::from_vector(d));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPreconditionerNotPositive);
  }
}

TEST(ComplexCheck, RealEmbeddingMatchesRankDoubling) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Index n = 30;
    const RealVector z = random_signs(n, seed + 7);
    const auto cost = SymmetricCost::from_real(z * z.transpose() + 0.4 * gaussian_noise(n, seed));
    const auto zz = SignVector::from_real(z);
    for (int r = 1; r <= 3; ++r) {
      const CertificateReport real2r = benign_landscape_check(cost, zz, 2 * r);
      const CertificateReport cplx = benign_landscape_check_complex(cost, zz, r);
      EXPECT_EQ(real2r.verdict == Verdict::kBenignForR, cplx.verdict == Verdict::kBenignForR);
      EXPECT_NEAR(cplx.condition_number / real2r.condition_number, 1.0, 1e-10);
    }
  }
}

TEST(ComplexCheck, RankOnePhasesAreBenignAtRankOne) {
  const Index n = 16;
  ComplexVector z(n);
  for (Index j = 0; j < n; ++j) z[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
  const auto cost = SymmetricCost::from_complex(z * z.adjoint());
  const CertificateReport rep = benign_landscape_check_complex(cost, SignVector::from_complex(z), 1);
  EXPECT_NEAR(rep.condition_number, 1.0, 1e-10);
  EXPECT_EQ(rep.verdict, Verdict::kBenignForR);
}

TEST(ComplexCheck, UnitaryConjugationOfCompleteGraph) {
  // C = diag(z) (11^T - I) diag(z)^*: same spectrum as K_n.
  const Index n = 12;
  ComplexVector z(n);
  for (Index j = 0; j < n; ++j) z[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
  const ComplexMatrix c = z.asDiagonal() * oracle::complete_graph(n).cast<Complex>() * z.conjugate().asDiagonal();
  const CertificateReport rep =
      benign_landscape_check_complex(SymmetricCost::from_complex(c), SignVector::from_complex(z), 1);
  EXPECT_NEAR(rep.condition_number, 1.0, 1e-10);
}

TEST(RankOneBound, ExactReference) {
  const Index n = 20;
  const RealVector z = random_signs(n, 1);
  const double d_bar = 7.0;
  const auto c = SymmetricCost::from_real(d_bar / n * z * z.transpose());
  const RankOneReference ref = rank_one_bound(c, SignVector::from_real(z), RankOneModel::uniform(d_bar));
  EXPECT_NEAR(ref.delta_c, 0.0, 1e-12);
  EXPECT_NEAR(ref.bound_on_condition_number, 1.0, 1e-12);
}

TEST(RankOneBound, CompleteGraphClosedForm) {
  const Index n = 100;
  const RankOneReference ref =
      rank_one_bound(complete(n), SignVector::ones(n), RankOneModel::uniform(static_cast<double>(n)));
  // C - C_bar = -I, d_min = n - 1: delta = 2 n / (n-1)^2.
  EXPECT_NEAR(ref.delta_c, 2.0 * n / ((n - 1.0) * (n - 1.0)), 1e-12);
  EXPECT_NEAR(ref.delta_c, 0.0204, 1e-4);
}

TEST(RankOneBound, GeneralFormulaMatchesDirectComputation) {
  const Index n = 25;
  const RealVector z = random_signs(n, 2);
  Rng rng(5);
  RealVector a(n);
  for (Index i = 0; i < n; ++i) a[i] = 0.5 + rng.uniform();
  const RealMatrix cbar = z.asDiagonal() * (a * a.transpose()) * z.asDiagonal();
  const RealMatrix c = cbar + 0.05 * gaussian_noise(n, 8);
  const RankOneReference ref =
      rank_one_bound(SymmetricCost::from_real(c), SignVector::from_real(z), RankOneModel::from_vector(a));

  const RealVector dbar = a.sum() * a;
  RealVector d(n);
  for (Index i = 0; i < n; ++i) d[i] = z[i] * c.row(i).dot(z);
  double kappa = 1.0;
  for (Index i = 0; i < n; ++i) kappa = std::max(kappa, dbar[i] / d[i]);
  RealMatrix scaled = c - cbar;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) scaled(i, j) /= std::sqrt(dbar[i] * dbar[j]);
  }
  const auto ev = oracle::jacobi_eigenvalues(scaled);
  const double op = std::max(std::abs(ev.front()), std::abs(ev.back()));
  EXPECT_NEAR(ref.kappa_d, kappa, 1e-12);
  EXPECT_NEAR(ref.delta_c, 2.0 * kappa * kappa * op, 1e-10);
  EXPECT_LE(ref.measured_deviation, ref.delta_c);
}

TEST(RankOneBound, NonPositiveDegreeFlagged) {
  RealMatrix c = oracle::complete_graph(6);
  c.row(0) *= -1.0;
  c.col(0) *= -1.0;
  c(0, 0) = 0.0;
  const RankOneReference ref =
      rank_one_bound(SymmetricCost::from_real(c), SignVector::ones(6), RankOneModel::uniform(5.0));
  EXPECT_FALSE(ref.applicable);
  EXPECT_TRUE(std::isinf(ref.delta_c));
}

TEST(KuramotoSyncCheck, CompleteGraph) {
  const SyncCheckReport rep = kuramoto_sync_check(complete(10));
  EXPECT_TRUE(rep.synchronizing);
  EXPECT_NEAR(rep.ordinary.condition_number, 1.0, 1e-12);
}

TEST(KuramotoSyncCheck, SupercriticalCirculant) {
  const Index n = 200;
  const Index k = 70;  // density 0.7
  const SyncCheckReport rep = kuramoto_sync_check(SymmetricCost::from_real(oracle::circulant_adjacency(n, k)));
  EXPECT_TRUE(rep.synchronizing);
  const auto dft = oracle::circulant_laplacian_dft(n, k);
  EXPECT_NEAR(rep.ordinary.condition_number, dft.back() / dft[1], 1e-9);
  EXPECT_LT(rep.ordinary.condition_number, 2.0);
}

TEST(KuramotoSyncCheck, DenseGraphFiedlerBound) {
  // Remove a perfect matching from K_n: min degree n - 2 = mu (n - 1).
  const Index n = 40;
  RealMatrix a = oracle::complete_graph(n);
  for (Index i = 0; i < n; i += 2) a(i, i + 1) = a(i + 1, i) = 0.0;
  const double mu = (n - 2.0) / (n - 1.0);
  const SyncCheckReport rep = kuramoto_sync_check(SymmetricCost::from_real(a));
  EXPECT_GE(rep.ordinary.lambda_2, 2.0 * mu * (n - 1.0) - n + 2.0 - 1e-9);
  EXPECT_TRUE(rep.synchronizing);
}

TEST(ExpanderAlpha, Trivial) {
  const Index n = 10;
  EXPECT_NEAR(expander_alpha(SymmetricCost::from_real(RealMatrix::Constant(n, n, 0.3)), 3.0), 0.0, 1e-14);
  EXPECT_NEAR(expander_alpha(complete(n), static_cast<double>(n)), 1.0 / n, 1e-14);
}
