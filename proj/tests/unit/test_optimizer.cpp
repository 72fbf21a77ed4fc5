#include "oracles.hpp"

#include "sphsync/certificates.hpp"
#include "sphsync/error.hpp"
#include "sphsync/kuramoto.hpp"
#include "sphsync/models.hpp"
#include "sphsync/optimizer.hpp"
#include "sphsync/rng.hpp"
#include "sphsync/sphere_ops.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sphsync;

namespace {

RealMatrix random_symmetric(Index n, std::uint64_t seed) {
  Rng rng(seed);
  RealMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = rng.normal();
  }
  return m;
}

RealMatrix tangent(const SphereConfig& y, std::uint64_t seed) {
  RealMatrix v = tangent_project(y, random_init(y.n(), y.r(), seed).real());
  return v / v.norm();
}

}  // namespace

TEST(Gradient, ZeroAtGlobalOptimum) {
  RealVector z(6);
  z << 1, -1, 1, 1, -1, -1;
  const auto c = SymmetricCost::from_real(z * z.transpose());
  RealMatrix y(6, 2);
  for (Index i = 0; i < 6; ++i) y.row(i) << 0.6 * z[i], 0.8 * z[i];
  EXPECT_LT(riemannian_gradient(c, SphereConfig::from_rows(y)).norm(), 1e-13);
}

TEST(Gradient, IsTangent) {
  const auto c = SymmetricCost::from_real(random_symmetric(15, 1));
  const SphereConfig y = random_init(15, 3, 2);
  const RealMatrix g = riemannian_gradient(c, y);
  for (Index i = 0; i < 15; ++i) EXPECT_NEAR(g.row(i).dot(y.real().row(i)), 0.0, 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = SymmetricCost::from_real(random_symmetric(12, 100 + seed));
    const SphereConfig y = random_init(12, 3, 200 + seed);
    const RealMatrix v = tangent(y, 300 + seed);
    const double t = 1e-6;
    const double fd = (objective(c, retract(y, RealMatrix(t * v))) - objective(c, retract(y, RealMatrix(-t * v)))) / (2 * t);
    const double exact = riemannian_gradient(c, y).cwiseProduct(v).sum();
    EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Gradient, ComplexMatchesFiniteDifferences) {
  const Index n = 10;
  Rng rng(3);
  ComplexMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (Index j = i + 1; j < n; ++j) {
      h(i, j) = Complex(rng.normal(), rng.normal());
      h(j, i) = std::conj(h(i, j));
    }
  }
  const auto c = SymmetricCost::from_complex(h);
  const SphereConfig y = random_init(n, 2, 4, true);
  ComplexMatrix v = tangent_project(y, random_init(n, 2, 5, true).complex());
  v /= v.norm();
  const double t = 1e-6;
  const double fd = (objective(c, retract(y, ComplexMatrix(t * v))) -
                     objective(c, retract(y, ComplexMatrix(-t * v)))) / (2 * t);
  const double exact = (riemannian_gradient_complex(c, y).conjugate().cwiseProduct(v)).sum().real();
  EXPECT_NEAR(fd, exact, 1e-5 * std::max(1.0, std::abs(exact)));
}

TEST(HessianForm, ZeroDirection) {
  const auto c = SymmetricCost::from_real(random_symmetric(8, 1));
  EXPECT_EQ(hessian_quadratic_form(c, random_init(8, 2, 1), RealMatrix(RealMatrix::Zero(8, 2))), 0.0);
}

TEST(HessianForm, NonNegativeAtCompleteGraphOptimum) {
  const Index n = 12;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  RealMatrix y(n, 2);
  for (Index i = 0; i < n; ++i) y.row(i) << 1.0, 0.0;
  const SphereConfig opt = SphereConfig::from_rows(y);
  for (std::uint64_t s = 0; s < 10; ++s) {
    EXPECT_GE(hessian_quadratic_form(c, opt, tangent(opt, s)), -1e-12);
  }
}

TEST(HessianForm, SecondDerivativeSignConvention) {
  // At a critical point, d^2/dt^2 f(retract(Y, tV)) = -2 <S(Y), V V^T>.
  const Index n = 30;
  const Index k = 8;  // density 0.53: twisted state is a critical point
  const auto c = SymmetricCost::from_real(oracle::circulant_adjacency(n, k));
  const SphereConfig y = twisted_state(n, 1).to_sphere();
  ASSERT_LT(riemannian_gradient(c, y).norm(), 1e-10);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const RealMatrix v = tangent(y, 10 + s);
    const double t = 1e-4;
    const double f0 = objective(c, y);
    const double second = (objective(c, retract(y, RealMatrix(t * v))) - 2 * f0 + objective(c, retract(y, RealMatrix(-t * v)))) / (t * t);
    const double predicted = -2.0 * hessian_quadratic_form(c, y, v);
    EXPECT_NEAR(second, predicted, 1e-4 * std::max(1.0, std::abs(predicted)));
  }
}

TEST(CurvatureProbe, CertifiedOptimum) {
  const Index n = 20;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  RealMatrix y = RealMatrix::Zero(n, 3);
  y.col(0).setOnes();
  const CurvatureProbe pr = min_curvature_direction(c, SphereConfig::from_rows(y), 200, 1);
  EXPECT_GE(pr.curvature, -1e-8 * n);
}

TEST(CurvatureProbe, TwistedStates) {
  const Index n = 40;
  {
    const auto c = SymmetricCost::from_real(oracle::circulant_adjacency(n, 10));  // density 0.5
    EXPECT_GT(min_curvature_direction(c, twisted_state(n, 1).to_sphere(), 200, 1).curvature, 0.0);
  }
  {
    const auto c = SymmetricCost::from_real(oracle::circulant_adjacency(n, 16));  // density 0.8
    EXPECT_LT(min_curvature_direction(c, twisted_state(n, 1).to_sphere(), 200, 1).curvature, 0.0);
  }
}

TEST(CurvatureProbe, PowerIterationAgreesWithDense) {
  const auto c = SymmetricCost::from_real(random_symmetric(30, 9));
  const SphereConfig y = random_init(30, 3, 2);
  const CurvatureProbe dense = min_curvature_direction(c, y, 2000, 1, 1000);
  const CurvatureProbe power = min_curvature_direction(c, y, 2000, 1, 0);
  EXPECT_TRUE(dense.dense);
  EXPECT_FALSE(power.dense);
  EXPECT_NEAR(power.curvature, dense.curvature, 1e-3 * std::abs(dense.curvature) + 1e-6);
  EXPECT_NEAR(hessian_quadratic_form(c, y, dense.v), dense.curvature, 1e-9);
}

TEST(Solve, StartAtOptimumTakesNoSteps) {
  const Index n = 10;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  RealMatrix y = RealMatrix::Zero(n, 2);
  y.col(0).setOnes();
  const SolveReport rep = solve_from(c, SphereConfig::from_rows(y), SolveOptions{}, SignVector::ones(n));
  EXPECT_EQ(rep.iterations, 0);
  EXPECT_TRUE(rep.second_order_critical);
  EXPECT_TRUE(rep.recovered.value());
}

TEST(Solve, CompleteGraphAllSeedsRecover) {
  const Index n = 50;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SolveOptions opts;
    opts.seed = seed;
    const SolveReport rep = solve(c, 2, opts, SignVector::ones(n));
    EXPECT_TRUE(rep.recovered.value()) << "seed " << seed;
    EXPECT_TRUE(recovery_check(rep.final_y, SignVector::ones(n), 1e-6));
  }
}

TEST(Solve, TwistedStateIsAStableSpuriousPoint) {
  const Index n = 40;
  const auto c = SymmetricCost::from_real(oracle::circulant_adjacency(n, 10));
  const SolveReport rep = solve_from(c, twisted_state(n, 1).to_sphere(), SolveOptions{}, SignVector::ones(n));
  EXPECT_TRUE(rep.second_order_critical);
  EXPECT_FALSE(rep.recovered.value());
  EXPECT_LE(rep.iterations, 1);
}

TEST(Solve, ZeroCostIsCriticalEverywhere) {
  const auto c = SymmetricCost::from_real(RealMatrix::Zero(8, 8));
  SolveOptions opts;
  opts.seed = 4;
  const SolveReport rep = solve(c, 3, opts);
  EXPECT_EQ(rep.objective, 0.0);
  EXPECT_TRUE(rep.second_order_critical);
}

TEST(Solve, NoiselessCensoredModelRecovers) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelSpec spec;
    spec.family = Family::kCensoredBlock;
    spec.n = 300;
    spec.p = 1.0;
    spec.delta = 1.0;
    spec.ground_truth = GroundTruth::kRandom;
    spec.seed = seed;
    const Instance inst = generate(spec);
    SolveOptions opts;
    opts.seed = seed;
    EXPECT_TRUE(solve(inst.cost, 2, opts, inst.z).recovered.value());
  }
}

TEST(Solve, CertifiedInstancesRecoverAndTraceIsMonotone) {
  int certified = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ModelSpec spec;
    spec.family = Family::kGaussianZ2;
    spec.n = 80;
    spec.sigma = 0.4 * gaussian_sigma_star(80);
    spec.ground_truth = GroundTruth::kRandom;
    spec.seed = seed;
    const Instance inst = generate(spec);
    const bool benign =
        benign_landscape_check(inst.cost, inst.z, 2).verdict == Verdict::kBenignForR ||
        benign_landscape_check(inst.cost, inst.z, 2, Preconditioner::degree()).verdict == Verdict::kBenignForR;
    SolveOptions opts;
    opts.seed = seed;
    opts.record_trace = true;
    const SolveReport rep = solve(inst.cost, 2, opts, inst.z);
    for (std::size_t i = 1; i < rep.objective_trace.size(); ++i) {
      EXPECT_GE(rep.objective_trace[i], rep.objective_trace[i - 1]);
    }
    for (Index i = 0; i < rep.final_y.n(); ++i) {
      EXPECT_NEAR(rep.final_y.real().row(i).norm(), 1.0, 1e-12);
    }
    if (benign) {
      ++certified;
      EXPECT_TRUE(rep.recovered.value());
      EXPECT_TRUE(rep.second_order_critical);
    }
  }
  EXPECT_GT(certified, 0);
}

TEST(Solve, EscapesSaddle) {
  // The antipodal configuration on K_n is a first-order critical saddle.
  const Index n = 10;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  RealMatrix y = RealMatrix::Zero(n, 2);
  for (Index i = 0; i < n; ++i) y(i, 0) = i % 2 == 0 ? 1.0 : -1.0;
  const SolveReport rep = solve_from(c, SphereConfig::from_rows(y), SolveOptions{}, SignVector::ones(n));
  EXPECT_GE(rep.escapes_used, 1);
  EXPECT_TRUE(rep.recovered.value());
}

TEST(Solve, RankOneOnlyChecksCriticality) {
  const Index n = 6;
  const auto c = SymmetricCost::from_real(oracle::complete_graph(n));
  const SolveReport rep = solve(c, 1, SolveOptions{}, SignVector::ones(n));
  EXPECT_EQ(rep.final_y.r(), 1);
}

TEST(Solve, ComplexCompleteGraphRecovers) {
  const Index n = 20;
  const auto c = SymmetricCost::complexified(SymmetricCost::from_real(oracle::complete_graph(n)));
  SolveOptions opts;
  opts.seed = 3;
  const SolveReport rep = solve(c, 2, opts, SignVector::ones(n));
  EXPECT_TRUE(rep.second_order_critical);
  EXPECT_TRUE(rep.recovered.value());
}

TEST(SolveOptions, Validation) {
  SolveOptions opts;
  opts.grad_tol = 0.0;
  EXPECT_THROW(opts.validate(), Error);
  opts = SolveOptions{};
  opts.step_rule.shrink = 1.0;
  EXPECT_THROW(opts.validate(), Error);
}
