#pragma once

#include "sphsync/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace sphsync {

enum class Integrator { kRk4, kEuler };
enum class EquilibriumClass { kSynchronized, kStableNonsync, kSaddleOrUnstable, kNotConverged };

std::string_view to_string(Integrator integrator);
std::string_view to_string(EquilibriumClass cls);

struct SimOptions {
  /// 0 selects 0.05 / |A|_op.
  double time_step = 0.0;
  /// 0 selects 2000 / |A|_op.
  double max_time = 0.0;
  Integrator integrator = Integrator::kRk4;
  double sync_tol = 1e-6;
  /// 0 selects 1e-9 * |A|_op.
  double stall_tol = 0.0;
  std::uint64_t seed = 0;
};

struct EquilibriumReport {
  explicit EquilibriumReport(PhaseVector angles) : final_angles(std::move(angles)) {}

  PhaseVector final_angles;
  double velocity_norm = 0.0;
  bool synchronized = false;
  /// lambda_2 of the linearization Laplacian off the global-shift direction.
  double hessian_min_eig = 0.0;
  EquilibriumClass classification = EquilibriumClass::kNotConverged;
  double time = 0.0;
  long steps = 0;
  double potential = 0.0;  // <A, Y Y^T> = sum_ij A_ij cos(theta_i - theta_j)
};

/// Right-hand side K sum_j A_ij sin(theta_j - theta_i).
RealVector phase_velocity(const SymmetricCost& a, const RealVector& theta, double coupling = 1.0);

/// Sum_ij A_ij cos(theta_i - theta_j).
double phase_potential(const SymmetricCost& a, const RealVector& theta);

/// min_ij cos(theta_i - theta_j) >= 1 - sync_tol.
bool is_synchronized(const RealVector& theta, double sync_tol);

/// Integrates the dynamics until the velocity norm drops to stall_tol or
/// max_time is reached, then classifies the end state. When `trajectory` is
/// set, writes CSV rows "t,theta_1,...,theta_n" every `stride` steps.
EquilibriumReport simulate(const SymmetricCost& a, const PhaseVector& theta0,
                           const SimOptions& opts = {}, std::ostream* trajectory = nullptr,
                           long stride = 1);

/// theta_i = 2 pi q i / n, i = 0..n-1.
PhaseVector twisted_state(Index n, long q);

/// Uniform random phases on [0, 2 pi).
PhaseVector random_phases(Index n, std::uint64_t seed);

/// Linearization Laplacian of A_ij cos(theta_i - theta_j).
RealMatrix linearization_laplacian(const SymmetricCost& a, const RealVector& theta);

/// Smallest eigenvalue of a Laplacian-type matrix off the global-shift mode.
double shift_free_lambda2(const RealMatrix& l);

/// not_converged if the velocity norm exceeds tol (and not synchronized);
/// otherwise synchronized / stable_nonsync (lambda_2 above the zero
/// threshold) / saddle_or_unstable.
EquilibriumReport classify_equilibrium(const SymmetricCost& a, const PhaseVector& theta, double tol,
                                       double sync_tol = 1e-6);

}  // namespace sphsync
