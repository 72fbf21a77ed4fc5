#pragma once

#include "sphsync/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sphsync {

enum class StepKind { kFixed, kBacktracking };

struct StepRule {
  StepKind kind = StepKind::kBacktracking;
  /// Initial (backtracking) or constant (fixed) step; 0 means 1 / (2 |C|_op).
  double step = 0.0;
  double shrink = 0.5;
  double sufficient_increase = 1e-4;

  static StepRule fixed(double step) { return {StepKind::kFixed, step, 0.5, 1e-4}; }
  static StepRule backtracking(double shrink = 0.5, double sufficient_increase = 1e-4) {
    return {StepKind::kBacktracking, 0.0, shrink, sufficient_increase};
  }
};

struct SolveOptions {
  int max_iters = 5000;
  /// Stop when |grad|_F <= grad_tol * |C|_op.
  double grad_tol = 1e-8;
  /// Second-order criticality accepts curvature >= -curvature_tol * |C|_op.
  double curvature_tol = 1e-7;
  StepRule step_rule;
  int hessian_probe_iters = 200;
  /// Tangent dimension up to which the dense tangent Hessian is used instead
  /// of power iteration.
  Index dense_hessian_limit = 600;
  int escape_attempts = 5;
  double escape_radius = 1e-3;
  int escape_steps = 100;
  double recovery_tol = 1e-6;
  std::uint64_t seed = 0;
  /// Keep the objective after every accepted step in SolveReport::objective_trace.
  bool record_trace = false;

  void validate() const;
};

struct SolveReport {
  explicit SolveReport(SphereConfig y) : final_y(std::move(y)) {}

  SphereConfig final_y;
  double objective = 0.0;
  double grad_norm = 0.0;
  double min_hessian_curvature = 0.0;
  double rho = 0.0;
  bool second_order_critical = false;
  bool converged = false;  // first-order stopping rule met
  std::optional<bool> recovered;
  int iterations = 0;
  int escapes_used = 0;
  double c_norm = 0.0;
  std::string status;
  std::vector<double> objective_trace;
};

/// Rows i.i.d. uniform on the unit sphere of R^r (complex: C^r).
SphereConfig random_init(Index n, Index r, std::uint64_t seed, bool complex = false);

/// Ascent direction 2 (C Y - ddiag(C Y Y^*) Y) = -2 S(Y) Y, tangent at Y.
RealMatrix riemannian_gradient(const SymmetricCost& c, const SphereConfig& y);
ComplexMatrix riemannian_gradient_complex(const SymmetricCost& c, const SphereConfig& y);

/// <S(Y), V V^*> after projecting V onto T_Y. The second derivative of the
/// objective along retract(Y, tV) at a critical point is -2 times this.
double hessian_quadratic_form(const SymmetricCost& c, const SphereConfig& y, const RealMatrix& v);
double hessian_quadratic_form(const SymmetricCost& c, const SphereConfig& y,
                              const ComplexMatrix& v);

struct CurvatureProbe {
  double curvature = 0.0;  // min <S, V V^*> / |V|_F^2 found
  RealMatrix v;            // unit tangent direction (real case)
  ComplexMatrix v_complex; // complex case
  bool dense = false;      // exact dense tangent Hessian was used
};

CurvatureProbe min_curvature_direction(const SymmetricCost& c, const SphereConfig& y, int iters,
                                       std::uint64_t seed,
                                       Index dense_limit = SolveOptions{}.dense_hessian_limit);

/// Riemannian gradient ascent from y0.
SolveReport ascend(const SymmetricCost& c, const SphereConfig& y0, const SolveOptions& opts);

/// ascend, probe curvature, escape along negative directions, repeat.
SolveReport solve(const SymmetricCost& c, Index r, const SolveOptions& opts,
                  const std::optional<SignVector>& z = std::nullopt);
/// Same, from a given starting configuration.
SolveReport solve_from(const SymmetricCost& c, const SphereConfig& y0, const SolveOptions& opts,
                       const std::optional<SignVector>& z = std::nullopt);

}  // namespace sphsync
