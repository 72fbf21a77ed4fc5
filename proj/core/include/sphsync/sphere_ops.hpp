#pragma once

#include "sphsync/types.hpp"

namespace sphsync {

/// <C, Y Y^T> (real part of <C, Y Y^*> for complex data).
double objective(const SymmetricCost& c, const SphereConfig& y);

/// S(Y) = ddiag(C Y Y^T) - C, or Re(ddiag(C Y Y^*)) - C. The second-order
/// criticality matrix: first-order critical iff S(Y) Y = 0.
Laplacian certificate_matrix(const SymmetricCost& c, const SphereConfig& y);

/// Dual certificate L(z) = ddiag(C z z^T) - C (complex: Re(ddiag(C z z^*)) - C).
Laplacian laplacian(const SymmetricCost& c, const SignVector& z);

/// D^{-1/2} L D^{-1/2}. Throws ErrorCode::kPreconditionerNotPositive when
/// some D_i <= 0.
Laplacian precondition(const Laplacian& l, const RealVector& d);

/// Diagonal of ddiag(C z z^T) (real part for complex data): the "degree"
/// preconditioner.
RealVector degree_vector(const SymmetricCost& c, const SignVector& z);

/// Row-wise projection onto T_Y: V_i - Re<V_i, Y_i> Y_i.
RealMatrix tangent_project(const SphereConfig& y, const RealMatrix& v);
ComplexMatrix tangent_project(const SphereConfig& y, const ComplexMatrix& v);

/// Metric-projection retraction: rows (Y_i + V_i) / |Y_i + V_i|.
/// Throws ErrorCode::kRetractionSingularity if some Y_i + V_i vanishes.
SphereConfig retract(const SphereConfig& y, const RealMatrix& v);
SphereConfig retract(const SphereConfig& y, const ComplexMatrix& v);

struct Alignment {
  double rho = 0.0;
  /// Unit vector v with Y' = rho 1 v^T + W, Y' = diag(z)^* Y.
  RealVector v;
  ComplexVector v_complex;  // set instead of v for complex configurations
  bool degenerate = false;  // rho == 0; v is then e_1
  double trace_d = 0.0;
  /// |D^{1/2} W|_F^2; equals trace_d * (1 - rho^2) exactly in exact arithmetic.
  double weighted_residual = 0.0;
};

/// Decomposes diag(z)^* Y = rho 1 v^T + W with W^T D 1 = 0.
Alignment alignment(const SphereConfig& y, const SignVector& z, const RealVector& d);
Alignment alignment(const SphereConfig& y, const SignVector& z);

/// max_ij |(Y Y^*)_ij - z_i conj(z_j)| <= tol.
bool recovery_check(const SphereConfig& y, const SignVector& z, double tol);
double recovery_error(const SphereConfig& y, const SignVector& z);

}  // namespace sphsync
