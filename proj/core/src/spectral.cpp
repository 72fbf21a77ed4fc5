#include "sphsync/spectral.hpp"

#include "sphsync/error.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace sphsync {

namespace {

template <typename Solver>
void check_converged(const Solver& solver, Index n) {
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kEigensolverFailure,
         "tridiagonal QR did not converge within " + std::to_string(30 * n) +
             " iterations (n = " + std::to_string(n) + ")");
  }
}

}  // namespace

RealVector symmetric_eigenvalues(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m, Eigen::EigenvaluesOnly);
  check_converged(solver, m.rows());
  return solver.eigenvalues();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  check_converged(solver, m.rows());
  return solver.eigenvalues();
}

EigenPairs symmetric_eigenpairs(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m, Eigen::ComputeEigenvectors);
  check_converged(solver, m.rows());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector spectrum(const Laplacian& l) {
  return l.is_complex() ? hermitian_eigenvalues(l.complex()) : symmetric_eigenvalues(l.real());
}

double symmetric_operator_norm(const RealMatrix& m) {
  const RealVector ev = symmetric_eigenvalues(m);
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double hermitian_operator_norm(const ComplexMatrix& m) {
  const RealVector ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double operator_norm(const SymmetricCost& c) {
  return c.is_complex() ? hermitian_operator_norm(c.complex()) : symmetric_operator_norm(c.real());
}

}  // namespace sphsync
