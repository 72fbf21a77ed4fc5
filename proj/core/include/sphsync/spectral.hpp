#pragma once

#include "sphsync/types.hpp"

namespace sphsync {

/// All eigenvalues of a symmetric / Hermitian Laplacian, ascending.
/// Throws ErrorCode::kEigensolverFailure if the QR iteration does not converge.
RealVector spectrum(const Laplacian& l);

/// Same, for raw dense matrices.
RealVector symmetric_eigenvalues(const RealMatrix& m);
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

struct EigenPairs {
  RealVector values;   // ascending
  RealMatrix vectors;  // columns
};
EigenPairs symmetric_eigenpairs(const RealMatrix& m);

/// Spectral norm of a symmetric / Hermitian matrix: max |lambda|.
double operator_norm(const SymmetricCost& c);
double symmetric_operator_norm(const RealMatrix& m);
double hermitian_operator_norm(const ComplexMatrix& m);

}  // namespace sphsync
