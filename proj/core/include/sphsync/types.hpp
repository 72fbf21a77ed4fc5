#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

namespace sphsync {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Asymmetry above which construction logs a warning before symmetrizing.
inline constexpr double kAsymmetryWarnThreshold = 1e-8;
/// Row-norm tolerance for SphereConfig and modulus tolerance for SignVector.
inline constexpr double kUnitTolerance = 1e-12;

/// Real symmetric or complex Hermitian n x n cost / coupling matrix.
///
/// Construction symmetrizes its input as (M + M^*)/2, so the stored matrix
/// is exactly symmetric. The diagonal is kept as given.
class SymmetricCost {
 public:
  static SymmetricCost from_real(RealMatrix m);
  static SymmetricCost from_complex(ComplexMatrix m);
  /// Embeds a real matrix in the complex shell (zero imaginary part).
  static SymmetricCost complexified(const SymmetricCost& real_cost);

  Index n() const noexcept { return n_; }
  bool is_complex() const noexcept { return is_complex_; }

  /// Requires !is_complex().
  const RealMatrix& real() const;
  /// Requires is_complex().
  const ComplexMatrix& complex() const;
  /// The matrix as a complex array regardless of kind.
  ComplexMatrix as_complex() const;

  /// max |M_ij - conj(M_ji)| of the input before symmetrization.
  double input_asymmetry() const noexcept { return input_asymmetry_; }

 private:
  SymmetricCost() = default;

  Index n_ = 0;
  bool is_complex_ = false;
  RealMatrix real_;
  ComplexMatrix complex_;
  double input_asymmetry_ = 0.0;
};

/// Ground-truth vector: entries in {+1, -1}, or unit-modulus complex entries.
class SignVector {
 public:
  static SignVector ones(Index n);
  static SignVector from_real(RealVector signs);
  static SignVector from_complex(ComplexVector phases);

  Index n() const noexcept { return n_; }
  bool is_complex() const noexcept { return is_complex_; }
  const RealVector& real() const;
  const ComplexVector& complex() const;
  ComplexVector as_complex() const;

 private:
  SignVector() = default;

  Index n_ = 0;
  bool is_complex_ = false;
  RealVector real_;
  ComplexVector complex_;
};

/// Point on the product of n unit spheres in R^r (or C^r): the rows of Y.
class SphereConfig {
 public:
  /// Validates that every row has unit norm within kUnitTolerance.
  static SphereConfig from_rows(RealMatrix rows);
  static SphereConfig from_rows(ComplexMatrix rows);
  /// Normalizes every row; throws if a row is zero.
  static SphereConfig normalized(RealMatrix rows);
  static SphereConfig normalized(ComplexMatrix rows);
  /// Y = z v^T for a unit vector v.
  static SphereConfig rank_one(const SignVector& z, const RealVector& v);

  Index n() const noexcept { return n_; }
  Index r() const noexcept { return r_; }
  bool is_complex() const noexcept { return is_complex_; }
  const RealMatrix& real() const;
  const ComplexMatrix& complex() const;

 private:
  SphereConfig() = default;

  Index n_ = 0;
  Index r_ = 0;
  bool is_complex_ = false;
  RealMatrix real_;
  ComplexMatrix complex_;
};

/// Oscillator phases (interpreted mod 2 pi) with the global coupling K.
class PhaseVector {
 public:
  explicit PhaseVector(RealVector angles, double coupling_constant = 1.0);

  Index n() const noexcept { return angles_.size(); }
  const RealVector& angles() const noexcept { return angles_; }
  double coupling_constant() const noexcept { return coupling_; }

  /// Rows (cos theta_i, sin theta_i).
  SphereConfig to_sphere() const;
  /// Inverse of to_sphere for r = 2 real configurations.
  static PhaseVector from_sphere(const SphereConfig& y, double coupling_constant = 1.0);

 private:
  RealVector angles_;
  double coupling_;
};

/// Symmetric / Hermitian Laplacian-type matrix, optionally carrying the
/// positive diagonal preconditioner it was normalized with.
class Laplacian {
 public:
  static Laplacian from_real(RealMatrix entries,
                             std::optional<RealVector> preconditioner = std::nullopt);
  static Laplacian from_complex(ComplexMatrix entries,
                                std::optional<RealVector> preconditioner = std::nullopt);

  Index n() const noexcept { return n_; }
  bool is_complex() const noexcept { return is_complex_; }
  const RealMatrix& real() const;
  const ComplexMatrix& complex() const;
  /// nullopt means the identity preconditioner.
  const std::optional<RealVector>& preconditioner() const noexcept { return preconditioner_; }

 private:
  Laplacian() = default;

  Index n_ = 0;
  bool is_complex_ = false;
  RealMatrix real_;
  ComplexMatrix complex_;
  std::optional<RealVector> preconditioner_;
};

}  // namespace sphsync
