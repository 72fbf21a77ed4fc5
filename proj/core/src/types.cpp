#include "sphsync/types.hpp"

#include "sphsync/error.hpp"

#include <cmath>
#include <iostream>
#include <string>

namespace sphsync {

namespace {

void require_square(Index rows, Index cols, const char* what) {
  require(rows == cols, ErrorCode::kDimensionMismatch,
          std::string(what) + " must be square, got " + std::to_string(rows) + "x" +
              std::to_string(cols));
  require(rows > 0, ErrorCode::kInvalidArgument, std::string(what) + " must be non-empty");
}

void warn_asymmetry(double asym) {
  if (asym > kAsymmetryWarnThreshold) {
    std::clog << "sphsync: warning: input matrix asymmetry " << asym
              << " exceeds " << kAsymmetryWarnThreshold << "; symmetrizing\n";
  }
}

}  // namespace

SymmetricCost SymmetricCost::from_real(RealMatrix m) {
  require_square(m.rows(), m.cols(), "cost matrix");
  require(m.allFinite(), ErrorCode::kNotFinite, "cost matrix has non-finite entries");
  SymmetricCost c;
  c.n_ = m.rows();
  c.input_asymmetry_ = (m - m.transpose()).cwiseAbs().maxCoeff();
  warn_asymmetry(c.input_asymmetry_);
  c.real_ = 0.5 * (m + m.transpose());
  return c;
}

SymmetricCost SymmetricCost::from_complex(ComplexMatrix m) {
  require_square(m.rows(), m.cols(), "cost matrix");
  require(m.allFinite(), ErrorCode::kNotFinite, "cost matrix has non-finite entries");
  SymmetricCost c;
  c.n_ = m.rows();
  c.is_complex_ = true;
  c.input_asymmetry_ = (m - m.adjoint()).cwiseAbs().maxCoeff();
  warn_asymmetry(c.input_asymmetry_);
  c.complex_ = 0.5 * (m + m.adjoint());
  return c;
}

SymmetricCost SymmetricCost::complexified(const SymmetricCost& real_cost) {
  if (real_cost.is_complex()) return real_cost;
  SymmetricCost c;
  c.n_ = real_cost.n_;
  c.is_complex_ = true;
  c.complex_ = real_cost.real_.cast<Complex>();
  return c;
}

const RealMatrix& SymmetricCost::real() const {
  require(!is_complex_, ErrorCode::kInvalidArgument, "real() on a complex cost matrix");
  return real_;
}

const ComplexMatrix& SymmetricCost::complex() const {
  require(is_complex_, ErrorCode::kInvalidArgument, "complex() on a real cost matrix");
  return complex_;
}

ComplexMatrix SymmetricCost::as_complex() const {
  return is_complex_ ? complex_ : ComplexMatrix(real_.cast<Complex>());
}

SignVector SignVector::ones(Index n) {
  return from_real(RealVector::Ones(n));
}

SignVector SignVector::from_real(RealVector signs) {
  require(signs.size() > 0, ErrorCode::kInvalidArgument, "empty sign vector");
  for (Index i = 0; i < signs.size(); ++i) {
    require(signs[i] == 1.0 || signs[i] == -1.0, ErrorCode::kInvalidArgument,
            "sign vector entry " + std::to_string(i) + " is not +1 or -1");
  }
  SignVector s;
  s.n_ = signs.size();
  s.real_ = std::move(signs);
  return s;
}

SignVector SignVector::from_complex(ComplexVector phases) {
  require(phases.size() > 0, ErrorCode::kInvalidArgument, "empty sign vector");
  for (Index i = 0; i < phases.size(); ++i) {
    require(std::abs(std::abs(phases[i]) - 1.0) <= kUnitTolerance, ErrorCode::kInvalidArgument,
            "sign vector entry " + std::to_string(i) + " does not have unit modulus");
  }
  SignVector s;
  s.n_ = phases.size();
  s.is_complex_ = true;
  s.complex_ = std::move(phases);
  return s;
}

const RealVector& SignVector::real() const {
  require(!is_complex_, ErrorCode::kInvalidArgument, "real() on a complex sign vector");
  return real_;
}

const ComplexVector& SignVector::complex() const {
  require(is_complex_, ErrorCode::kInvalidArgument, "complex() on a real sign vector");
  return complex_;
}

ComplexVector SignVector::as_complex() const {
  return is_complex_ ? complex_ : ComplexVector(real_.cast<Complex>());
}

namespace {

template <typename Matrix>
void check_unit_rows(const Matrix& rows) {
  require(rows.rows() > 0 && rows.cols() > 0, ErrorCode::kInvalidArgument,
          "sphere configuration must be non-empty");
  require(rows.allFinite(), ErrorCode::kNotFinite, "sphere configuration has non-finite entries");
  for (Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    require(std::abs(norm - 1.0) <= kUnitTolerance, ErrorCode::kInvalidArgument,
            "row " + std::to_string(i) + " has norm " + std::to_string(norm));
  }
}

template <typename Matrix>
void normalize_rows(Matrix& rows) {
  require(rows.allFinite(), ErrorCode::kNotFinite, "sphere configuration has non-finite entries");
  for (Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    require(norm > 0.0, ErrorCode::kRetractionSingularity,
            "row " + std::to_string(i) + " is zero and cannot be normalized");
    rows.row(i) /= norm;
  }
}

}  // namespace

SphereConfig SphereConfig::from_rows(RealMatrix rows) {
  check_unit_rows(rows);
  SphereConfig y;
  y.n_ = rows.rows();
  y.r_ = rows.cols();
  y.real_ = std::move(rows);
  return y;
}

SphereConfig SphereConfig::from_rows(ComplexMatrix rows) {
  check_unit_rows(rows);
  SphereConfig y;
  y.n_ = rows.rows();
  y.r_ = rows.cols();
  y.is_complex_ = true;
  y.complex_ = std::move(rows);
  return y;
}

SphereConfig SphereConfig::normalized(RealMatrix rows) {
  normalize_rows(rows);
  return from_rows(std::move(rows));
}

SphereConfig SphereConfig::normalized(ComplexMatrix rows) {
  normalize_rows(rows);
  return from_rows(std::move(rows));
}

SphereConfig SphereConfig::rank_one(const SignVector& z, const RealVector& v) {
  require(std::abs(v.norm() - 1.0) <= kUnitTolerance, ErrorCode::kInvalidArgument,
          "rank_one: v must have unit norm");
  if (z.is_complex()) {
    ComplexMatrix rows = z.complex() * v.cast<Complex>().transpose();
    return from_rows(std::move(rows));
  }
  RealMatrix rows = z.real() * v.transpose();
  return from_rows(std::move(rows));
}

const RealMatrix& SphereConfig::real() const {
  require(!is_complex_, ErrorCode::kInvalidArgument, "real() on a complex configuration");
  return real_;
}

const ComplexMatrix& SphereConfig::complex() const {
  require(is_complex_, ErrorCode::kInvalidArgument, "complex() on a real configuration");
  return complex_;
}

PhaseVector::PhaseVector(RealVector angles, double coupling_constant)
    : angles_(std::move(angles)), coupling_(coupling_constant) {
  require(angles_.size() > 0, ErrorCode::kInvalidArgument, "empty phase vector");
  require(angles_.allFinite(), ErrorCode::kNotFinite, "phase vector has non-finite angles");
  require(coupling_ > 0.0 && std::isfinite(coupling_), ErrorCode::kInvalidArgument,
          "coupling constant must be positive");
}

SphereConfig PhaseVector::to_sphere() const {
  RealMatrix rows(n(), 2);
  rows.col(0) = angles_.array().cos().matrix();
  rows.col(1) = angles_.array().sin().matrix();
  return SphereConfig::normalized(std::move(rows));
}

PhaseVector PhaseVector::from_sphere(const SphereConfig& y, double coupling_constant) {
  require(!y.is_complex() && y.r() == 2, ErrorCode::kInvalidArgument,
          "from_sphere needs a real configuration with r = 2");
  RealVector angles(y.n());
  for (Index i = 0; i < y.n(); ++i) angles[i] = std::atan2(y.real()(i, 1), y.real()(i, 0));
  return PhaseVector(std::move(angles), coupling_constant);
}

namespace {

void check_preconditioner(const std::optional<RealVector>& d, Index n) {
  if (!d) return;
  require(d->size() == n, ErrorCode::kDimensionMismatch, "preconditioner length");
  for (Index i = 0; i < n; ++i) {
    require((*d)[i] > 0.0 && std::isfinite((*d)[i]), ErrorCode::kPreconditionerNotPositive,
            "entry " + std::to_string(i) + " = " + std::to_string((*d)[i]));
  }
}

}  // namespace

Laplacian Laplacian::from_real(RealMatrix entries, std::optional<RealVector> preconditioner) {
  require_square(entries.rows(), entries.cols(), "Laplacian");
  require(entries.allFinite(), ErrorCode::kNotFinite, "Laplacian has non-finite entries");
  check_preconditioner(preconditioner, entries.rows());
  Laplacian l;
  l.n_ = entries.rows();
  l.real_ = 0.5 * (entries + entries.transpose());
  l.preconditioner_ = std::move(preconditioner);
  return l;
}

Laplacian Laplacian::from_complex(ComplexMatrix entries, std::optional<RealVector> preconditioner) {
  require_square(entries.rows(), entries.cols(), "Laplacian");
  require(entries.allFinite(), ErrorCode::kNotFinite, "Laplacian has non-finite entries");
  check_preconditioner(preconditioner, entries.rows());
  Laplacian l;
  l.n_ = entries.rows();
  l.is_complex_ = true;
  l.complex_ = 0.5 * (entries + entries.adjoint());
  l.preconditioner_ = std::move(preconditioner);
  return l;
}

const RealMatrix& Laplacian::real() const {
  require(!is_complex_, ErrorCode::kInvalidArgument, "real() on a complex Laplacian");
  return real_;
}

const ComplexMatrix& Laplacian::complex() const {
  require(is_complex_, ErrorCode::kInvalidArgument, "complex() on a real Laplacian");
  return complex_;
}

}  // namespace sphsync
