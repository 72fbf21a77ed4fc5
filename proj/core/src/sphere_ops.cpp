#include "sphsync/sphere_ops.hpp"

#include "sphsync/error.hpp"

#include <cmath>
#include <string>

namespace sphsync {

namespace {

void check_same_n(Index a, Index b, const char* what) {
  require(a == b, ErrorCode::kDimensionMismatch,
          std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

void check_kinds(const SymmetricCost& c, const SphereConfig& y) {
  check_same_n(c.n(), y.n(), "cost vs configuration size");
  require(c.is_complex() == y.is_complex(), ErrorCode::kInvalidArgument,
          "real/complex kinds of cost and configuration differ");
}

double re(double x) { return x; }
double re(const Complex& x) { return x.real(); }

// Row-wise Re<a_i, b_i> for real or complex arrays.
template <typename Matrix>
RealVector row_inner(const Matrix& a, const Matrix& b) {
  RealVector out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) out[i] = re(a.row(i).dot(b.row(i)));
  return out;
}

template <typename Matrix>
double frob_inner(const Matrix& a, const Matrix& b) {
  return re((a.conjugate().cwiseProduct(b)).sum());
}

template <typename Matrix>
Matrix project_impl(const Matrix& y, const Matrix& v) {
  require(y.rows() == v.rows() && y.cols() == v.cols(), ErrorCode::kDimensionMismatch,
          "tangent_project: shapes differ");
  const RealVector coeff = row_inner(y, v);
  Matrix out = v;
  for (Index i = 0; i < y.rows(); ++i) out.row(i) -= coeff[i] * y.row(i);
  return out;
}

template <typename Matrix>
SphereConfig retract_impl(const Matrix& y, const Matrix& v) {
  require(y.rows() == v.rows() && y.cols() == v.cols(), ErrorCode::kDimensionMismatch,
          "retract: shapes differ");
  Matrix stepped = y + v;
  for (Index i = 0; i < stepped.rows(); ++i) {
    const double norm = stepped.row(i).norm();
    require(norm > 0.0 && std::isfinite(norm), ErrorCode::kRetractionSingularity,
            "row " + std::to_string(i) + " vanishes after the step; shrink the step");
    stepped.row(i) /= norm;
  }
  return SphereConfig::from_rows(std::move(stepped));
}

}  // namespace

double objective(const SymmetricCost& c, const SphereConfig& y) {
  check_kinds(c, y);
  if (c.is_complex()) {
    const ComplexMatrix cy = c.complex() * y.complex();
    return frob_inner(y.complex(), cy);
  }
  const RealMatrix cy = c.real() * y.real();
  return frob_inner(y.real(), cy);
}

Laplacian certificate_matrix(const SymmetricCost& c, const SphereConfig& y) {
  check_kinds(c, y);
  if (c.is_complex()) {
    const ComplexMatrix cy = c.complex() * y.complex();
    const RealVector diag = row_inner(y.complex(), cy);
    ComplexMatrix s = -c.complex();
    s.diagonal() += diag.cast<Complex>();
    return Laplacian::from_complex(std::move(s));
  }
  const RealMatrix cy = c.real() * y.real();
  const RealVector diag = row_inner(y.real(), cy);
  RealMatrix s = -c.real();
  s.diagonal() += diag;
  return Laplacian::from_real(std::move(s));
}

RealVector degree_vector(const SymmetricCost& c, const SignVector& z) {
  check_same_n(c.n(), z.n(), "cost vs sign vector size");
  if (c.is_complex() || z.is_complex()) {
    const ComplexVector zc = z.as_complex();
    const ComplexVector cz = c.as_complex() * zc;
    RealVector d(c.n());
    for (Index i = 0; i < c.n(); ++i) d[i] = (cz[i] * std::conj(zc[i])).real();
    return d;
  }
  return (c.real() * z.real()).cwiseProduct(z.real());
}

Laplacian laplacian(const SymmetricCost& c, const SignVector& z) {
  const RealVector d = degree_vector(c, z);
  if (c.is_complex() || z.is_complex()) {
    ComplexMatrix l = -c.as_complex();
    l.diagonal() += d.cast<Complex>();
    return Laplacian::from_complex(std::move(l));
  }
  RealMatrix l = -c.real();
  l.diagonal() += d;
  return Laplacian::from_real(std::move(l));
}

Laplacian precondition(const Laplacian& l, const RealVector& d) {
  check_same_n(l.n(), d.size(), "Laplacian vs preconditioner size");
  for (Index i = 0; i < d.size(); ++i) {
    require(d[i] > 0.0 && std::isfinite(d[i]), ErrorCode::kPreconditionerNotPositive,
            "entry " + std::to_string(i) + " = " + std::to_string(d[i]));
  }
  const RealVector scale = d.cwiseSqrt().cwiseInverse();
  RealVector combined = d;
  if (l.preconditioner()) combined = combined.cwiseProduct(*l.preconditioner());
  if (l.is_complex()) {
    ComplexMatrix out = scale.cast<Complex>().asDiagonal() * l.complex() *
                        scale.cast<Complex>().asDiagonal();
    return Laplacian::from_complex(std::move(out), std::move(combined));
  }
  RealMatrix out = scale.asDiagonal() * l.real() * scale.asDiagonal();
  return Laplacian::from_real(std::move(out), std::move(combined));
}

RealMatrix tangent_project(const SphereConfig& y, const RealMatrix& v) {
  return project_impl(y.real(), v);
}

ComplexMatrix tangent_project(const SphereConfig& y, const ComplexMatrix& v) {
  return project_impl(y.complex(), v);
}

SphereConfig retract(const SphereConfig& y, const RealMatrix& v) {
  return retract_impl(y.real(), v);
}

SphereConfig retract(const SphereConfig& y, const ComplexMatrix& v) {
  return retract_impl(y.complex(), v);
}

namespace {

template <typename Matrix, typename Vector>
void align_impl(const Matrix& twisted, const RealVector& d, Alignment& out, Vector& v) {
  using Scalar = typename Matrix::Scalar;
  const Index r = twisted.cols();
  const double trace_d = d.sum();
  const Vector weighted = twisted.transpose() * d.cast<Scalar>();  // Y'^T D 1
  const double norm = weighted.norm();
  out.trace_d = trace_d;
  out.rho = norm / trace_d;
  if (norm == 0.0) {
    out.degenerate = true;
    v = Vector::Zero(r);
    v[0] = Scalar(1.0);
  } else {
    v = weighted / norm;
  }
  Matrix w = twisted;
  w -= out.rho * Matrix::Ones(twisted.rows(), 1) * v.transpose();
  out.weighted_residual = (d.cwiseSqrt().cast<Scalar>().asDiagonal() * w).squaredNorm();
}

}  // namespace

Alignment alignment(const SphereConfig& y, const SignVector& z, const RealVector& d) {
  check_same_n(y.n(), z.n(), "configuration vs sign vector size");
  check_same_n(y.n(), d.size(), "configuration vs preconditioner size");
  for (Index i = 0; i < d.size(); ++i) {
    require(d[i] > 0.0 && std::isfinite(d[i]), ErrorCode::kPreconditionerNotPositive,
            "entry " + std::to_string(i));
  }
  Alignment out;
  if (y.is_complex() || z.is_complex()) {
    require(y.is_complex(), ErrorCode::kInvalidArgument,
            "complex sign vector needs a complex configuration");
    const ComplexMatrix twisted = z.as_complex().conjugate().asDiagonal() * y.complex();
    align_impl(twisted, d, out, out.v_complex);
  } else {
    const RealMatrix twisted = z.real().asDiagonal() * y.real();
    align_impl(twisted, d, out, out.v);
  }
  return out;
}

Alignment alignment(const SphereConfig& y, const SignVector& z) {
  return alignment(y, z, RealVector::Ones(y.n()));
}

double recovery_error(const SphereConfig& y, const SignVector& z) {
  check_same_n(y.n(), z.n(), "configuration vs sign vector size");
  if (y.is_complex() || z.is_complex()) {
    const ComplexMatrix yc = y.is_complex() ? y.complex() : ComplexMatrix(y.real().cast<Complex>());
    const ComplexVector zc = z.as_complex();
    const ComplexMatrix gram = yc * yc.adjoint();
    return (gram - zc * zc.adjoint()).cwiseAbs().maxCoeff();
  }
  const RealMatrix gram = y.real() * y.real().transpose();
  return (gram - z.real() * z.real().transpose()).cwiseAbs().maxCoeff();
}

bool recovery_check(const SphereConfig& y, const SignVector& z, double tol) {
  require(tol > 0.0, ErrorCode::kInvalidArgument, "recovery tolerance must be positive");
  return recovery_error(y, z) <= tol;
}

}  // namespace sphsync
