#include "sphsync/optimizer.hpp"

#include "sphsync/error.hpp"
#include "sphsync/rng.hpp"
#include "sphsync/sphere_ops.hpp"
#include "sphsync/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sphsync {

void SolveOptions::validate() const {
  require(max_iters >= 0, ErrorCode::kInvalidArgument, "max_iters must be >= 0");
  require(grad_tol > 0.0, ErrorCode::kInvalidArgument, "grad_tol must be positive");
  require(curvature_tol > 0.0, ErrorCode::kInvalidArgument, "curvature_tol must be positive");
  require(step_rule.step >= 0.0, ErrorCode::kInvalidArgument, "step must be >= 0");
  require(step_rule.shrink > 0.0 && step_rule.shrink < 1.0, ErrorCode::kInvalidArgument,
          "shrink must lie in (0, 1)");
  require(step_rule.sufficient_increase > 0.0 && step_rule.sufficient_increase < 1.0,
          ErrorCode::kInvalidArgument, "sufficient_increase must lie in (0, 1)");
  require(hessian_probe_iters >= 1, ErrorCode::kInvalidArgument, "hessian_probe_iters must be >= 1");
  require(escape_attempts >= 0, ErrorCode::kInvalidArgument, "escape_attempts must be >= 0");
  require(escape_radius > 0.0, ErrorCode::kInvalidArgument, "escape_radius must be positive");
  require(escape_steps >= 1, ErrorCode::kInvalidArgument, "escape_steps must be >= 1");
  require(recovery_tol > 0.0, ErrorCode::kInvalidArgument, "recovery_tol must be positive");
}

namespace {

constexpr int kMaxLineSearchHalvings = 60;

double re(double x) { return x; }
double re(const Complex& x) { return x.real(); }

template <typename M> const M& rows_of(const SphereConfig& y);
template <> const RealMatrix& rows_of<RealMatrix>(const SphereConfig& y) { return y.real(); }
template <> const ComplexMatrix& rows_of<ComplexMatrix>(const SphereConfig& y) { return y.complex(); }

template <typename M> const M& matrix_of(const SymmetricCost& c);
template <> const RealMatrix& matrix_of<RealMatrix>(const SymmetricCost& c) { return c.real(); }
template <> const ComplexMatrix& matrix_of<ComplexMatrix>(const SymmetricCost& c) { return c.complex(); }

template <typename M>
double re_inner(const M& a, const M& b) {
  return re(a.conjugate().cwiseProduct(b).sum());
}

template <typename M>
RealVector row_re_inner(const M& a, const M& b) {
  RealVector out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) out[i] = re(a.row(i).dot(b.row(i)));
  return out;
}

template <typename M>
M project(const M& y, M v) {
  const RealVector coeff = row_re_inner(y, v);
  for (Index i = 0; i < y.rows(); ++i) v.row(i) -= coeff[i] * y.row(i);
  return v;
}

template <typename M>
M gradient(const M& y, const M& cy) {
  const RealVector s = row_re_inner(y, cy);
  M g = cy;
  for (Index i = 0; i < y.rows(); ++i) g.row(i) -= s[i] * y.row(i);
  return 2.0 * g;
}

// y + v with rows normalized; false when a row vanishes.
template <typename M>
bool retract_rows(const M& y, const M& v, M& out) {
  out = y + v;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    out.row(i) /= norm;
  }
  return true;
}

// <S(Y), V V^*> for S(Y) = ddiag(C Y Y^*) - C.
template <typename M>
double quadratic_form(const M& c, const M& y, const M& cy, const M& v) {
  const RealVector s = row_re_inner(y, cy);
  M sv = -(c * v);
  for (Index i = 0; i < v.rows(); ++i) sv.row(i) += s[i] * v.row(i);
  return re_inner(v, sv);
}

template <typename M>
M random_tangent(const M& y, Rng& rng) {
  M v(y.rows(), y.cols());
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index i = 0; i < v.rows(); ++i) {
      if constexpr (std::is_same_v<typename M::Scalar, Complex>) {
        const double re_part = rng.normal();
        v(i, j) = Complex(re_part, rng.normal());
      } else {
        v(i, j) = rng.normal();
      }
    }
  }
  v = project(y, v);
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

// Real coordinates of row i: (Re y_i, Im y_i) for complex rows.
template <typename M>
RealVector real_coords(const M& y, Index i) {
  if constexpr (std::is_same_v<typename M::Scalar, Complex>) {
    RealVector u(2 * y.cols());
    u.head(y.cols()) = y.row(i).real().transpose();
    u.tail(y.cols()) = y.row(i).imag().transpose();
    return u;
  } else {
    return y.row(i).transpose();
  }
}

// Orthonormal basis of the complement of the unit vector u.
RealMatrix complement_basis(const RealVector& u) {
  const Index m = u.size();
  const Eigen::HouseholderQR<RealMatrix> qr{RealMatrix(u)};
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(m, m);
  return q.rightCols(m - 1);
}

// Exact minimum of the second-order form over T_Y from the dense tangent Hessian.
template <typename M>
CurvatureProbe dense_probe(const M& c, const M& y, const M& cy) {
  constexpr bool kComplex = std::is_same_v<typename M::Scalar, Complex>;
  const Index n = y.rows();
  const Index r = y.cols();
  const Index ambient = kComplex ? 2 * r : r;
  const Index m = ambient - 1;
  const RealVector s = row_re_inner(y, cy);

  std::vector<RealMatrix> basis(n);
  std::vector<RealMatrix> rotated(n);  // i * basis, complex case
  for (Index i = 0; i < n; ++i) {
    basis[i] = complement_basis(real_coords(y, i));
    if constexpr (kComplex) {
      rotated[i].resize(ambient, m);
      rotated[i].topRows(r) = -basis[i].bottomRows(r);
      rotated[i].bottomRows(r) = basis[i].topRows(r);
    }
  }

  RealMatrix h = RealMatrix::Zero(n * m, n * m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      RealMatrix block;
      if constexpr (kComplex) {
        const Complex sij = (i == j ? Complex(s[i]) : Complex(0.0)) - c(i, j);
        block = sij.real() * basis[i].transpose() * basis[j] +
                sij.imag() * basis[i].transpose() * rotated[j];
      } else {
        const double sij = (i == j ? s[i] : 0.0) - c(i, j);
        block = i == j ? RealMatrix(sij * RealMatrix::Identity(m, m))
                       : RealMatrix(sij * basis[i].transpose() * basis[j]);
      }
      h.block(i * m, j * m, m, m) = block;
      if (i != j) h.block(j * m, i * m, m, m) = block.transpose();
    }
  }
  h = 0.5 * (h + h.transpose()).eval();
  const EigenPairs eig = symmetric_eigenpairs(h);

  CurvatureProbe out;
  out.dense = true;
  out.curvature = eig.values[0];
  M v(n, r);
  for (Index i = 0; i < n; ++i) {
    const RealVector u = basis[i] * eig.vectors.col(0).segment(i * m, m);
    if constexpr (kComplex) {
      for (Index k = 0; k < r; ++k) v(i, k) = Complex(u[k], u[r + k]);
    } else {
      v.row(i) = u.transpose();
    }
  }
  if constexpr (kComplex) {
    out.v_complex = v;
  } else {
    out.v = v;
  }
  return out;
}

// Power iteration on (shift I - H) over T_Y; keeps the smallest Rayleigh quotient seen.
template <typename M>
CurvatureProbe power_probe(const M& c, const M& y, const M& cy, int iters, std::uint64_t seed,
                           double c_norm) {
  const RealVector s = row_re_inner(y, cy);
  // |S| <= max|s_i| + |C|, so this shift keeps (shift I - H) positive semidefinite.
  const double shift = std::max(2.0 * c_norm, s.cwiseAbs().maxCoeff() + c_norm);
  auto apply_s = [&](const M& v) {
    M out = -(c * v);
    for (Index i = 0; i < v.rows(); ++i) out.row(i) += s[i] * v.row(i);
    return out;
  };
  Rng rng(derive_seed(seed, 0x4855u));
  M v = random_tangent(y, rng);
  CurvatureProbe out;
  out.curvature = std::numeric_limits<double>::infinity();
  M best = v;
  for (int it = 0; it < iters; ++it) {
    const M sv = apply_s(v);
    const double q = re_inner(v, sv);
    if (q < out.curvature) {
      out.curvature = q;
      best = v;
    }
    M next = project(y, M(shift * v - sv));
    const double norm = next.norm();
    if (!(norm > 0.0)) break;
    v = next / norm;
  }
  const double q = re_inner(v, apply_s(v));
  if (q < out.curvature) {
    out.curvature = q;
    best = v;
  }
  if constexpr (std::is_same_v<typename M::Scalar, Complex>) {
    out.v_complex = best;
  } else {
    out.v = best;
  }
  return out;
}

template <typename M>
CurvatureProbe probe(const M& c, const M& y, int iters, std::uint64_t seed, Index dense_limit,
                     double c_norm) {
  constexpr bool kComplex = std::is_same_v<typename M::Scalar, Complex>;
  const Index tangent_dim = y.rows() * ((kComplex ? 2 * y.cols() : y.cols()) - 1);
  const M cy = c * y;
  if (tangent_dim == 0) {
    CurvatureProbe out;
    out.dense = true;
    if constexpr (kComplex) {
      out.v_complex = M::Zero(y.rows(), y.cols());
    } else {
      out.v = M::Zero(y.rows(), y.cols());
    }
    return out;
  }
  if (tangent_dim <= dense_limit) return dense_probe(c, y, cy);
  return power_probe(c, y, cy, iters, seed, c_norm);
}

struct AscentState {
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;
};

// Gradient ascent on raw rows; the objective increment of each step is
// evaluated as <Y' - Y, C (Y' + Y)>, which stays accurate when the step
// gain is below the rounding level of the objective itself.
template <typename M>
AscentState ascend_rows(const M& c, M& y, const SolveOptions& opts, double c_norm, int max_iters,
                        std::vector<double>* trace) {
  AscentState st;
  M cy = c * y;
  st.objective = re_inner(y, cy);
  if (trace && trace->empty()) trace->push_back(st.objective);
  const StepRule& rule = opts.step_rule;
  const double step0 = rule.step > 0.0 ? rule.step : (c_norm > 0.0 ? 0.5 / c_norm : 1.0);
  const double stop = opts.grad_tol * c_norm;

  M y_new;
  M cy_new;
  while (true) {
    const RealVector s = row_re_inner(y, cy);
    const M g = gradient(y, cy);
    st.grad_norm = g.norm();
    if (st.grad_norm <= stop) {
      st.converged = true;
      return st;
    }
    if (st.iterations >= max_iters) return st;

    const double slope = st.grad_norm * st.grad_norm;
    double t = step0;
    bool accepted = false;
    double gain = 0.0;
    for (int attempt = 0; attempt <= kMaxLineSearchHalvings; ++attempt, t *= rule.shrink) {
      if (!retract_rows(y, M(t * g), y_new)) continue;
      cy_new = c * y_new;
      // f(Y') - f(Y) split so the large normal part of CY never enters a
      // difference: for unit rows Re<D_i, y_i> = -|D_i|^2 / 2 with D = Y' - Y.
      const M delta = y_new - y;
      gain = re_inner(delta, g) + re_inner(delta, M(cy_new - cy));
      for (Index i = 0; i < y.rows(); ++i) gain -= s[i] * delta.row(i).squaredNorm();
      if (rule.kind == StepKind::kFixed) {
        accepted = gain >= 0.0;
        break;
      }
      if (gain >= rule.sufficient_increase * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      st.stalled = true;
      return st;
    }
    y.swap(y_new);
    cy.swap(cy_new);
    st.objective += gain;
    ++st.iterations;
    if (trace) trace->push_back(st.objective);
  }
}

template <typename M>
SphereConfig to_config(M rows) {
  return SphereConfig::from_rows(std::move(rows));
}

SignVector matching_kind(const SignVector& z, bool complex) {
  if (complex && !z.is_complex()) return SignVector::from_complex(z.as_complex());
  return z;
}

template <typename M>
void finish_report(SolveReport& report, const SymmetricCost& c, const std::optional<SignVector>& z,
                   const SolveOptions& opts) {
  report.objective = objective(c, report.final_y);
  const bool complex = c.is_complex();
  const SignVector ref = z ? matching_kind(*z, complex) : SignVector::ones(c.n());
  report.rho = alignment(report.final_y, ref).rho;
  if (z) report.recovered = recovery_check(report.final_y, ref, opts.recovery_tol);
}

template <typename M>
SolveReport solve_impl(const SymmetricCost& c, const SphereConfig& y0, const SolveOptions& opts,
                       const std::optional<SignVector>& z) {
  opts.validate();
  require(c.n() == y0.n(), ErrorCode::kDimensionMismatch, "cost vs configuration size");
  require(c.is_complex() == y0.is_complex(), ErrorCode::kInvalidArgument,
          "real/complex kinds of cost and configuration differ");
  const M& cm = matrix_of<M>(c);
  const double c_norm = operator_norm(c);
  const double curvature_floor = -opts.curvature_tol * c_norm;
  constexpr bool kComplex = std::is_same_v<typename M::Scalar, Complex>;

  SolveReport report{y0};
  report.c_norm = c_norm;
  M y = rows_of<M>(y0);
  std::vector<double>* trace = opts.record_trace ? &report.objective_trace : nullptr;

  auto evaluate_curvature = [&](const M& at, int salt) {
    return probe(cm, at, opts.hessian_probe_iters, derive_seed(opts.seed, 0x100u + salt),
                 opts.dense_hessian_limit, c_norm);
  };

  if (y.cols() == 1 && !kComplex) {
    // r = 1: no ascent, only the criticality of the given point.
    const M cy = cm * y;
    report.grad_norm = gradient(y, cy).norm();
    report.converged = report.grad_norm <= opts.grad_tol * c_norm;
    report.min_hessian_curvature = 0.0;
    report.second_order_critical = report.converged;
    report.status = "rank one: criticality evaluated only";
    finish_report<M>(report, c, z, opts);
    return report;
  }
  if (y.cols() == 1) {
    const M cy = cm * y;
    report.grad_norm = gradient(y, cy).norm();
    report.converged = report.grad_norm <= opts.grad_tol * c_norm;
    report.min_hessian_curvature = evaluate_curvature(y, 0).curvature;
    report.second_order_critical =
        report.converged && report.min_hessian_curvature >= curvature_floor;
    report.status = "rank one: criticality evaluated only";
    finish_report<M>(report, c, z, opts);
    return report;
  }

  Rng escape_rng(derive_seed(opts.seed, 0xE5Cu));
  int budget = opts.max_iters;
  bool use_probe_direction = true;
  while (true) {
    AscentState st = ascend_rows(cm, y, opts, c_norm, budget, trace);
    budget -= st.iterations;
    report.iterations += st.iterations;
    report.grad_norm = st.grad_norm;
    report.converged = st.converged;
    if (!st.converged) {
      report.status = st.stalled ? "line search stalled" : "not converged";
      report.min_hessian_curvature = evaluate_curvature(y, report.escapes_used).curvature;
      break;
    }
    const CurvatureProbe pr = evaluate_curvature(y, report.escapes_used);
    report.min_hessian_curvature = pr.curvature;
    if (pr.curvature >= curvature_floor) {
      report.second_order_critical = true;
      report.status = "second-order critical";
      break;
    }
    if (report.escapes_used >= opts.escape_attempts) {
      report.status = "escape attempts exhausted";
      break;
    }
    ++report.escapes_used;

    M direction;
    if constexpr (kComplex) {
      direction = use_probe_direction ? pr.v_complex : random_tangent(y, escape_rng);
    } else {
      direction = use_probe_direction ? pr.v : random_tangent(y, escape_rng);
    }
    const double dnorm = direction.norm();
    if (dnorm > 0.0) direction *= opts.escape_radius / dnorm;

    // Try both signs; keep the one that makes progress within escape_steps.
    const double base = re_inner(y, M(cm * y));
    bool escaped = false;
    for (double sign : {1.0, -1.0}) {
      M trial;
      if (!retract_rows(y, M(sign * direction), trial)) continue;
      AscentState probe_state =
          ascend_rows(cm, trial, opts, c_norm, std::min(opts.escape_steps, std::max(budget, 0)),
                      nullptr);
      const double reached = re_inner(trial, M(cm * trial));
      if (reached > base + 1e-12 * std::max(1.0, std::abs(base))) {
        report.iterations += probe_state.iterations;
        budget -= probe_state.iterations;
        y = std::move(trial);
        if (trace) trace->push_back(reached);
        escaped = true;
        break;
      }
    }
    use_probe_direction = escaped;
    if (budget <= 0 && !escaped) {
      report.status = "iteration budget exhausted during escape";
      break;
    }
  }

  report.final_y = to_config(std::move(y));
  finish_report<M>(report, c, z, opts);
  return report;
}

}  // namespace

SphereConfig random_init(Index n, Index r, std::uint64_t seed, bool complex) {
  require(n >= 1 && r >= 1, ErrorCode::kInvalidArgument, "random_init needs n, r >= 1");
  Rng rng(derive_seed(seed, 0x1417u));
  if (complex) {
    ComplexMatrix y(n, r);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < r; ++k) {
        const double re_part = rng.normal();
        y(i, k) = Complex(re_part, rng.normal());
      }
    }
    return SphereConfig::normalized(std::move(y));
  }
  RealMatrix y(n, r);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < r; ++k) y(i, k) = rng.normal();
  }
  return SphereConfig::normalized(std::move(y));
}

RealMatrix riemannian_gradient(const SymmetricCost& c, const SphereConfig& y) {
  require(!c.is_complex() && !y.is_complex(), ErrorCode::kInvalidArgument,
          "riemannian_gradient needs real data; use riemannian_gradient_complex");
  require(c.n() == y.n(), ErrorCode::kDimensionMismatch, "cost vs configuration size");
  return gradient(y.real(), RealMatrix(c.real() * y.real()));
}

ComplexMatrix riemannian_gradient_complex(const SymmetricCost& c, const SphereConfig& y) {
  require(c.is_complex() && y.is_complex(), ErrorCode::kInvalidArgument,
          "riemannian_gradient_complex needs complex data");
  require(c.n() == y.n(), ErrorCode::kDimensionMismatch, "cost vs configuration size");
  return gradient(y.complex(), ComplexMatrix(c.complex() * y.complex()));
}

double hessian_quadratic_form(const SymmetricCost& c, const SphereConfig& y, const RealMatrix& v) {
  require(!c.is_complex() && !y.is_complex(), ErrorCode::kInvalidArgument, "real data expected");
  require(c.n() == y.n() && v.rows() == y.n() && v.cols() == y.r(),
          ErrorCode::kDimensionMismatch, "hessian_quadratic_form shapes");
  const RealMatrix& ym = y.real();
  return quadratic_form(c.real(), ym, RealMatrix(c.real() * ym), project(ym, v));
}

double hessian_quadratic_form(const SymmetricCost& c, const SphereConfig& y,
                              const ComplexMatrix& v) {
  require(c.is_complex() && y.is_complex(), ErrorCode::kInvalidArgument, "complex data expected");
  require(c.n() == y.n() && v.rows() == y.n() && v.cols() == y.r(),
          ErrorCode::kDimensionMismatch, "hessian_quadratic_form shapes");
  const ComplexMatrix& ym = y.complex();
  return quadratic_form(c.complex(), ym, ComplexMatrix(c.complex() * ym), project(ym, v));
}

CurvatureProbe min_curvature_direction(const SymmetricCost& c, const SphereConfig& y, int iters,
                                       std::uint64_t seed, Index dense_limit) {
  require(iters >= 1, ErrorCode::kInvalidArgument, "iters must be >= 1");
  require(c.n() == y.n(), ErrorCode::kDimensionMismatch, "cost vs configuration size");
  require(c.is_complex() == y.is_complex(), ErrorCode::kInvalidArgument,
          "real/complex kinds of cost and configuration differ");
  const double c_norm = operator_norm(c);
  if (c.is_complex()) return probe(c.complex(), y.complex(), iters, seed, dense_limit, c_norm);
  return probe(c.real(), y.real(), iters, seed, dense_limit, c_norm);
}

SolveReport ascend(const SymmetricCost& c, const SphereConfig& y0, const SolveOptions& opts) {
  opts.validate();
  require(c.n() == y0.n(), ErrorCode::kDimensionMismatch, "cost vs configuration size");
  require(c.is_complex() == y0.is_complex(), ErrorCode::kInvalidArgument,
          "real/complex kinds of cost and configuration differ");
  const double c_norm = operator_norm(c);
  SolveReport report{y0};
  report.c_norm = c_norm;
  std::vector<double>* trace = opts.record_trace ? &report.objective_trace : nullptr;
  AscentState st;
  if (c.is_complex()) {
    ComplexMatrix y = y0.complex();
    st = ascend_rows(c.complex(), y, opts, c_norm, opts.max_iters, trace);
    report.final_y = SphereConfig::from_rows(std::move(y));
  } else {
    RealMatrix y = y0.real();
    st = ascend_rows(c.real(), y, opts, c_norm, opts.max_iters, trace);
    report.final_y = SphereConfig::from_rows(std::move(y));
  }
  report.iterations = st.iterations;
  report.grad_norm = st.grad_norm;
  report.converged = st.converged;
  report.status = st.converged ? "converged" : (st.stalled ? "line search stalled" : "not converged");
  report.objective = objective(c, report.final_y);
  report.rho = alignment(report.final_y,
                         c.is_complex() ? SignVector::from_complex(ComplexVector::Ones(c.n()))
                                        : SignVector::ones(c.n()))
                   .rho;
  return report;
}

SolveReport solve_from(const SymmetricCost& c, const SphereConfig& y0, const SolveOptions& opts,
                       const std::optional<SignVector>& z) {
  if (z) require(z->n() == c.n(), ErrorCode::kDimensionMismatch, "cost vs sign vector size");
  if (c.is_complex()) return solve_impl<ComplexMatrix>(c, y0, opts, z);
  return solve_impl<RealMatrix>(c, y0, opts, z);
}

SolveReport solve(const SymmetricCost& c, Index r, const SolveOptions& opts,
                  const std::optional<SignVector>& z) {
  return solve_from(c, random_init(c.n(), r, opts.seed, c.is_complex()), opts, z);
}

}  // namespace sphsync
