#include "sphsync/certificates.hpp"

#include "sphsync/error.hpp"
#include "sphsync/sphere_ops.hpp"
#include "sphsync/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sphsync {

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::kIdentity: return "identity";
    case PreconditionerKind::kDegree: return "degree";
    case PreconditionerKind::kCustom: return "custom";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kBenignForR: return "benign_for_r";
    case Verdict::kPsdCertifiedOnly: return "psd_certified_only";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_norm_of(const RealVector& ev) {
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double residual(const Laplacian& l, const SignVector& z) {
  if (l.is_complex()) return (l.complex() * z.as_complex()).norm();
  return (l.real() * z.real()).norm();
}

void fill_eigenvalues(CertificateReport& report, const RealVector& ev, double threshold) {
  const Index n = ev.size();
  report.lambda_1 = ev[0];
  report.lambda_2 = n >= 2 ? ev[1] : ev[0];
  report.lambda_n = ev[n - 1];
  report.condition_number =
      (n >= 2 && report.lambda_2 > threshold) ? report.lambda_n / report.lambda_2 : kInf;
}

// Shared evaluation for the real and complex landscape checks.
CertificateReport evaluate(const SymmetricCost& c, const SignVector& z, int r,
                           const Preconditioner& pre, double tol, bool complex_case) {
  require(tol > 0.0, ErrorCode::kInvalidArgument, "tolerance must be positive");
  require(r >= 1, ErrorCode::kInvalidArgument, "relaxation rank must be >= 1");
  require(c.n() == z.n(), ErrorCode::kDimensionMismatch, "cost vs sign vector size");

  CertificateReport report;
  report.r = r;
  report.complex_case = complex_case;
  report.preconditioner = pre.kind;

  const Laplacian l = laplacian(c, z);
  const RealVector ev = spectrum(l);
  const double norm = spectral_norm_of(ev);
  const double threshold = tol * std::max(1.0, norm);
  const double sqrt_n = std::sqrt(static_cast<double>(c.n()));
  report.laplacian_norm = norm;
  report.residual_norm = residual(l, z);
  report.dual_feasible = ev[0] >= -threshold && report.residual_norm <= threshold * sqrt_n;

  auto finish_inconclusive = [&](std::string reason) {
    report.verdict = Verdict::kInconclusive;
    report.reason = std::move(reason);
    return report;
  };

  if (complex_case) {
    const ComplexVector zc = z.as_complex();
    const ComplexVector cz = c.as_complex() * zc;
    double max_imag = 0.0;
    for (Index i = 0; i < c.n(); ++i) {
      max_imag = std::max(max_imag, std::abs((cz[i] * std::conj(zc[i])).imag()));
    }
    if (max_imag > threshold) {
      fill_eigenvalues(report, ev, threshold);
      report.r_required = kInf;
      report.condition_number = kInf;
      return finish_inconclusive("gradient condition fails: diag(C z z*) is not real (max |imag| = " +
                                 std::to_string(max_imag) + ")");
    }
  }

  RealVector ev_pre = ev;
  double threshold_pre = threshold;
  if (pre.kind != PreconditionerKind::kIdentity) {
    const RealVector d = pre.kind == PreconditionerKind::kDegree ? degree_vector(c, z) : pre.custom;
    require(d.size() == c.n(), ErrorCode::kDimensionMismatch, "preconditioner length");
    if (d.minCoeff() <= 0.0) {
      fill_eigenvalues(report, ev, threshold);
      report.condition_number = kInf;
      report.r_required = kInf;
      if (pre.kind == PreconditionerKind::kDegree) {
        return finish_inconclusive("degree preconditioner diag(C z z^T) has a nonpositive entry");
      }
      fail(ErrorCode::kPreconditionerNotPositive, "custom preconditioner has a nonpositive entry");
    }
    ev_pre = spectrum(precondition(l, d));
    threshold_pre = tol * std::max(1.0, spectral_norm_of(ev_pre));
  }

  fill_eigenvalues(report, ev_pre, threshold_pre);
  report.zero_threshold = threshold_pre;
  const double ratio = report.condition_number;
  report.r_required = complex_case ? ratio / 2.0 : ratio;

  if (!report.dual_feasible) {
    return finish_inconclusive(ev[0] < -threshold ? "L(z) is not positive semidefinite"
                                                  : "L(z) z is not zero");
  }
  if (c.n() < 2 || !(report.lambda_2 > threshold_pre)) {
    return finish_inconclusive("spectral gap lambda_2 is zero");
  }
  if (static_cast<double>(r) > report.r_required) {
    report.verdict = Verdict::kBenignForR;
  } else {
    report.verdict = Verdict::kPsdCertifiedOnly;
    report.reason = "condition number too large for this relaxation rank";
  }
  return report;
}

}  // namespace

CertificateReport certify_sdp_optimality(const SymmetricCost& c, const SignVector& z, double tol) {
  // r = 1 never satisfies r > ratio >= 1, so the best verdict is psd_certified_only.
  const bool complex_case = c.is_complex() || z.is_complex();
  CertificateReport report = evaluate(c, z, 1, Preconditioner::identity(), tol, complex_case);
  report.r = 0;
  if (report.verdict == Verdict::kPsdCertifiedOnly) report.reason = "unique rank-one SDP optimum";
  return report;
}

CertificateReport benign_landscape_check(const SymmetricCost& c, const SignVector& z, int r,
                                         const Preconditioner& d, double tol) {
  require(!c.is_complex() && !z.is_complex(), ErrorCode::kInvalidArgument,
          "benign_landscape_check needs real data; use benign_landscape_check_complex");
  return evaluate(c, z, r, d, tol, false);
}

CertificateReport benign_landscape_check_complex(const SymmetricCost& c, const SignVector& z,
                                                 int r, const Preconditioner& d, double tol) {
  const SymmetricCost hermitian = c.is_complex() ? c : SymmetricCost::complexified(c);
  const SignVector zc = z.is_complex() ? z : SignVector::from_complex(z.as_complex());
  return evaluate(hermitian, zc, r, d, tol, true);
}

RankOneReference rank_one_bound(const SymmetricCost& c, const SignVector& z,
                                const RankOneModel& model) {
  require(!c.is_complex() && !z.is_complex(), ErrorCode::kInvalidArgument,
          "rank_one_bound needs real data");
  require(c.n() == z.n(), ErrorCode::kDimensionMismatch, "cost vs sign vector size");
  const Index n = c.n();

  RankOneReference ref;
  if (model.a) {
    ref.a = *model.a;
    require(ref.a.size() == n, ErrorCode::kDimensionMismatch, "reference vector length");
  } else {
    require(model.d_bar > 0.0, ErrorCode::kInvalidArgument, "d_bar must be positive");
    ref.d_bar = model.d_bar;
    ref.a = RealVector::Constant(n, std::sqrt(model.d_bar / static_cast<double>(n)));
  }
  require(ref.a.minCoeff() > 0.0, ErrorCode::kInvalidArgument, "reference vector must be positive");

  const RealVector& zr = z.real();
  const RealVector za = zr.cwiseProduct(ref.a);
  const RealMatrix c_bar = za * za.transpose();
  const RealVector d_bar_diag = ref.a.sum() * ref.a;  // D_bar = |a|_1 diag(a)
  const RealVector d = degree_vector(c, z);
  ref.d_min = d.minCoeff();

  const RealVector bar_scale = d_bar_diag.cwiseSqrt().cwiseInverse();
  const RealMatrix scaled_dev = bar_scale.asDiagonal() * (c.real() - c_bar) * bar_scale.asDiagonal();
  ref.reference_deviation = symmetric_operator_norm(scaled_dev);

  if (ref.d_min <= 0.0) {
    ref.applicable = false;
    ref.kappa_d = kInf;
    ref.delta_c = kInf;
    ref.bound_on_condition_number = kInf;
    ref.measured_deviation = kInf;
    ref.measured_condition_number = kInf;
    return ref;
  }

  ref.kappa_d = std::max(d_bar_diag.cwiseQuotient(d).maxCoeff(), 1.0);
  ref.delta_c = 2.0 * ref.kappa_d * ref.kappa_d * ref.reference_deviation;
  ref.bound_on_condition_number =
      ref.delta_c < 1.0 ? (1.0 + ref.delta_c) / (1.0 - ref.delta_c) : kInf;

  const Laplacian l_d = precondition(laplacian(c, z), d);
  RealMatrix l_bar = -(bar_scale.asDiagonal() * c_bar * bar_scale.asDiagonal());
  l_bar.diagonal().array() += 1.0;
  ref.measured_deviation = symmetric_operator_norm(l_d.real() - l_bar);

  const RealVector ev = spectrum(l_d);
  const double threshold = kDefaultCertificateTol * std::max(1.0, spectral_norm_of(ev));
  ref.measured_condition_number = (n >= 2 && ev[1] > threshold) ? ev[n - 1] / ev[1] : kInf;
  return ref;
}

SyncCheckReport kuramoto_sync_check(const SymmetricCost& a, double tol) {
  require(!a.is_complex(), ErrorCode::kInvalidArgument, "coupling matrix must be real");
  const SignVector ones = SignVector::ones(a.n());
  SyncCheckReport out;
  out.ordinary = benign_landscape_check(a, ones, 2, Preconditioner::identity(), tol);
  const RealVector degrees = a.real().rowwise().sum();
  if (degrees.minCoeff() > 0.0) {
    out.normalized = benign_landscape_check(a, ones, 2, Preconditioner::degree(), tol);
  } else {
    out.note = "A1 has a nonpositive entry; normalized Laplacian branch skipped";
  }
  out.synchronizing = out.ordinary.verdict == Verdict::kBenignForR ||
                      (out.normalized && out.normalized->verdict == Verdict::kBenignForR);
  return out;
}

double expander_alpha(const SymmetricCost& a, double d) {
  require(d > 0.0, ErrorCode::kInvalidArgument, "degree d must be positive");
  require(!a.is_complex(), ErrorCode::kInvalidArgument, "adjacency matrix must be real");
  const auto n = static_cast<double>(a.n());
  RealMatrix dev = a.real();
  dev.array() -= d / n;
  return symmetric_operator_norm(dev) / d;
}

}  // namespace sphsync
