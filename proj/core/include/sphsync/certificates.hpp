#pragma once

#include "sphsync/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace sphsync {

enum class PreconditionerKind { kIdentity, kDegree, kCustom };
enum class Verdict { kBenignForR, kPsdCertifiedOnly, kInconclusive };

std::string_view to_string(PreconditionerKind kind);
std::string_view to_string(Verdict verdict);

/// Diagonal preconditioner choice for the landscape checks.
struct Preconditioner {
  PreconditionerKind kind = PreconditionerKind::kIdentity;
  RealVector custom;  // used when kind == kCustom

  static Preconditioner identity() { return {}; }
  static Preconditioner degree() { return {PreconditionerKind::kDegree, {}}; }
  static Preconditioner from_vector(RealVector d) {
    return {PreconditionerKind::kCustom, std::move(d)};
  }
};

/// Relative tolerance for "zero" eigenvalues and dual feasibility:
/// |lambda| <= tol * max(1, |L|_op) counts as zero.
inline constexpr double kDefaultCertificateTol = 1e-9;

struct CertificateReport {
  // Eigenvalues of the (preconditioned) Laplacian L_D(z).
  double lambda_1 = 0.0;
  double lambda_2 = 0.0;
  double lambda_n = 0.0;
  /// lambda_n / lambda_2, +infinity when lambda_2 is not above the zero threshold.
  double condition_number = 0.0;
  PreconditionerKind preconditioner = PreconditionerKind::kIdentity;
  /// Threshold the relaxation rank must strictly exceed (ratio for the real
  /// case, ratio / 2 for the complex case).
  double r_required = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  /// L(z) >= 0 and L(z) z = 0 within tolerance.
  bool dual_feasible = false;
  std::optional<double> delta_c;

  int r = 0;
  bool complex_case = false;
  double zero_threshold = 0.0;
  double laplacian_norm = 0.0;  // |L(z)|_op (unpreconditioned)
  double residual_norm = 0.0;   // |L(z) z|
  std::string reason;
};

/// Checks that z z^T solves the max-cut SDP via the dual certificate L(z).
/// Verdict is psd_certified_only when L(z) >= 0, L(z) z = 0 and
/// lambda_2(L(z)) > 0 (unique rank-one optimum), else inconclusive.
CertificateReport certify_sdp_optimality(const SymmetricCost& c, const SignVector& z,
                                         double tol = kDefaultCertificateTol);

/// Real landscape certificate: benign_for_r iff L(z) is a valid dual
/// certificate, lambda_2(L_D) > 0 and r > lambda_n(L_D) / lambda_2(L_D).
/// A nonpositive degree preconditioner yields an inconclusive report.
CertificateReport benign_landscape_check(const SymmetricCost& c, const SignVector& z, int r,
                                         const Preconditioner& d = Preconditioner::identity(),
                                         double tol = kDefaultCertificateTol);

/// Complex (Hermitian) variant: benign_for_r iff the certificate is valid
/// (which needs diag(C z z^*) real) and 2r > lambda_n(L_D) / lambda_2(L_D).
/// Real inputs are embedded in the complex shell.
CertificateReport benign_landscape_check_complex(const SymmetricCost& c, const SignVector& z,
                                                 int r,
                                                 const Preconditioner& d = Preconditioner::identity(),
                                                 double tol = kDefaultCertificateTol);

/// Reference rank-one matrix C_bar = diag(z) a a^T diag(z).
struct RankOneModel {
  std::optional<RealVector> a;  // explicit positive vector
  double d_bar = 0.0;           // used when a is empty: C_bar = (d_bar / n) z z^T

  static RankOneModel uniform(double d_bar) { return {std::nullopt, d_bar}; }
  static RankOneModel from_vector(RealVector a) { return {std::move(a), 0.0}; }
};

struct RankOneReference {
  RealVector a;
  std::optional<double> d_bar;
  double kappa_d = 1.0;
  double delta_c = 0.0;
  double d_min = 0.0;
  /// (1 + delta_c) / (1 - delta_c) if delta_c < 1, else +infinity.
  double bound_on_condition_number = 1.0;
  bool applicable = true;  // false when d_min <= 0
  /// |D_bar^{-1/2} (C - C_bar) D_bar^{-1/2}|_op.
  double reference_deviation = 0.0;
  /// Measured |L_D - L_bar|_op, to cross-check against delta_c.
  double measured_deviation = 0.0;
  /// Measured lambda_n(L_D) / lambda_2(L_D) with D = ddiag(C z z^T).
  double measured_condition_number = 0.0;
};

/// Spectral approximation bound of the degree-normalized Laplacian by the
/// rank-one reference. Real data only.
RankOneReference rank_one_bound(const SymmetricCost& c, const SignVector& z,
                                const RankOneModel& model);

struct SyncCheckReport {
  CertificateReport ordinary;                  // L = diag(A1) - A
  std::optional<CertificateReport> normalized; // I - D^{-1/2} A D^{-1/2}; absent if A1 not > 0
  bool synchronizing = false;                  // either ratio < 2
  std::string note;
};

/// Global synchronization criterion for the homogeneous Kuramoto model on
/// coupling matrix A (z = 1, r = 2, identity and degree preconditioners).
SyncCheckReport kuramoto_sync_check(const SymmetricCost& a, double tol = kDefaultCertificateTol);

/// |A - (d/n) 1 1^T|_op / d.
double expander_alpha(const SymmetricCost& a, double d);

}  // namespace sphsync
