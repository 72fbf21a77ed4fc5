#include "sphsync/circulant.hpp"

#include "sphsync/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sphsync {

namespace {

void check_nk(Index n, Index k) {
  require(k >= 1 && n >= 2 * k + 1, ErrorCode::kInvalidArgument,
          "circulant spectrum needs k >= 1 and n >= 2k + 1 (n = " + std::to_string(n) +
              ", k = " + std::to_string(k) + ")");
}

long long wrap(long long m, Index n) {
  const long long r = m % n;
  return r < 0 ? r + n : r;
}

}  // namespace

double dirichlet_ratio(Index n, Index k, long long m) {
  const long long mm = wrap(m, n);
  if (mm == 0) return static_cast<double>(2 * k + 1);
  const double x = std::numbers::pi * static_cast<double>(mm) / static_cast<double>(n);
  return std::sin(static_cast<double>(2 * k + 1) * x) / std::sin(x);
}

double circulant_h_a(Index n, Index k, long long m) {
  if (wrap(m, n) == 0) return static_cast<double>(2 * k);
  return dirichlet_ratio(n, k, m) - 1.0;
}

double circulant_h_l(Index n, Index k, long long m) {
  if (wrap(m, n) == 0) return 0.0;
  return static_cast<double>(2 * k + 1) - dirichlet_ratio(n, k, m);
}

double circulant_h_ltilde(Index n, Index k, long long m) {
  return -circulant_h_l(n, k, 1) +
         0.5 * (circulant_h_l(n, k, m - 1) + circulant_h_l(n, k, m + 1));
}

CirculantSpectrum dft_spectrum(Index n, Index k) {
  check_nk(n, k);
  CirculantSpectrum s;
  s.n = n;
  s.k = k;
  const Index half = n / 2;
  for (Index m = 0; m <= half; ++m) {
    s.h_a.push_back(circulant_h_a(n, k, m));
    s.h_l.push_back(circulant_h_l(n, k, m));
    s.h_ltilde.push_back(circulant_h_ltilde(n, k, m));
  }
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double tmin = std::numeric_limits<double>::infinity();
  for (Index m = 1; m <= half; ++m) {
    hi = std::max(hi, s.h_l[m]);
    lo = std::min(lo, s.h_l[m]);
    tmin = std::min(tmin, s.h_ltilde[m]);
  }
  s.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  s.lambda2_twisted = s.h_ltilde[1];
  s.twisted_min = tmin;
  return s;
}

RealVector circulant_laplacian_eigenvalues(Index n, Index k) {
  check_nk(n, k);
  RealVector ev(n);
  for (Index m = 0; m < n; ++m) ev[m] = circulant_h_l(n, k, m);
  std::sort(ev.begin(), ev.end());
  return ev;
}

RealVector circulant_twisted_eigenvalues(Index n, Index k) {
  check_nk(n, k);
  RealVector ev(n);
  for (Index m = 0; m < n; ++m) ev[m] = circulant_h_ltilde(n, k, m);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double limit_h_l(double mu, long long m) {
  require(m != 0, ErrorCode::kInvalidArgument, "limit_h_l needs m != 0");
  const double x = std::numbers::pi * static_cast<double>(m);
  return mu - std::sin(x * mu) / x;
}

double limit_kappa(double mu) {
  require(mu > 0.0 && mu <= 1.0, ErrorCode::kInvalidArgument,
          "limit_kappa needs mu in (0, 1], got " + std::to_string(mu));
  return limit_h_l(mu, 2) / limit_h_l(mu, 1);
}

double critical_density_residual(double mu) {
  const double x = std::numbers::pi * mu;
  return 2.0 * (1.0 - std::sin(x) / x) - (1.0 - std::sin(2.0 * x) / (2.0 * x));
}

double critical_density() {
  static const double mu_c = [] {
    double lo = 0.6;
    double hi = 1.0;
    // residual(0.6) < 0 < residual(1)
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (critical_density_residual(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }();
  return mu_c;
}

FiniteSizeStability finite_size_stability(Index n, Index k) {
  const CirculantSpectrum s = dft_spectrum(n, k);
  FiniteSizeStability out;
  out.condition_number = s.condition_number;
  out.lambda2_twisted = s.lambda2_twisted;
  out.twisted_min = s.twisted_min;
  out.predicts_spurious = s.lambda2_twisted > 0.0;
  out.condition_above_two = s.condition_number > 2.0;
  return out;
}

}  // namespace sphsync
