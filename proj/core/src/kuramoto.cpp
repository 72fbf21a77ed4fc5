#include "sphsync/kuramoto.hpp"

#include "sphsync/error.hpp"
#include "sphsync/rng.hpp"
#include "sphsync/spectral.hpp"

#include <Eigen/QR>

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sphsync {

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::kRk4 ? "rk4" : "euler";
}

std::string_view to_string(EquilibriumClass cls) {
  switch (cls) {
    case EquilibriumClass::kSynchronized: return "synchronized";
    case EquilibriumClass::kStableNonsync: return "stable_nonsync";
    case EquilibriumClass::kSaddleOrUnstable: return "saddle_or_unstable";
    case EquilibriumClass::kNotConverged: return "not_converged";
  }
  return "unknown";
}

namespace {

void require_real_square(const SymmetricCost& a, Index n) {
  require(!a.is_complex(), ErrorCode::kInvalidArgument, "coupling matrix must be real");
  require(a.n() == n, ErrorCode::kDimensionMismatch, "coupling matrix vs phase vector size");
}

void write_row(std::ostream& out, double t, const RealVector& theta) {
  char buf[32];
  auto put = [&](double x) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    out.write(buf, ptr - buf);
  };
  put(t);
  for (Index i = 0; i < theta.size(); ++i) {
    out.put(',');
    put(theta[i]);
  }
  out.put('\n');
}

}  // namespace

RealVector phase_velocity(const SymmetricCost& a, const RealVector& theta, double coupling) {
  require_real_square(a, theta.size());
  const RealVector c = theta.array().cos().matrix();
  const RealVector s = theta.array().sin().matrix();
  const RealVector as = a.real() * s;
  const RealVector ac = a.real() * c;
  // sum_j A_ij sin(theta_j - theta_i) = cos(theta_i) (A sin)_i - sin(theta_i) (A cos)_i
  return coupling * (c.cwiseProduct(as) - s.cwiseProduct(ac));
}

double phase_potential(const SymmetricCost& a, const RealVector& theta) {
  require_real_square(a, theta.size());
  const RealVector c = theta.array().cos().matrix();
  const RealVector s = theta.array().sin().matrix();
  return c.dot(a.real() * c) + s.dot(a.real() * s);
}

bool is_synchronized(const RealVector& theta, double sync_tol) {
  // min_ij cos(theta_i - theta_j) is attained by the widest pair; checking all
  // pairs through the unit vectors keeps this exact for any angle wrap.
  const Index n = theta.size();
  const RealVector c = theta.array().cos().matrix();
  const RealVector s = theta.array().sin().matrix();
  double min_cos = 1.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      min_cos = std::min(min_cos, c[i] * c[j] + s[i] * s[j]);
    }
  }
  return min_cos >= 1.0 - sync_tol;
}

RealMatrix linearization_laplacian(const SymmetricCost& a, const RealVector& theta) {
  require_real_square(a, theta.size());
  const Index n = theta.size();
  RealMatrix tilde(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) tilde(i, j) = a.real()(i, j) * std::cos(theta[i] - theta[j]);
  }
  RealMatrix l = -tilde;
  l.diagonal() += tilde.rowwise().sum();
  return l;
}

double shift_free_lambda2(const RealMatrix& l) {
  const Index n = l.rows();
  require(n >= 2, ErrorCode::kInvalidArgument, "need n >= 2");
  const EigenPairs eig = symmetric_eigenpairs(l);
  const RealVector ones = RealVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Index shift_index = -1;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(eig.vectors.col(k).dot(ones)) > 0.99 &&
        (shift_index < 0 || std::abs(eig.values[k]) < std::abs(eig.values[shift_index]))) {
      shift_index = k;
    }
  }
  if (shift_index >= 0) {
    double best = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      if (k != shift_index) best = std::min(best, eig.values[k]);
    }
    return best;
  }
  // Degenerate shift mode: restrict to the complement of 1 explicitly.
  RealMatrix basis = RealMatrix::Identity(n, n).leftCols(n - 1);
  basis.row(n - 1).setConstant(-1.0);
  const Eigen::HouseholderQR<RealMatrix> qr(basis);
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, n - 1);
  return symmetric_eigenvalues(q.transpose() * l * q)[0];
}

EquilibriumReport classify_equilibrium(const SymmetricCost& a, const PhaseVector& theta, double tol,
                                       double sync_tol) {
  require(tol > 0.0, ErrorCode::kInvalidArgument, "tolerance must be positive");
  require_real_square(a, theta.n());
  EquilibriumReport report{theta};
  report.velocity_norm = phase_velocity(a, theta.angles(), theta.coupling_constant()).norm();
  report.synchronized = is_synchronized(theta.angles(), sync_tol);
  report.potential = phase_potential(a, theta.angles());
  if (theta.n() < 2) {
    report.classification = EquilibriumClass::kSynchronized;
    return report;
  }
  const RealMatrix l = linearization_laplacian(a, theta.angles());
  report.hessian_min_eig = shift_free_lambda2(l);
  if (report.synchronized) {
    report.classification = EquilibriumClass::kSynchronized;
  } else if (report.velocity_norm > tol) {
    report.classification = EquilibriumClass::kNotConverged;
  } else {
    const double zero = std::max(tol, 1e-9 * std::max(1.0, symmetric_operator_norm(l)));
    report.classification = report.hessian_min_eig > zero ? EquilibriumClass::kStableNonsync
                                                          : EquilibriumClass::kSaddleOrUnstable;
  }
  return report;
}

EquilibriumReport simulate(const SymmetricCost& a, const PhaseVector& theta0, const SimOptions& opts,
                           std::ostream* trajectory, long stride) {
  require_real_square(a, theta0.n());
  require(stride >= 1, ErrorCode::kInvalidArgument, "trajectory stride must be >= 1");
  require(opts.sync_tol > 0.0, ErrorCode::kInvalidArgument, "sync_tol must be positive");
  const double a_norm = symmetric_operator_norm(a.real());
  const bool needs_norm = opts.time_step == 0.0 || opts.max_time == 0.0 || opts.stall_tol == 0.0;
  require(!needs_norm || a_norm > 0.0, ErrorCode::kInvalidArgument,
          "default time scales need a nonzero coupling matrix");
  const double dt = opts.time_step > 0.0 ? opts.time_step : 0.05 / a_norm;
  const double max_time = opts.max_time > 0.0 ? opts.max_time : 2000.0 / a_norm;
  const double stall = opts.stall_tol > 0.0 ? opts.stall_tol : 1e-9 * a_norm;
  require(dt > 0.0 && dt < max_time, ErrorCode::kInvalidArgument,
          "time_step must be positive and below max_time");
  const double k = theta0.coupling_constant();

  RealVector theta = theta0.angles();
  auto f = [&](const RealVector& x) { return phase_velocity(a, x, k); };
  double t = 0.0;
  long steps = 0;
  if (trajectory) {
    *trajectory << "t";
    for (Index i = 0; i < theta.size(); ++i) *trajectory << ",theta_" << i + 1;
    *trajectory << '\n';
    write_row(*trajectory, t, theta);
  }
  RealVector vel = f(theta);
  while (vel.norm() > stall && t + 0.5 * dt < max_time) {
    if (opts.integrator == Integrator::kRk4) {
      const RealVector k1 = vel;
      const RealVector k2 = f(theta + 0.5 * dt * k1);
      const RealVector k3 = f(theta + 0.5 * dt * k2);
      const RealVector k4 = f(theta + dt * k3);
      theta += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      theta += dt * vel;
    }
    ++steps;
    t = static_cast<double>(steps) * dt;
    require(theta.allFinite(), ErrorCode::kNotFinite,
            "phase state became non-finite at t = " + std::to_string(t));
    vel = f(theta);
    if (trajectory && steps % stride == 0) write_row(*trajectory, t, theta);
  }
  if (trajectory && steps % stride != 0) write_row(*trajectory, t, theta);

  EquilibriumReport report = classify_equilibrium(a, PhaseVector(theta, k), stall, opts.sync_tol);
  report.time = t;
  report.steps = steps;
  return report;
}

PhaseVector twisted_state(Index n, long q) {
  require(n >= 1, ErrorCode::kInvalidArgument, "n must be >= 1");
  RealVector theta(n);
  for (Index i = 0; i < n; ++i) {
    // Reduce q*i mod n first so large windings keep full precision.
    const long long w = (static_cast<long long>(q) * i) % n;
    theta[i] = 2.0 * std::numbers::pi * static_cast<double>(w) / static_cast<double>(n);
  }
  return PhaseVector(std::move(theta));
}

PhaseVector random_phases(Index n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x7E7Au));
  RealVector theta(n);
  for (Index i = 0; i < n; ++i) theta[i] = 2.0 * std::numbers::pi * rng.uniform();
  return PhaseVector(std::move(theta));
}

}  // namespace sphsync
