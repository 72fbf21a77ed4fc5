#pragma once

#include "sphsync/types.hpp"

#include <vector>

namespace sphsync {

/// DFT data of the k-nearest-neighbor circulant graph on n nodes, indexed
/// by m = 0..floor(n/2) (the rest follows from H[m] = H[n - m]).
struct CirculantSpectrum {
  Index n = 0;
  Index k = 0;
  std::vector<double> h_a;       // adjacency
  std::vector<double> h_l;       // Laplacian
  std::vector<double> h_ltilde;  // Hessian at the q = 1 twisted state
  /// max / min of H_L[m] over 1 <= m <= n/2, by full scan.
  double condition_number = 0.0;
  double lambda2_twisted = 0.0;  // H_Ltilde[1]
  double twisted_min = 0.0;      // min of H_Ltilde[m] over 1 <= m <= n/2
};

/// sin((2k+1) pi m / n) / sin(pi m / n), with the value 2k+1 at m = 0 mod n.
double dirichlet_ratio(Index n, Index k, long long m);

double circulant_h_a(Index n, Index k, long long m);
double circulant_h_l(Index n, Index k, long long m);
/// -H_L[1] + (H_L[m-1] + H_L[m+1]) / 2.
double circulant_h_ltilde(Index n, Index k, long long m);

CirculantSpectrum dft_spectrum(Index n, Index k);

/// All n eigenvalues (m = 0..n-1), ascending, for comparison with dense solvers.
RealVector circulant_laplacian_eigenvalues(Index n, Index k);
RealVector circulant_twisted_eigenvalues(Index n, Index k);

/// mu - sin(pi mu m) / (pi m).
double limit_h_l(double mu, long long m);
/// H_bar[2] / H_bar[1].
double limit_kappa(double mu);
/// Root in [0.6, 1] of 2 (1 - sin(pi mu)/(pi mu)) = 1 - sin(2 pi mu)/(2 pi mu),
/// by bisection to 1e-12; computed once.
double critical_density();
/// Left side minus right side of the defining equation.
double critical_density_residual(double mu);

struct FiniteSizeStability {
  double condition_number = 0.0;
  double lambda2_twisted = 0.0;
  double twisted_min = 0.0;
  bool predicts_spurious = false;     // H_Ltilde[1] > 0
  bool condition_above_two = false;   // condition_number > 2
};

FiniteSizeStability finite_size_stability(Index n, Index k);

}  // namespace sphsync
