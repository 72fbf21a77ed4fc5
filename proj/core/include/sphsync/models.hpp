#pragma once

#include "sphsync/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sphsync {

enum class Family {
  kGaussianZ2,
  kCensoredBlock,
  kSbm,
  kSignedEr,
  kCirculantKnn,
  kRandomRegular,
  kFile,
};

enum class GroundTruth { kAllOnes, kBalanced, kRandom, kExplicit };
enum class Centering { kNone, kKnown, kEstimated };

std::string_view to_string(Family family);
std::string_view to_string(GroundTruth gt);
std::string_view to_string(Centering centering);
Family parse_family(std::string_view name);
GroundTruth parse_ground_truth(std::string_view name);
Centering parse_centering(std::string_view name);

/// Declarative description of one instance. Only the parameters of the
/// selected family are read.
struct ModelSpec {
  Family family = Family::kGaussianZ2;
  Index n = 0;
  double sigma = 0.0;  // gaussian_z2
  double p = 0.0;      // censored_block, signed_er, sbm
  double q = 0.0;      // sbm
  double delta = 0.0;  // censored_block, signed_er
  Centering centering = Centering::kKnown;  // sbm
  Index k = 0;         // circulant_knn
  Index d = 0;         // random_regular
  std::string path;    // file
  std::uint64_t seed = 0;
  GroundTruth ground_truth = GroundTruth::kAllOnes;
  std::optional<RealVector> explicit_z;

  /// Throws ErrorCode::kInvalidArgument naming the offending field.
  void validate() const;
};

struct Instance {
  SymmetricCost cost;
  SignVector z;
};

/// The planted vector of a spec. Coupling-graph families (signed_er,
/// circulant_knn, random_regular) always use all ones.
SignVector ground_truth(const ModelSpec& spec);

Instance generate(const ModelSpec& spec);

// Generators. All emit zero diagonals (except centered SBM, see center())
// and enumerate the pairs i < j in row-major order from a single stream
// Rng(seed).

SymmetricCost gaussian_z2(Index n, double sigma, const SignVector& z, std::uint64_t seed);
SymmetricCost censored_block(Index n, double p, double delta, const SignVector& z,
                             std::uint64_t seed);
/// Adjacency: edge with probability p inside a community, q across.
SymmetricCost sbm(Index n, double p, double q, const SignVector& z, std::uint64_t seed);
/// A - c 1 1^T with c = (p+q)/2 (known) or <A, 1 1^T> / n^2 (estimated),
/// subtracted from every entry including the diagonal.
SymmetricCost center(const SymmetricCost& a, Centering mode, std::optional<double> p = std::nullopt,
                     std::optional<double> q = std::nullopt);
SymmetricCost signed_er(Index n, double p, double delta, std::uint64_t seed);
SymmetricCost circulant_knn(Index n, Index k);
/// Simple d-regular graph by incremental random pairing of half-edges with
/// restarts (Steger-Wormald). d = n - 1 gives K_n.
SymmetricCost random_regular(Index n, Index d, std::uint64_t seed, int max_restarts = 1000);

/// sqrt(n / (2 log n)).
double gaussian_sigma_star(Index n);
/// n p / log n * (1 - sqrt(1 - delta^2)); recovery threshold 1.
double censored_margin(Index n, double p, double delta);
/// (n / log n) (sqrt((1-e) p + e q) - sqrt((1-e) q + e p))^2; threshold 2.
double sbm_margin(Index n, double p, double q, double epsilon = 0.0);

/// Spec of one family with its signal parameter set from a margin factor:
///   gaussian_z2:    sigma = margin * sigma_star(n)
///   censored_block: p solved from censored_margin(n, p, delta) = margin (delta from base)
///   sbm:            (sqrt(a) - sqrt(b)) / sqrt(2) = margin with b = base.q * n / log n fixed,
///                   p = a log n / n, q = b log n / n
ModelSpec spec_from_margin(const ModelSpec& base, double margin);
/// Inverse of spec_from_margin; NaN for families without a margin.
double margin_of(const ModelSpec& spec);

/// Expected mean of diag(C z z^T) under the model (used as the uniform d_bar
/// of the rank-one reference); nullopt for non-random families.
std::optional<double> expected_degree(const ModelSpec& spec);

}  // namespace sphsync
