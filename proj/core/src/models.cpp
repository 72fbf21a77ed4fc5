#include "sphsync/models.hpp"

#include "sphsync/error.hpp"
#include "sphsync/matrix_io.hpp"
#include "sphsync/rng.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sphsync {

namespace {

struct NamedFamily { Family value; std::string_view name; };
constexpr NamedFamily kFamilies[] = {
    {Family::kGaussianZ2, "gaussian_z2"},     {Family::kCensoredBlock, "censored_block"},
    {Family::kSbm, "sbm"},                    {Family::kSignedEr, "signed_er"},
    {Family::kCirculantKnn, "circulant_knn"}, {Family::kRandomRegular, "random_regular"},
    {Family::kFile, "file"},
};

constexpr std::uint64_t kGroundTruthTag = 0x5A;

void require_probability(double x, const char* field) {
  require(x >= 0.0 && x <= 1.0, ErrorCode::kInvalidArgument,
          std::string(field) + " must lie in [0, 1], got " + std::to_string(x));
}

void require_z(Index n, const SignVector& z) {
  require(z.n() == n, ErrorCode::kDimensionMismatch, "ground truth length differs from n");
  require(!z.is_complex(), ErrorCode::kInvalidArgument, "generators need a real sign vector");
}

double log_n(Index n) {
  require(n >= 3, ErrorCode::kInvalidArgument, "threshold formulas need n >= 3");
  return std::log(static_cast<double>(n));
}

}  // namespace

std::string_view to_string(Family family) {
  for (const auto& f : kFamilies) {
    if (f.value == family) return f.name;
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& f : kFamilies) {
    if (f.name == name) return f.value;
  }
  if (name == "gaussian") return Family::kGaussianZ2;
  if (name == "censored") return Family::kCensoredBlock;
  if (name == "circulant") return Family::kCirculantKnn;
  if (name == "regular") return Family::kRandomRegular;
  fail(ErrorCode::kInvalidArgument, "family: unknown value '" + std::string(name) + "'");
}

std::string_view to_string(GroundTruth gt) {
  switch (gt) {
    case GroundTruth::kAllOnes: return "all_ones";
    case GroundTruth::kBalanced: return "balanced";
    case GroundTruth::kRandom: return "random";
    case GroundTruth::kExplicit: return "explicit";
  }
  return "unknown";
}

GroundTruth parse_ground_truth(std::string_view name) {
  if (name == "all_ones" || name == "ones") return GroundTruth::kAllOnes;
  if (name == "balanced") return GroundTruth::kBalanced;
  if (name == "random") return GroundTruth::kRandom;
  if (name == "explicit") return GroundTruth::kExplicit;
  fail(ErrorCode::kInvalidArgument, "ground_truth: unknown value '" + std::string(name) + "'");
}

std::string_view to_string(Centering centering) {
  switch (centering) {
    case Centering::kNone: return "none";
    case Centering::kKnown: return "known";
    case Centering::kEstimated: return "estimated";
  }
  return "unknown";
}

Centering parse_centering(std::string_view name) {
  if (name == "none") return Centering::kNone;
  if (name == "known") return Centering::kKnown;
  if (name == "estimated") return Centering::kEstimated;
  fail(ErrorCode::kInvalidArgument, "centering: unknown value '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
  if (family != Family::kFile) {
    require(n >= 1, ErrorCode::kInvalidArgument, "n: must be positive");
  }
  switch (family) {
    case Family::kGaussianZ2:
      require(sigma >= 0.0 && std::isfinite(sigma), ErrorCode::kInvalidArgument,
              "sigma: must be finite and >= 0");
      break;
    case Family::kCensoredBlock:
    case Family::kSignedEr:
      require_probability(p, "p");
      require_probability(delta, "delta");
      break;
    case Family::kSbm:
      require_probability(p, "p");
      require_probability(q, "q");
      require(p >= q, ErrorCode::kInvalidArgument, "p: must be >= q");
      break;
    case Family::kCirculantKnn:
      require(k >= 0 && n >= 2 * k + 1, ErrorCode::kInvalidArgument, "k: need n >= 2k + 1");
      break;
    case Family::kRandomRegular:
      require(d >= 0 && d < n, ErrorCode::kInvalidArgument, "d: need 0 <= d < n");
      require((n * d) % 2 == 0, ErrorCode::kInvalidArgument, "d: n * d must be even");
      break;
    case Family::kFile:
      require(!path.empty(), ErrorCode::kInvalidArgument, "path: required for family 'file'");
      break;
  }
  if (ground_truth == GroundTruth::kExplicit) {
    require(explicit_z.has_value(), ErrorCode::kInvalidArgument,
            "z: explicit ground truth needs a vector");
    if (family != Family::kFile) {
      require(explicit_z->size() == n, ErrorCode::kInvalidArgument, "z: length must equal n");
    }
  }
}

SignVector ground_truth(const ModelSpec& spec) {
  const Index n = spec.n;
  switch (spec.family) {
    case Family::kSignedEr:
    case Family::kCirculantKnn:
    case Family::kRandomRegular:
      return SignVector::ones(n);
    default:
      break;
  }
  switch (spec.ground_truth) {
    case GroundTruth::kAllOnes:
      return SignVector::ones(n);
    case GroundTruth::kBalanced: {
      RealVector z(n);
      for (Index i = 0; i < n; ++i) z[i] = i < n / 2 ? 1.0 : -1.0;
      return SignVector::from_real(std::move(z));
    }
    case GroundTruth::kRandom: {
      Rng rng(derive_seed(spec.seed, kGroundTruthTag));
      RealVector z(n);
      for (Index i = 0; i < n; ++i) z[i] = (rng.next_u64() >> 63) ? -1.0 : 1.0;
      return SignVector::from_real(std::move(z));
    }
    case GroundTruth::kExplicit:
      return SignVector::from_real(*spec.explicit_z);
  }
  fail(ErrorCode::kInvalidArgument, "ground_truth: unhandled value");
}

Instance generate(const ModelSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::kGaussianZ2: {
      SignVector z = ground_truth(spec);
      return {gaussian_z2(spec.n, spec.sigma, z, spec.seed), z};
    }
    case Family::kCensoredBlock: {
      SignVector z = ground_truth(spec);
      return {censored_block(spec.n, spec.p, spec.delta, z, spec.seed), z};
    }
    case Family::kSbm: {
      SignVector z = ground_truth(spec);
      SymmetricCost a = sbm(spec.n, spec.p, spec.q, z, spec.seed);
      if (spec.centering == Centering::kNone) return {a, z};
      return {center(a, spec.centering, spec.p, spec.q), z};
    }
    case Family::kSignedEr:
      return {signed_er(spec.n, spec.p, spec.delta, spec.seed), SignVector::ones(spec.n)};
    case Family::kCirculantKnn:
      return {circulant_knn(spec.n, spec.k), SignVector::ones(spec.n)};
    case Family::kRandomRegular:
      return {random_regular(spec.n, spec.d, spec.seed), SignVector::ones(spec.n)};
    case Family::kFile: {
      SymmetricCost c = read_cost(spec.path);
      if (spec.ground_truth == GroundTruth::kExplicit) {
        SignVector z = SignVector::from_real(*spec.explicit_z);
        require(z.n() == c.n(), ErrorCode::kDimensionMismatch, "z: length differs from file size");
        return {c, z};
      }
      ModelSpec sized = spec;
      sized.n = c.n();
      return {c, ground_truth(sized)};
    }
  }
  fail(ErrorCode::kInvalidArgument, "family: unhandled value");
}

SymmetricCost gaussian_z2(Index n, double sigma, const SignVector& z, std::uint64_t seed) {
  require(sigma >= 0.0, ErrorCode::kInvalidArgument, "sigma must be >= 0");
  require_z(n, z);
  Rng rng(seed);
  const RealVector& zr = z.real();
  RealMatrix c = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = zr[i] * zr[j] + sigma * rng.normal();
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return SymmetricCost::from_real(std::move(c));
}

SymmetricCost censored_block(Index n, double p, double delta, const SignVector& z,
                             std::uint64_t seed) {
  require_probability(p, "p");
  require_probability(delta, "delta");
  require_z(n, z);
  Rng rng(seed);
  const RealVector& zr = z.real();
  const double p_agree = 0.5 * (1.0 + delta) * p;
  RealMatrix c = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double u = rng.uniform();
      double v = 0.0;
      if (u < p_agree) {
        v = zr[i] * zr[j];
      } else if (u < p) {
        v = -zr[i] * zr[j];
      }
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return SymmetricCost::from_real(std::move(c));
}

SymmetricCost sbm(Index n, double p, double q, const SignVector& z, std::uint64_t seed) {
  require_probability(p, "p");
  require_probability(q, "q");
  require(p >= q, ErrorCode::kInvalidArgument, "sbm needs p >= q");
  require_z(n, z);
  Rng rng(seed);
  const RealVector& zr = z.real();
  RealMatrix a = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double prob = zr[i] == zr[j] ? p : q;
      const double v = rng.uniform() < prob ? 1.0 : 0.0;
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return SymmetricCost::from_real(std::move(a));
}

SymmetricCost center(const SymmetricCost& a, Centering mode, std::optional<double> p,
                     std::optional<double> q) {
  require(!a.is_complex(), ErrorCode::kInvalidArgument, "centering needs a real matrix");
  double c = 0.0;
  switch (mode) {
    case Centering::kNone:
      return a;
    case Centering::kKnown:
      require(p.has_value() && q.has_value(), ErrorCode::kInvalidArgument,
              "centering 'known' needs p and q");
      c = 0.5 * (*p + *q);
      break;
    case Centering::kEstimated: {
      const auto n = static_cast<double>(a.n());
      c = a.real().sum() / (n * n);
      break;
    }
  }
  RealMatrix m = a.real();
  m.array() -= c;
  return SymmetricCost::from_real(std::move(m));
}

SymmetricCost signed_er(Index n, double p, double delta, std::uint64_t seed) {
  return censored_block(n, p, delta, SignVector::ones(n), seed);
}

SymmetricCost circulant_knn(Index n, Index k) {
  require(k >= 0 && n >= 2 * k + 1, ErrorCode::kInvalidArgument,
          "circulant_knn needs n >= 2k + 1 (n = " + std::to_string(n) + ", k = " +
              std::to_string(k) + ")");
  RealMatrix a = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index s = 1; s <= k; ++s) {
      a(i, (i + s) % n) = 1.0;
      a(i, (i - s + n) % n) = 1.0;
    }
  }
  return SymmetricCost::from_real(std::move(a));
}

SymmetricCost random_regular(Index n, Index d, std::uint64_t seed, int max_restarts) {
  require(d >= 0 && d < n, ErrorCode::kInvalidArgument, "random_regular needs 0 <= d < n");
  require((n * d) % 2 == 0, ErrorCode::kInvalidArgument, "random_regular needs n * d even");
  if (d == n - 1) {
    RealMatrix a = RealMatrix::Ones(n, n);
    a.diagonal().setZero();
    return SymmetricCost::from_real(std::move(a));
  }
  Rng rng(seed);
  const auto nn = static_cast<std::size_t>(n);
  std::vector<char> adj(nn * nn);
  std::vector<Index> points;
  std::vector<Index> remaining(nn);

  for (int restart = 0; restart <= max_restarts; ++restart) {
    std::fill(adj.begin(), adj.end(), 0);
    points.clear();
    for (Index v = 0; v < n; ++v) {
      for (Index t = 0; t < d; ++t) points.push_back(v);
    }
    std::fill(remaining.begin(), remaining.end(), d);

    auto suitable = [&](Index u, Index v) {
      return u != v && !adj[static_cast<std::size_t>(u) * nn + static_cast<std::size_t>(v)];
    };
    auto take = [&](std::size_t i, std::size_t j) {
      const Index u = points[i];
      const Index v = points[j];
      adj[static_cast<std::size_t>(u) * nn + static_cast<std::size_t>(v)] = 1;
      adj[static_cast<std::size_t>(v) * nn + static_cast<std::size_t>(u)] = 1;
      --remaining[static_cast<std::size_t>(u)];
      --remaining[static_cast<std::size_t>(v)];
      const std::size_t hi = std::max(i, j);
      const std::size_t lo = std::min(i, j);
      points[hi] = points.back();
      points.pop_back();
      points[lo] = points.back();
      points.pop_back();
    };

    bool stuck = false;
    while (!points.empty()) {
      bool paired = false;
      for (int attempt = 0; attempt < 64 && !paired; ++attempt) {
        const auto i = static_cast<std::size_t>(rng.below(points.size()));
        const auto j = static_cast<std::size_t>(rng.below(points.size()));
        if (i == j || !suitable(points[i], points[j])) continue;
        take(i, j);
        paired = true;
      }
      if (paired) continue;
      // Rejection keeps failing: pick uniformly among suitable vertex pairs,
      // weighted by remaining half-edges, or restart when none is left.
      std::vector<Index> open;
      for (Index v = 0; v < n; ++v) {
        if (remaining[static_cast<std::size_t>(v)] > 0) open.push_back(v);
      }
      double total = 0.0;
      for (std::size_t a = 0; a < open.size(); ++a) {
        for (std::size_t b = a + 1; b < open.size(); ++b) {
          if (suitable(open[a], open[b])) {
            total += static_cast<double>(remaining[static_cast<std::size_t>(open[a])]) *
                     static_cast<double>(remaining[static_cast<std::size_t>(open[b])]);
          }
        }
      }
      if (total == 0.0) {
        stuck = true;
        break;
      }
      double target = rng.uniform() * total;
      Index pick_u = -1;
      Index pick_v = -1;
      bool chosen = false;
      for (std::size_t a = 0; a < open.size() && !chosen; ++a) {
        for (std::size_t b = a + 1; b < open.size(); ++b) {
          if (!suitable(open[a], open[b])) continue;
          target -= static_cast<double>(remaining[static_cast<std::size_t>(open[a])]) *
                    static_cast<double>(remaining[static_cast<std::size_t>(open[b])]);
          pick_u = open[a];
          pick_v = open[b];
          if (target < 0.0) {
            chosen = true;
            break;
          }
        }
      }
      std::size_t iu = points.size();
      std::size_t iv = points.size();
      for (std::size_t t = 0; t < points.size(); ++t) {
        if (points[t] == pick_u && iu == points.size()) iu = t;
        if (points[t] == pick_v && iv == points.size()) iv = t;
      }
      take(iu, iv);
    }
    if (stuck) continue;

    RealMatrix a(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        a(i, j) = adj[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)] ? 1.0 : 0.0;
      }
    }
    return SymmetricCost::from_real(std::move(a));
  }
  fail(ErrorCode::kGeneratorBudgetExhausted,
       "random_regular: no simple graph after " + std::to_string(max_restarts + 1) +
           " pairing attempts (n = " + std::to_string(n) + ", d = " + std::to_string(d) + ")");
}

double gaussian_sigma_star(Index n) {
  return std::sqrt(static_cast<double>(n) / (2.0 * log_n(n)));
}

double censored_margin(Index n, double p, double delta) {
  require_probability(p, "p");
  require_probability(delta, "delta");
  return static_cast<double>(n) * p / log_n(n) * (1.0 - std::sqrt(1.0 - delta * delta));
}

double sbm_margin(Index n, double p, double q, double epsilon) {
  require_probability(p, "p");
  require_probability(q, "q");
  require(epsilon >= 0.0 && epsilon < 1.0, ErrorCode::kInvalidArgument, "epsilon must lie in [0, 1)");
  const double gap = std::sqrt((1.0 - epsilon) * p + epsilon * q) -
                     std::sqrt((1.0 - epsilon) * q + epsilon * p);
  return static_cast<double>(n) / log_n(n) * gap * gap;
}

ModelSpec spec_from_margin(const ModelSpec& base, double margin) {
  require(margin >= 0.0 && std::isfinite(margin), ErrorCode::kInvalidArgument,
          "margin_factor must be finite and >= 0");
  ModelSpec spec = base;
  const auto n = static_cast<double>(base.n);
  switch (base.family) {
    case Family::kGaussianZ2:
      spec.sigma = margin * gaussian_sigma_star(base.n);
      break;
    case Family::kCensoredBlock:
    case Family::kSignedEr: {
      const double info = 1.0 - std::sqrt(1.0 - base.delta * base.delta);
      require(info > 0.0, ErrorCode::kInvalidArgument,
              "delta: margin parametrization needs delta > 0");
      spec.p = margin * log_n(base.n) / (n * info);
      require(spec.p <= 1.0, ErrorCode::kInvalidArgument,
              "margin_factor: implied p = " + std::to_string(spec.p) + " exceeds 1");
      break;
    }
    case Family::kSbm: {
      const double scale = log_n(base.n) / n;
      const double b = base.q / scale;
      const double sqrt_a = std::sqrt(2.0) * margin + std::sqrt(b);
      spec.p = sqrt_a * sqrt_a * scale;
      require(spec.p <= 1.0, ErrorCode::kInvalidArgument,
              "margin_factor: implied p = " + std::to_string(spec.p) + " exceeds 1");
      break;
    }
    default:
      fail(ErrorCode::kInvalidArgument,
           "margin_factor: family '" + std::string(to_string(base.family)) + "' has no margin");
  }
  return spec;
}

double margin_of(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::kGaussianZ2:
      return spec.sigma / gaussian_sigma_star(spec.n);
    case Family::kCensoredBlock:
    case Family::kSignedEr:
      return censored_margin(spec.n, spec.p, spec.delta);
    case Family::kSbm: {
      const double scale = log_n(spec.n) / static_cast<double>(spec.n);
      return (std::sqrt(spec.p / scale) - std::sqrt(spec.q / scale)) / std::sqrt(2.0);
    }
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

std::optional<double> expected_degree(const ModelSpec& spec) {
  const auto n = static_cast<double>(spec.n);
  switch (spec.family) {
    case Family::kGaussianZ2:
      return n - 1.0;
    case Family::kCensoredBlock:
    case Family::kSignedEr:
      return spec.delta * spec.p * (n - 1.0);
    case Family::kSbm: {
      // mean_i [(s_i - 1) p - (n - s_i) q - c z_i <z, 1>], s_i = size of i's community
      const RealVector z = ground_truth(spec).real();
      const double sum = z.sum();
      const double c = spec.centering == Centering::kNone ? 0.0 : 0.5 * (spec.p + spec.q);
      double total = 0.0;
      const double plus = 0.5 * (n + sum);
      for (Index i = 0; i < spec.n; ++i) {
        const double same = z[i] > 0 ? plus : n - plus;
        total += (same - 1.0) * spec.p - (n - same) * spec.q - c * z[i] * sum;
      }
      return total / n;
    }
    case Family::kCirculantKnn:
      return 2.0 * static_cast<double>(spec.k);
    case Family::kRandomRegular:
      return static_cast<double>(spec.d);
    case Family::kFile:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace sphsync
