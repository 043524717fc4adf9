#pragma once
// Uniform sampling inside convex models, Monte-Carlo volume estimates and the
// unbiasedness harness (recover R from draws through the SCC).
//
// Streams come from std::mt19937_64, whose output sequence is fixed by the
// standard. Uniform and Gaussian variates are derived from the raw 64-bit
// words by hand, since the standard distributions are implementation-defined.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ncvx/correlation.hpp"
#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/factorization.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/model.hpp"

namespace ncvx {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Factor P with P P^T = R used to map the unit ball onto an ME domain.
enum class BallFactor { Cholesky, SymmetricSqrt };

/// Point uniform in the unit n-ball: Gaussian direction times U^{1/n}.
inline Vector uniform_in_ball(Rng& rng, std::size_t n) {
  Vector v(n);
  double norm = 0.0;
  do {
    for (auto& c : v) c = rng.normal();
    norm = norm2(v);
  } while (norm == 0.0);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  for (auto& c : v) c *= radius / norm;
  return v;
}

inline Vector uniform_in_cube(Rng& rng, std::size_t n) {
  Vector v(n);
  for (auto& c : v) c = rng.symmetric();
  return v;
}

/// The linear map taking the standardized set (ball or cube) onto Omega_U.
inline Matrix regularized_generator(const ConvexModel& model, BallFactor factor = BallFactor::Cholesky) {
  if (model.shape()) return model.shape()->entries;
  const Matrix& r = model.correlation().matrix();
  return factor == BallFactor::Cholesky ? cholesky(r) : symmetric_sqrt(r).entries;
}

/// `count` points uniform in Omega_U (regularized coordinates).
inline Matrix sample_uniform_regularized(const ConvexModel& model, std::size_t count, std::uint64_t seed,
                                         BallFactor factor = BallFactor::Cholesky) {
  if (count == 0) throw Error(Errc::InvalidArgument, "sample count must be positive");
  const std::size_t n = model.dimension();
  const Matrix p = regularized_generator(model, factor);
  const bool cube = model.shape().has_value();
  Rng rng(seed);
  Matrix out(count, n);
  for (std::size_t s = 0; s < count; ++s) {
    const Vector delta = cube ? uniform_in_cube(rng, n) : uniform_in_ball(rng, n);
    const Vector u = p * delta;
    for (std::size_t i = 0; i < n; ++i) out(s, i) = u[i];
  }
  return out;
}

/// `count` points uniform in Omega_X (physical coordinates).
inline Matrix sample_uniform(const ConvexModel& model, std::size_t count, std::uint64_t seed,
                             BallFactor factor = BallFactor::Cholesky) {
  return deregularize(model.spec(), sample_uniform_regularized(model, count, seed, factor));
}

struct VolumeEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t draws = 0;
};

/// Hit ratio of uniform draws over the marginal box, estimating nu.
inline VolumeEstimate mc_volume(const ConvexModel& model, std::size_t count, std::uint64_t seed) {
  if (count < 1000) throw Error(Errc::InvalidArgument, "mc_volume needs at least 1000 draws");
  const std::size_t n = model.dimension();
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < count; ++s) {
    const Vector u = uniform_in_cube(rng, n);
    if (model.regularized_level(u) <= 1.0 + kMembershipTol) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(count);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(count)), hits, count};
}

enum class Verdict { UnbiasedConsistent, BiasedDetected };

inline std::string_view verdict_tag(Verdict v) {
  return v == Verdict::UnbiasedConsistent ? "unbiased-consistent" : "biased-detected";
}

/// Allowed max |recovered - true| SCC error for a given number of draws.
inline double unbiasedness_tolerance(std::size_t draws) {
  return 4.0 / std::sqrt(static_cast<double>(draws)) + 0.005;
}

struct UnbiasednessReport {
  ModelVariant variant = ModelVariant::Ellipsoid;
  CorrelationMethod method = CorrelationMethod::Scc;
  Matrix true_r;
  Matrix recovered_r;
  double max_abs_error = 0.0;
  Verdict verdict = Verdict::UnbiasedConsistent;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
};

/// Draws uniformly from the variant's regularized domain built on R and
/// recomputes the SCC matrix from the draws.
inline UnbiasednessReport verify_unbiasedness(ModelVariant variant, const Matrix& r, std::size_t draws,
                                              std::uint64_t seed, BallFactor factor = BallFactor::Cholesky) {
  if (draws < 10000) throw Error(Errc::InvalidArgument, "unbiasedness check needs at least 10^4 draws");
  const CorrelationMatrix truth(r, CorrelationMethod::Given, variant);
  const ConvexModel model = build_model(variant, standard_spec(truth.size()), truth);
  const Matrix u = sample_uniform_regularized(model, draws, seed, factor);
  UnbiasednessReport report;
  report.variant = variant;
  report.true_r = r;
  report.recovered_r = scc_matrix(u).matrix();
  report.max_abs_error = max_abs(report.recovered_r - r);
  report.verdict =
      report.max_abs_error <= unbiasedness_tolerance(draws) ? Verdict::UnbiasedConsistent : Verdict::BiasedDetected;
  report.draws = draws;
  report.seed = seed;
  return report;
}

/// Kolmogorov-Smirnov statistic of `values` against Uniform(-1, 1).
inline double ks_uniform_statistic(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::InvalidArgument, "KS statistic of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double cdf = std::clamp((values[k] + 1.0) / 2.0, 0.0, 1.0);
    d = std::max({d, static_cast<double>(k + 1) / n - cdf, cdf - static_cast<double>(k) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace ncvx
