#pragma once
// Convex models over a marginal spec: construction, membership, fitness,
// volume ratios and the ME coordinate-plane projection.
//
// ME:  Omega_X = {x : (x - m)^T G_E (x - m) <= 1},   G_E = (D R D)^{-1}
// MP:  Omega_X = {x : |G_p (x - m)|_inf <= 1},       G_p = (D S)^{-1}

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncvx/correlation.hpp"
#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/factorization.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/variant.hpp"

namespace ncvx {

inline constexpr double kConditionWarning = 1e12;

struct Membership {
  bool inside = false;
  /// Quadratic form (ME) or largest |delta_k| (MP); inside iff <= 1 + 1e-9.
  double level = 0.0;
};

class ConvexModel {
 public:
  ModelVariant variant() const noexcept { return variant_; }
  const MarginalSpec& spec() const noexcept { return spec_; }
  const CorrelationMatrix& correlation() const noexcept { return correlation_; }
  std::size_t dimension() const noexcept { return spec_.size(); }

  /// Row-normalized shape matrix S; present for MP variants only.
  const std::optional<ShapeMatrix>& shape() const noexcept { return shape_; }

  /// C_X = D R D for ME models.
  const std::optional<Matrix>& covariance() const noexcept { return covariance_; }

  /// G_E for ME, G_p for MP.
  const Matrix& characteristic() const noexcept { return characteristic_; }

  /// Matrix of the defining inequality in U-space: R^{-1} (ME) or S^{-1} (MP).
  const Matrix& regularized_characteristic() const noexcept { return regularized_characteristic_; }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Defining level of a U-space point.
  double regularized_level(std::span<const double> u) const {
    if (u.size() != dimension()) throw Error(Errc::DimensionMismatch, "point dimension");
    const Vector d = regularized_characteristic_ * u;
    return is_parallelepiped(variant_) ? norm_inf(d) : dot(u, d);
  }

  Membership contains(std::span<const double> x, double tol = kMembershipTol) const {
    if (x.size() != dimension()) {
      throw Error(Errc::DimensionMismatch, "point has " + std::to_string(x.size()) + " coordinates, model has " +
                                               std::to_string(dimension()));
    }
    const Vector u = regularize_point(spec_, x);
    const double level = regularized_level(u);
    return {level <= 1.0 + tol, level};
  }

  Membership contains(const Vector& x, double tol = kMembershipTol) const {
    return contains(std::span<const double>(x), tol);
  }

  /// Builds a model from its validated parts. `shape` must be given for MP
  /// variants and is ignored for ME.
  static ConvexModel from_parts(ModelVariant variant, MarginalSpec spec, CorrelationMatrix correlation,
                                std::optional<ShapeMatrix> shape) {
    return ConvexModel(variant, std::move(spec), std::move(correlation), std::move(shape));
  }

 private:
  ConvexModel(ModelVariant variant, MarginalSpec spec, CorrelationMatrix correlation, std::optional<ShapeMatrix> shape)
      : variant_(variant), spec_(std::move(spec)), correlation_(std::move(correlation)) {
    const std::size_t n = spec_.size();
    if (correlation_.size() != n) {
      throw Error(Errc::DimensionMismatch, "correlation matrix is " + std::to_string(correlation_.size()) +
                                               "x" + std::to_string(correlation_.size()) + " but spec has " +
                                               std::to_string(n) + " variables");
    }
    const Matrix d = spec_.scaling();
    if (variant_ == ModelVariant::Ellipsoid) {
      const double lambda_min = min_eigenvalue(correlation_.matrix());
      if (lambda_min < kPdEpsilon) {
        throw Error(Errc::NotPositiveDefinite, "smallest eigenvalue of R is " + std::to_string(lambda_min));
      }
      Matrix c = d * correlation_.matrix() * d;
      // Diagonal is exactly r_i^2; products like r * 1 * r are exact but make it explicit.
      for (std::size_t i = 0; i < n; ++i) c(i, i) = spec_.interval(i).radius() * spec_.interval(i).radius();
      characteristic_ = inverse(c);
      regularized_characteristic_ = inverse(correlation_.matrix());
      covariance_ = std::move(c);
      note_condition(lambda_min);
    } else {
      if (!shape) throw Error(Errc::InvalidArgument, "parallelepiped model needs a shape matrix");
      if (shape->entries.rows() != n || !shape->entries.square()) {
        throw Error(Errc::DimensionMismatch, "shape matrix dimension");
      }
      const double det = determinant(shape->entries);
      if (!(std::abs(det) >= kSingularShapeDeterminant)) {
        throw Error(Errc::SingularShape, "|det S| = " + std::to_string(std::abs(det)));
      }
      regularized_characteristic_ = inverse(shape->entries);
      characteristic_ = inverse(d * shape->entries);
      shape_ = std::move(shape);
      const double cond = max_abs(shape_->entries) * max_abs(regularized_characteristic_) * static_cast<double>(n);
      if (cond > kConditionWarning) warnings_.push_back("shape matrix condition estimate " + std::to_string(cond));
    }
  }

  void note_condition(double lambda_min) {
    const double lambda_max = symmetric_eigen(correlation_.matrix()).values.front();
    const double cond = lambda_max / lambda_min;
    if (cond > kConditionWarning) warnings_.push_back("correlation condition number " + std::to_string(cond));
  }

  ModelVariant variant_;
  MarginalSpec spec_;
  CorrelationMatrix correlation_;
  std::optional<ShapeMatrix> shape_;
  std::optional<Matrix> covariance_;
  Matrix characteristic_;
  Matrix regularized_characteristic_;
  std::vector<std::string> warnings_;
};

/// Constructs the variant's model from a marginal spec and a PD correlation
/// matrix. MP variants derive S with their CSM rule.
inline ConvexModel build_model(ModelVariant variant, const MarginalSpec& spec, const CorrelationMatrix& r) {
  if (r.size() != spec.size()) {
    throw Error(Errc::DimensionMismatch, "correlation matrix does not match the marginal spec dimension");
  }
  const double lambda_min = min_eigenvalue(r.matrix());
  if (lambda_min < kPdEpsilon) {
    throw Error(Errc::NotPositiveDefinite, "smallest eigenvalue of R is " + std::to_string(lambda_min));
  }
  std::optional<ShapeMatrix> shape;
  if (is_parallelepiped(variant)) shape = shape_matrix_for(variant, r.matrix());
  return ConvexModel::from_parts(variant, spec, r, std::move(shape));
}

// ---------------------------------------------------------------------------
// Assessment

/// Gamma((n + 2) / 2) for a positive integer n.
inline double gamma_half_dimension(std::size_t n) {
  if (n % 2 == 0) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n / 2; ++k) f *= static_cast<double>(k);
    return f;
  }
  // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi), here k = (n + 1) / 2.
  double g = std::sqrt(std::numbers::pi);
  for (std::size_t m = 1; m <= n; m += 2) g *= static_cast<double>(m) / 2.0;
  return g;
}

/// Volume of the unit n-ball.
inline double unit_ball_volume(std::size_t n) {
  return std::pow(std::numbers::pi, static_cast<double>(n) / 2.0) / gamma_half_dimension(n);
}

struct VolumeRatio {
  double nu = 0.0;
  double nu_bar = 0.0;
};

inline VolumeRatio volume_ratio(const ConvexModel& model) {
  const std::size_t n = model.dimension();
  double nu = 0.0;
  if (model.variant() == ModelVariant::Ellipsoid) {
    nu = unit_ball_volume(n) * std::sqrt(determinant(model.correlation().matrix())) / std::ldexp(1.0, static_cast<int>(n));
  } else {
    nu = std::abs(determinant(model.shape()->entries));
  }
  return {nu, std::pow(nu, 1.0 / static_cast<double>(n))};
}

struct AssessmentReport {
  std::size_t enclosed = 0;
  std::size_t total = 0;
  double kappa = 0.0;
  double nu = 0.0;
  double nu_bar = 0.0;
  /// Zero-based indices of samples outside the domain.
  std::vector<std::size_t> excluded;
  /// Defining level of every sample, in input order.
  std::vector<double> levels;
};

/// Counts samples inside the domain. Columns are matched to the model by name.
inline AssessmentReport fitness(const ConvexModel& model, const SampleSet& samples) {
  const SampleSet aligned = samples.aligned_to(model.spec());
  AssessmentReport report;
  report.total = aligned.count();
  for (std::size_t s = 0; s < aligned.count(); ++s) {
    const Membership m = model.contains(aligned.row(s));
    report.levels.push_back(m.level);
    if (m.inside) {
      ++report.enclosed;
    } else {
      report.excluded.push_back(s);
    }
  }
  report.kappa = static_cast<double>(report.enclosed) / static_cast<double>(report.total);
  return report;
}

/// Fitness plus volume ratios.
inline AssessmentReport assess(const ConvexModel& model, const SampleSet& samples) {
  AssessmentReport report = fitness(model, samples);
  const VolumeRatio v = volume_ratio(model);
  report.nu = v.nu;
  report.nu_bar = v.nu_bar;
  return report;
}

/// Projection of an ME domain onto the (U_i, U_j) plane, as the 2x2
/// correlation matrix of the projected ellipse. Indices are zero-based.
inline Matrix project_2d(const ConvexModel& model, std::size_t i, std::size_t j) {
  if (model.variant() != ModelVariant::Ellipsoid) {
    throw Error(Errc::NotEllipsoid, "exact projection is defined for ME models only");
  }
  const std::size_t n = model.dimension();
  if (i >= n || j >= n || i == j) {
    throw Error(Errc::IndexOutOfRange, "projection indices (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") for a " + std::to_string(n) + "-dimensional model");
  }
  const Matrix& r = model.correlation().matrix();
  return Matrix{{r(i, i), r(i, j)}, {r(j, i), r(j, j)}};
}

/// Images of the 2^n cube vertices under u = S delta (MP models, U-space).
inline Matrix parallelepiped_vertices(const ConvexModel& model) {
  if (!model.shape()) throw Error(Errc::InvalidArgument, "vertices exist for MP models only");
  const std::size_t n = model.dimension();
  if (n > 20) throw Error(Errc::InvalidArgument, "too many vertices to enumerate");
  const Matrix& s = model.shape()->entries;
  const std::size_t count = std::size_t{1} << n;
  Matrix out(count, n);
  Vector delta(n);
  for (std::size_t v = 0; v < count; ++v) {
    for (std::size_t k = 0; k < n; ++k) delta[k] = (v >> k) & 1U ? 1.0 : -1.0;
    const Vector u = s * delta;
    for (std::size_t k = 0; k < n; ++k) out(v, k) = u[k];
  }
  return out;
}

}  // namespace ncvx
