#pragma once
// Pairwise correlation of interval variables and assembly of R.
//
// SCC is the midpoint-centred Pearson-style coefficient computed straight from
// samples. CCC is a geometric coefficient: each variant defines a one-parameter
// family of regularized 2D sets Omega(r), and the CCC of a sample pair is the
// r of largest |r| whose set still encloses every sample. For all variants the
// area of Omega(r) strictly decreases with |r|, so that r is the minimum-area
// enclosing member of the family.
//
//   ME        Omega(r) = {u : u^T [[1,r],[r,1]]^{-1} u <= 1}
//   MP-*      Omega(r) = {u : |S(r)^{-1} u| <= e}, S(r) from the variant's CSM
//             rule applied to [[1,r],[r,1]]

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/factorization.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/variant.hpp"

namespace ncvx {

/// Symmetric, unit-diagonal matrix of pairwise coefficients.
class CorrelationMatrix {
 public:
  CorrelationMatrix(Matrix entries, CorrelationMethod method, ModelVariant variant)
      : entries_(std::move(entries)), method_(method), variant_(variant) {
    if (!entries_.square() || entries_.rows() == 0) {
      throw Error(Errc::DimensionMismatch, "correlation matrix must be square and nonempty");
    }
    const std::size_t n = entries_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      if (entries_(i, i) != 1.0) throw Error(Errc::InvalidArgument, "correlation diagonal must be exactly 1");
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double v = entries_(i, j);
        if (!(std::abs(v) < 1.0)) {
          throw Error(Errc::InvalidArgument, "correlation entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") = " + std::to_string(v) +
                                                 " is outside (-1, 1)");
        }
        if (std::abs(v - entries_(j, i)) > 1e-12) {
          throw Error(Errc::InvalidArgument, "correlation matrix is not symmetric");
        }
      }
    }
  }

  static CorrelationMatrix identity(std::size_t n, CorrelationMethod method = CorrelationMethod::Given,
                                    ModelVariant variant = ModelVariant::Ellipsoid) {
    return CorrelationMatrix(Matrix::identity(n), method, variant);
  }

  std::size_t size() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  CorrelationMethod method() const noexcept { return method_; }
  ModelVariant variant() const noexcept { return variant_; }

 private:
  Matrix entries_;
  CorrelationMethod method_;
  ModelVariant variant_;
};

// ---------------------------------------------------------------------------
// Sample correlation coefficient

inline double scc(std::span<const double> xi, std::span<const double> xj, double mid_i, double mid_j) {
  if (xi.size() != xj.size()) throw Error(Errc::DimensionMismatch, "SCC columns differ in length");
  if (xi.size() < 2) throw Error(Errc::InvalidArgument, "SCC needs at least two samples");
  double sij = 0.0;
  double sii = 0.0;
  double sjj = 0.0;
  for (std::size_t s = 0; s < xi.size(); ++s) {
    const double di = xi[s] - mid_i;
    const double dj = xj[s] - mid_j;
    sij += di * dj;
    sii += di * di;
    sjj += dj * dj;
  }
  if (sii == 0.0 || sjj == 0.0) {
    throw Error(Errc::ZeroDeviation, "a column sits identically at its midpoint");
  }
  return std::clamp(sij / std::sqrt(sii * sjj), -1.0, 1.0);
}

/// Pairwise SCC of regularized samples (midpoints are 0 in U-space).
inline CorrelationMatrix scc_matrix(const Matrix& u) {
  const std::size_t n = u.cols();
  Matrix r = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector ci = u.column(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vector cj = u.column(j);
      const double v = scc(ci, cj, 0.0, 0.0);
      if (std::abs(v) >= 1.0) {
        throw Error(Errc::InvalidArgument, "SCC of columns " + std::to_string(i) + "," +
                                               std::to_string(j) + " is +-1; R would be singular");
      }
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return CorrelationMatrix(std::move(r), CorrelationMethod::Scc, ModelVariant::Ellipsoid);
}

inline CorrelationMatrix scc_matrix(const RegularizedSamples& u) { return scc_matrix(u.rows()); }

// ---------------------------------------------------------------------------
// Convex correlation coefficient

inline constexpr double kClamp = 1.0 - 1e-6;
inline constexpr double kMembershipTol = 1e-9;

enum class InfeasiblePolicy { Throw, Closest };

struct CccOptions {
  double grid_step = 1e-3;
  double bisection_tol = 1e-7;
  InfeasiblePolicy on_infeasible = InfeasiblePolicy::Throw;
};

enum class FitStatus { Ok, Degenerate, Infeasible };

struct CccFit {
  double r = 0.0;
  FitStatus status = FitStatus::Ok;
  /// Extremes of the feasible set of r (equal to r when only one side binds).
  double feasible_min = 0.0;
  double feasible_max = 0.0;
};

/// 2x2 correlation matrix [[1, r], [r, 1]].
inline Matrix correlation_2d(double r) { return Matrix{{1.0, r}, {r, 1.0}}; }

/// Characteristic map of the 2D family member: the matrix M such that a point
/// u is inside Omega(r) iff ||M u|| <= 1 (inf-norm for MP, quadratic form
/// u^T M u <= 1 for ME).
class PairDomain {
 public:
  PairDomain(ModelVariant variant, double r) : variant_(variant) {
    const Matrix r2 = correlation_2d(r);
    if (variant == ModelVariant::Ellipsoid) {
      map_ = inverse(r2);
    } else {
      map_ = inverse(shape_matrix_for(variant, r2).entries);
    }
  }

  /// Quadratic form (ME) or max |delta_k| (MP); inside iff <= 1.
  double level(double u1, double u2) const {
    if (variant_ == ModelVariant::Ellipsoid) {
      return map_(0, 0) * u1 * u1 + 2.0 * map_(0, 1) * u1 * u2 + map_(1, 1) * u2 * u2;
    }
    const double d1 = map_(0, 0) * u1 + map_(0, 1) * u2;
    const double d2 = map_(1, 0) * u1 + map_(1, 1) * u2;
    return std::max(std::abs(d1), std::abs(d2));
  }

  bool contains(double u1, double u2, double tol = kMembershipTol) const { return level(u1, u2) <= 1.0 + tol; }

  double max_level(const Matrix& pairs) const {
    double m = 0.0;
    for (std::size_t s = 0; s < pairs.rows(); ++s) m = std::max(m, level(pairs(s, 0), pairs(s, 1)));
    return m;
  }

 private:
  ModelVariant variant_;
  Matrix map_;
};

/// Area of the 2D family member. ME: pi sqrt(1 - r^2); MP: 4 |det S(r)|.
inline double pair_domain_area(ModelVariant variant, double r) {
  constexpr double kPi = 3.14159265358979323846;
  if (variant == ModelVariant::Ellipsoid) return kPi * std::sqrt(1.0 - r * r);
  return 4.0 * std::abs(determinant(shape_matrix_for(variant, correlation_2d(r)).entries));
}

namespace detail {

inline void require_pairs(const Matrix& pairs) {
  if (pairs.cols() != 2) throw Error(Errc::DimensionMismatch, "CCC fit expects N x 2 samples");
  if (pairs.rows() == 0) throw Error(Errc::InvalidArgument, "CCC fit needs at least one sample");
  for (double v : pairs.data()) {
    if (!(std::abs(v) <= 1.0 + kBoundSlack)) {
      throw Error(Errc::SampleOutsideMarginal, "regularized sample " + std::to_string(v) + " is outside [-1, 1]");
    }
  }
}

inline double sign_hint(const Matrix& pairs) {
  if (pairs.rows() < 2) return 0.0;
  try {
    return scc(pairs.column(0), pairs.column(1), 0.0, 0.0);
  } catch (const Error&) {
    return 0.0;
  }
}

/// Pick between the feasible extremes: larger |r| wins; on a tie use the sign
/// of the sample correlation, then the nonnegative root.
inline double choose_extreme(double lo, double hi, const Matrix& pairs) {
  const double a = std::abs(lo);
  const double b = std::abs(hi);
  if (std::abs(a - b) > 1e-9) return a > b ? lo : hi;
  const double hint = sign_hint(pairs);
  if (hint < 0.0) return lo;
  return hi;
}

inline CccFit finish_fit(double lo, double hi, const Matrix& pairs) {
  CccFit fit;
  fit.feasible_min = lo;
  fit.feasible_max = hi;
  fit.r = choose_extreme(lo, hi, pairs);
  if (std::abs(fit.r) >= kClamp - 1e-12) fit.status = FitStatus::Degenerate;
  return fit;
}

inline CccFit ellipse_fit(const Matrix& pairs, const CccOptions& options) {
  // Each sample confines r to [u1 u2 - w, u1 u2 + w], w = sqrt((1-u1^2)(1-u2^2)).
  double lo = -kClamp;
  double hi = kClamp;
  for (std::size_t s = 0; s < pairs.rows(); ++s) {
    const double a = std::clamp(pairs(s, 0), -1.0, 1.0);
    const double b = std::clamp(pairs(s, 1), -1.0, 1.0);
    const double w = std::sqrt(std::max(0.0, (1.0 - a * a) * (1.0 - b * b)));
    lo = std::max(lo, a * b - w);
    hi = std::min(hi, a * b + w);
  }
  if (lo <= hi) return finish_fit(lo, hi, pairs);
  if (options.on_infeasible == InfeasiblePolicy::Throw) {
    throw Error(Errc::InfeasibleFit, "no ellipse of the family encloses all samples (r must be >= " +
                                         std::to_string(lo) + " and <= " + std::to_string(hi) + ")");
  }
  CccFit fit;
  fit.r = 0.5 * (lo + hi);
  fit.status = FitStatus::Infeasible;
  fit.feasible_min = fit.feasible_max = fit.r;
  return fit;
}

inline bool feasible(ModelVariant variant, double r, const Matrix& pairs) {
  const PairDomain domain(variant, r);
  for (std::size_t s = 0; s < pairs.rows(); ++s)
    if (!domain.contains(pairs(s, 0), pairs(s, 1))) return false;
  return true;
}

/// Shrinks [inside, outside] onto the feasibility boundary, returning the
/// feasible end.
inline double bisect_boundary(ModelVariant variant, double inside, double outside, const Matrix& pairs,
                              double tol) {
  while (std::abs(outside - inside) > tol) {
    const double mid = 0.5 * (inside + outside);
    if (feasible(variant, mid, pairs)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

inline CccFit parallelepiped_fit(ModelVariant variant, const Matrix& pairs, const CccOptions& options) {
  const long steps = static_cast<long>(std::floor(kClamp / options.grid_step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * steps + 3));
  grid.push_back(-kClamp);
  for (long k = -steps; k <= steps; ++k) {
    const double r = static_cast<double>(k) * options.grid_step;
    if (std::abs(r) < kClamp) grid.push_back(r);
  }
  grid.push_back(kClamp);

  std::optional<std::size_t> first;
  std::optional<std::size_t> last;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (feasible(variant, grid[k], pairs)) {
      if (!first) first = k;
      last = k;
    }
  }
  if (!first) {
    if (options.on_infeasible == InfeasiblePolicy::Throw) {
      throw Error(Errc::InfeasibleFit, "no member of the " + std::string(variant_display_name(variant)) +
                                           " family encloses all samples");
    }
    CccFit fit;
    double best = 0.0;
    double best_level = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double level = PairDomain(variant, grid[k]).max_level(pairs);
      if (k == 0 || level < best_level) {
        best_level = level;
        best = grid[k];
      }
    }
    fit.r = best;
    fit.status = FitStatus::Infeasible;
    fit.feasible_min = fit.feasible_max = best;
    return fit;
  }
  double lo = grid[*first];
  double hi = grid[*last];
  if (*first > 0) lo = bisect_boundary(variant, lo, grid[*first - 1], pairs, options.bisection_tol);
  if (*last + 1 < grid.size()) hi = bisect_boundary(variant, hi, grid[*last + 1], pairs, options.bisection_tol);
  return finish_fit(lo, hi, pairs);
}

}  // namespace detail

/// Fits the CCC of one regularized sample pair (N x 2, entries in [-1, 1]).
inline CccFit ccc_fit(ModelVariant variant, const Matrix& u_pairs, const CccOptions& options = {}) {
  detail::require_pairs(u_pairs);
  if (variant == ModelVariant::Ellipsoid) return detail::ellipse_fit(u_pairs, options);
  return detail::parallelepiped_fit(variant, u_pairs, options);
}

// ---------------------------------------------------------------------------
// Assembly

struct PairCoefficient {
  std::size_t i;
  std::size_t j;
  double r;
};

inline CorrelationMatrix assemble_correlation_matrix(const std::vector<PairCoefficient>& pairwise, std::size_t n,
                                                     CorrelationMethod method, ModelVariant variant) {
  if (n == 0) throw Error(Errc::DimensionMismatch, "dimension must be positive");
  Matrix r = Matrix::identity(n);
  std::vector<bool> seen(n * n, false);
  for (const auto& p : pairwise) {
    if (p.i >= p.j || p.j >= n) {
      throw Error(Errc::IndexOutOfRange, "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) +
                                             ") must satisfy i < j < " + std::to_string(n));
    }
    if (seen[p.i * n + p.j]) {
      throw Error(Errc::DuplicatePair, "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")");
    }
    seen[p.i * n + p.j] = true;
    r(p.i, p.j) = p.r;
    r(p.j, p.i) = p.r;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!seen[i * n + j]) {
        throw Error(Errc::MissingPair, "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
  return CorrelationMatrix(std::move(r), method, variant);
}

struct PairFitReport {
  std::size_t i;
  std::size_t j;
  CccFit fit;
};

struct CccMatrixResult {
  CorrelationMatrix matrix;
  std::vector<PairFitReport> fits;

  bool any_degenerate() const {
    return std::any_of(fits.begin(), fits.end(),
                       [](const PairFitReport& f) { return f.fit.status == FitStatus::Degenerate; });
  }
};

/// Fits every pair i < j and assembles R. Pairs are independent, and results
/// are placed by index so the outcome does not depend on evaluation order.
inline CccMatrixResult ccc_matrix(ModelVariant variant, const RegularizedSamples& u, const CccOptions& options = {}) {
  const std::size_t n = u.dimension();
  std::vector<PairCoefficient> pairs;
  std::vector<PairFitReport> fits;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      CccFit fit;
      try {
        fit = ccc_fit(variant, u.pair(i, j), options);
      } catch (const Error& e) {
        if (e.code() != Errc::InfeasibleFit) throw;
        throw Error(Errc::InfeasibleFit, "variables " + std::to_string(i + 1) + " and " +
                                             std::to_string(j + 1) + ": " + e.what());
      }
      pairs.push_back({i, j, fit.r});
      fits.push_back({i, j, fit});
    }
  return {assemble_correlation_matrix(pairs, n, CorrelationMethod::Ccc, variant), std::move(fits)};
}

// ---------------------------------------------------------------------------
// Positive definiteness

inline constexpr double kPdEpsilon = 1e-8;

enum class PdPolicy { Strict, Repair };

struct PdReport {
  double min_eigenvalue_before = 0.0;
  double min_eigenvalue_after = 0.0;
  double max_entry_change = 0.0;
  bool repaired = false;
};

struct PdResult {
  CorrelationMatrix matrix;
  PdReport report;
};

/// Strict: pass R through when lambda_min >= 1e-8, otherwise throw. Repair:
/// clip eigenvalues at 1e-8 and rescale back to unit diagonal.
inline PdResult ensure_positive_definite(const CorrelationMatrix& r, PdPolicy policy) {
  const SymmetricEigen eig = symmetric_eigen(r.matrix());
  PdReport report;
  report.min_eigenvalue_before = eig.values.back();
  report.min_eigenvalue_after = eig.values.back();
  if (eig.values.back() >= kPdEpsilon) return {r, report};
  if (policy == PdPolicy::Strict) {
    throw Error(Errc::NotPositiveDefinite, "smallest eigenvalue of R is " + std::to_string(eig.values.back()));
  }
  const std::size_t n = r.size();
  // Rescaling to a unit diagonal can pull the smallest eigenvalue back under
  // the threshold, so the clipping floor grows until the result clears it.
  Matrix fixed(n, n);
  for (double floor = kPdEpsilon; floor <= 1.0; floor *= 2.0) {
    Matrix clipped(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * std::max(eig.values[k], floor) * eig.vectors(j, k);
        clipped(i, j) = s;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        fixed(i, j) = i == j ? 1.0 : clipped(i, j) / std::sqrt(clipped(i, i) * clipped(j, j));
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = 0.5 * (fixed(i, j) + fixed(j, i));
        fixed(i, j) = fixed(j, i) = v;
      }
    if (min_eigenvalue(fixed) >= kPdEpsilon) break;
  }
  report.repaired = true;
  report.max_entry_change = max_abs(fixed - r.matrix());
  report.min_eigenvalue_after = min_eigenvalue(fixed);
  return {CorrelationMatrix(std::move(fixed), r.method(), r.variant()), report};
}

}  // namespace ncvx
