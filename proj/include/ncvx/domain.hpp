#pragma once
// Interval variables, sample containers and the affine map between physical
// X-space and the standardized U-space where every marginal is [-1, 1].

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ncvx/error.hpp"
#include "ncvx/linalg.hpp"

namespace ncvx {

/// Absolute slack used when comparing samples against interval bounds.
inline constexpr double kBoundSlack = 1e-12;

class Interval {
 public:
  Interval(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper)) {
      throw Error(Errc::DegenerateInterval, "non-finite interval bound");
    }
    if (!(lower < upper)) {
      throw Error(Errc::DegenerateInterval, "lower bound " + std::to_string(lower) +
                                                " is not below upper bound " + std::to_string(upper));
    }
  }

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double midpoint() const noexcept { return 0.5 * (lower_ + upper_); }
  double radius() const noexcept { return 0.5 * (upper_ - lower_); }

  bool contains(double x, double slack = kBoundSlack) const noexcept {
    return x >= lower_ - slack && x <= upper_ + slack;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lower_;
  double upper_;
};

/// Ordered, uniquely named interval variables.
class MarginalSpec {
 public:
  MarginalSpec(std::vector<std::string> names, std::vector<Interval> intervals)
      : names_(std::move(names)), intervals_(std::move(intervals)) {
    if (names_.empty()) throw Error(Errc::DimensionMismatch, "marginal spec needs at least one variable");
    if (names_.size() != intervals_.size()) {
      throw Error(Errc::DimensionMismatch, "names and intervals differ in length");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
      if (name.empty()) throw Error(Errc::InvalidArgument, "empty variable name");
      if (!seen.insert(name).second) throw Error(Errc::DuplicateName, "variable '" + name + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  const Interval& interval(std::size_t i) const { return intervals_.at(i); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw Error(Errc::NameMismatch, "no variable named '" + name + "'");
  }

  Vector midpoints() const {
    Vector m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = intervals_[i].midpoint();
    return m;
  }

  Vector radii() const {
    Vector r(size());
    for (std::size_t i = 0; i < size(); ++i) r[i] = intervals_[i].radius();
    return r;
  }

  Vector lowers() const {
    Vector v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = intervals_[i].lower();
    return v;
  }

  Vector uppers() const {
    Vector v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = intervals_[i].upper();
    return v;
  }

  /// D_X = diag(radii).
  Matrix scaling() const {
    const Vector r = radii();
    return Matrix::diagonal(r);
  }

  /// Product of the radii, i.e. det(D_X).
  double scaling_determinant() const {
    double d = 1.0;
    for (const auto& iv : intervals_) d *= iv.radius();
    return d;
  }

  friend bool operator==(const MarginalSpec&, const MarginalSpec&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> intervals_;
};

inline MarginalSpec make_marginal_spec(
    const std::vector<std::tuple<std::string, double, double>>& triples) {
  std::vector<std::string> names;
  std::vector<Interval> intervals;
  for (const auto& [name, lo, hi] : triples) {
    names.push_back(name);
    intervals.emplace_back(lo, hi);
  }
  return MarginalSpec(std::move(names), std::move(intervals));
}

/// The n-dimensional standard spec [-1, 1]^n with names u1..un.
inline MarginalSpec standard_spec(std::size_t n) {
  std::vector<std::tuple<std::string, double, double>> t;
  for (std::size_t i = 0; i < n; ++i) t.emplace_back("u" + std::to_string(i + 1), -1.0, 1.0);
  return make_marginal_spec(t);
}

/// N_s x n physical samples with named columns.
class SampleSet {
 public:
  SampleSet(std::vector<std::string> names, Matrix rows)
      : names_(std::move(names)), rows_(std::move(rows)) {
    if (rows_.rows() == 0) throw Error(Errc::DimensionMismatch, "sample set is empty");
    if (rows_.cols() != names_.size()) {
      throw Error(Errc::DimensionMismatch, "sample columns (" + std::to_string(rows_.cols()) +
                                               ") do not match names (" +
                                               std::to_string(names_.size()) + ")");
    }
    for (double v : rows_.data())
      if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite sample entry");
  }

  std::size_t count() const noexcept { return rows_.rows(); }
  std::size_t dimension() const noexcept { return rows_.cols(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const Matrix& rows() const noexcept { return rows_; }
  std::span<const double> row(std::size_t s) const { return rows_.row(s); }

  /// Columns reordered to follow spec order; throws NameMismatch when the
  /// name sets differ.
  SampleSet aligned_to(const MarginalSpec& spec) const {
    if (names_.size() != spec.size()) {
      throw Error(Errc::NameMismatch, "samples have " + std::to_string(names_.size()) +
                                          " columns, spec has " + std::to_string(spec.size()));
    }
    std::vector<std::size_t> src(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const auto& want = spec.names()[i];
      bool found = false;
      for (std::size_t j = 0; j < names_.size(); ++j) {
        if (names_[j] == want) {
          src[i] = j;
          found = true;
          break;
        }
      }
      if (!found) throw Error(Errc::NameMismatch, "samples lack column '" + want + "'");
    }
    Matrix out(count(), spec.size());
    for (std::size_t s = 0; s < count(); ++s)
      for (std::size_t i = 0; i < spec.size(); ++i) out(s, i) = rows_(s, src[i]);
    return SampleSet(spec.names(), std::move(out));
  }

 private:
  std::vector<std::string> names_;
  Matrix rows_;
};

/// Samples mapped to U-space; entries lie in [-1, 1] when built by regularize.
class RegularizedSamples {
 public:
  explicit RegularizedSamples(Matrix rows) : rows_(std::move(rows)) {}
  std::size_t count() const noexcept { return rows_.rows(); }
  std::size_t dimension() const noexcept { return rows_.cols(); }
  const Matrix& rows() const noexcept { return rows_; }

  /// The (i, j) column pair as an N_s x 2 matrix.
  Matrix pair(std::size_t i, std::size_t j) const {
    Matrix p(count(), 2);
    for (std::size_t s = 0; s < count(); ++s) {
      p(s, 0) = rows_(s, i);
      p(s, 1) = rows_(s, j);
    }
    return p;
  }

 private:
  Matrix rows_;
};

struct SampleViolation {
  std::size_t row;
  std::size_t column;
  double value;
};

struct ValidationReport {
  std::vector<SampleViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Lists every entry outside its marginal interval. Columns are aligned to
/// the marginal spec by name first.
inline ValidationReport validate_samples(const MarginalSpec& spec, const SampleSet& samples) {
  const SampleSet aligned = samples.aligned_to(spec);
  ValidationReport report;
  for (std::size_t s = 0; s < aligned.count(); ++s)
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double v = aligned.rows()(s, i);
      if (!spec.interval(i).contains(v)) report.violations.push_back({s, i, v});
    }
  return report;
}

inline Vector regularize_point(const MarginalSpec& spec, std::span<const double> x) {
  if (x.size() != spec.size()) throw Error(Errc::DimensionMismatch, "point dimension");
  Vector u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& iv = spec.interval(i);
    u[i] = (x[i] - iv.midpoint()) / iv.radius();
  }
  return u;
}

inline Vector deregularize_point(const MarginalSpec& spec, std::span<const double> u) {
  if (u.size() != spec.size()) throw Error(Errc::DimensionMismatch, "point dimension");
  Vector x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto& iv = spec.interval(i);
    x[i] = iv.midpoint() + iv.radius() * u[i];
  }
  return x;
}

/// u = D_X^{-1}(x - X^m) row by row. Samples outside their marginal interval
/// are rejected rather than clipped.
inline RegularizedSamples regularize(const MarginalSpec& spec, const SampleSet& samples) {
  const SampleSet aligned = samples.aligned_to(spec);
  const ValidationReport report = validate_samples(spec, aligned);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(Errc::SampleOutsideMarginal,
                "row " + std::to_string(v.row + 1) + ", column '" + spec.names()[v.column] +
                    "' value " + std::to_string(v.value) + " (" +
                    std::to_string(report.violations.size()) + " violation(s) total)");
  }
  Matrix u(aligned.count(), spec.size());
  for (std::size_t s = 0; s < aligned.count(); ++s) {
    const Vector r = regularize_point(spec, aligned.row(s));
    for (std::size_t i = 0; i < spec.size(); ++i) {
      // Clamp the sub-slack overshoot so the [-1, 1] invariant is exact.
      u(s, i) = std::clamp(r[i], -1.0, 1.0);
    }
  }
  return RegularizedSamples(std::move(u));
}

inline Matrix deregularize(const MarginalSpec& spec, const Matrix& u_points) {
  if (u_points.cols() != spec.size()) {
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(spec.size()) +
                                             " columns, got " + std::to_string(u_points.cols()));
  }
  Matrix x(u_points.rows(), u_points.cols());
  for (std::size_t s = 0; s < u_points.rows(); ++s) {
    const Vector r = deregularize_point(spec, u_points.row(s));
    for (std::size_t i = 0; i < r.size(); ++i) x(s, i) = r[i];
  }
  return x;
}

}  // namespace ncvx
