#pragma once
// Non-probabilistic reliability index: the smallest standardized distance
// from the origin (the domain midpoint) to the limit-state surface g = 0.
//
// Standardized coordinates are delta with x = m + D P delta, where P = chol(R)
// for ME models and P = S for MP models, so the domain is the unit ball of the
// Euclidean norm (ME) or of the infinity norm (MP).
//
// Search: rays from the origin along 2n axis and 2n^2 seeded random
// directions. Along each ray the first sign change of g is bracketed by a scan
// out to eta_max and then bisected. Each start's direction is refined by a
// compass search on the ray distance; with the Euclidean norm the result is
// polished further with HL-RF steps that use central-difference gradients.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncvx/error.hpp"
#include "ncvx/expression.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/model.hpp"
#include "ncvx/sampling.hpp"

namespace ncvx {

enum class NormKind { Euclidean, Infinity };

inline double norm_of(NormKind kind, std::span<const double> v) {
  return kind == NormKind::Euclidean ? norm2(v) : norm_inf(v);
}

inline NormKind default_norm(const ConvexModel& model) {
  return is_parallelepiped(model.variant()) ? NormKind::Infinity : NormKind::Euclidean;
}

/// Map from physical space to standardized coordinates.
inline Vector to_delta(const ConvexModel& model, std::span<const double> x) {
  const Vector u = regularize_point(model.spec(), x);
  if (model.shape()) return model.regularized_characteristic() * u;
  const Matrix p = cholesky(model.correlation().matrix());
  return LuDecomposition(p).solve(u);
}

inline Vector to_delta(const ConvexModel& model, const Vector& x) { return to_delta(model, std::span<const double>(x)); }

inline Vector from_delta(const ConvexModel& model, std::span<const double> delta) {
  if (delta.size() != model.dimension()) throw Error(Errc::DimensionMismatch, "delta dimension");
  return deregularize_point(model.spec(), regularized_generator(model) * delta);
}

inline Vector from_delta(const ConvexModel& model, const Vector& delta) {
  return from_delta(model, std::span<const double>(delta));
}

struct ReliabilityOptions {
  std::optional<NormKind> norm;
  /// Constants for identifiers in g that are not model variables.
  std::map<std::string, double> bindings;
  double eta_max = 10.0;
  /// Bisection stops once |g| <= g_tol * |g(midpoint)|.
  double g_tol = 1e-8;
  std::size_t scan_steps = 400;
  std::uint64_t seed = 1;
  bool refine = true;
};

struct ReliabilityResult {
  double eta = 0.0;
  Vector delta_star;
  Vector x_star;
  NormKind norm = NormKind::Euclidean;
  bool converged = false;
  std::size_t evaluations = 0;
  double g_midpoint = 0.0;
  double g_star = 0.0;
  /// Best ray distance reached from each start, in start order.
  std::vector<double> start_etas;
};

namespace detail {

class RaySolver {
 public:
  RaySolver(const ConvexModel& model, LimitState& g, const ReliabilityOptions& options, NormKind norm)
      : model_(model), g_(g), options_(options), norm_(norm), generator_(regularized_generator(model)) {
    g0_ = value(Vector(model.dimension(), 0.0));
    if (!std::isfinite(g0_)) throw Error(Errc::InvalidArgument, "g is not finite at the midpoint");
    if (g0_ == 0.0) throw Error(Errc::InvalidArgument, "the midpoint lies on the limit-state surface");
  }

  double g0() const { return g0_; }
  std::size_t evaluations() const { return evaluations_; }

  double value(const Vector& delta) {
    ++evaluations_;
    const Vector x = deregularize_point(model_.spec(), generator_ * delta);
    return g_.evaluate(x);
  }

  /// Rescales v to unit norm; returns false for the zero vector.
  bool normalize(Vector& v) const {
    const double len = norm_of(norm_, v);
    if (!(len > 0.0) || !std::isfinite(len)) return false;
    for (auto& c : v) c /= len;
    return true;
  }

  struct Hit {
    double t = std::numeric_limits<double>::infinity();
    double g = 0.0;
  };

  /// Distance to the first sign change of g along unit direction d.
  Hit ray(const Vector& d) {
    const double h = options_.eta_max / static_cast<double>(options_.scan_steps);
    double t_prev = 0.0;
    for (std::size_t k = 1; k <= options_.scan_steps; ++k) {
      const double t = h * static_cast<double>(k);
      const double f = value(scaled(d, t));
      if (!std::isfinite(f)) return {};
      if (crossed(f)) return bisect(d, t_prev, t, f);
      t_prev = t;
    }
    return {};
  }

  static Vector scaled(const Vector& d, double t) {
    Vector v(d);
    for (auto& c : v) c *= t;
    return v;
  }

 private:
  bool crossed(double f) const { return f == 0.0 || (f > 0.0) != (g0_ > 0.0); }

  Hit bisect(const Vector& d, double lo, double hi, double f_hi) {
    const double tol = options_.g_tol * std::abs(g0_);
    double f_lo = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200 && std::abs(f_hi) > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f = value(scaled(d, mid));
      if (!std::isfinite(f) || crossed(f)) {
        hi = mid;
        f_hi = std::isfinite(f) ? f : f_hi;
      } else {
        lo = mid;
        f_lo = f;
      }
    }
    if (std::abs(f_lo) < std::abs(f_hi) && std::abs(f_lo) <= tol) return {lo, f_lo};
    return {hi, f_hi};
  }

  const ConvexModel& model_;
  LimitState& g_;
  const ReliabilityOptions& options_;
  NormKind norm_;
  Matrix generator_;
  double g0_ = 0.0;
  std::size_t evaluations_ = 0;
};

struct Candidate {
  Vector direction;
  RaySolver::Hit hit;
};

inline void compass_refine(RaySolver& solver, Candidate& c) {
  const std::size_t n = c.direction.size();
  double step = 0.25;
  for (int iter = 0; iter < 20000 && step > 1e-10; ++iter) {
    bool improved = false;
    for (std::size_t k = 0; k < n && !improved; ++k) {
      for (double sign : {1.0, -1.0}) {
        Vector w = c.direction;
        w[k] += sign * step;
        if (!solver.normalize(w)) continue;
        const RaySolver::Hit hit = solver.ray(w);
        if (hit.t < c.hit.t) {
          c.direction = std::move(w);
          c.hit = hit;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
}

/// HL-RF iterations from the current point; a new direction is kept only when
/// its ray distance is shorter.
inline void hlrf_polish(RaySolver& solver, Candidate& c) {
  const std::size_t n = c.direction.size();
  Vector delta = RaySolver::scaled(c.direction, c.hit.t);
  for (int iter = 0; iter < 50; ++iter) {
    const double f = solver.value(delta);
    Vector grad(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(delta[k]));
      Vector plus = delta;
      Vector minus = delta;
      plus[k] += h;
      minus[k] -= h;
      grad[k] = (solver.value(plus) - solver.value(minus)) / (2.0 * h);
    }
    const double gg = dot(grad, grad);
    if (!(gg > 0.0) || !std::isfinite(gg)) return;
    const double scale = (dot(grad, delta) - f) / gg;
    Vector next = RaySolver::scaled(grad, scale);
    Vector dir = next;
    if (!solver.normalize(dir)) return;
    const RaySolver::Hit hit = solver.ray(dir);
    if (!(hit.t < c.hit.t)) return;
    const double gain = c.hit.t - hit.t;
    c.direction = dir;
    c.hit = hit;
    delta = RaySolver::scaled(dir, hit.t);
    if (gain <= 1e-14 * hit.t) return;
  }
}

}  // namespace detail

/// Computes the reliability index of `model` for the limit state `g`. The
/// identifiers of g must be model variables or keys of `options.bindings`.
inline ReliabilityResult reliability_index(const ConvexModel& model, const LimitState& g,
                                           const ReliabilityOptions& options = {}) {
  LimitState bound = g.clone();
  bound.bind(model.spec().names(), options.bindings);
  if (!(options.eta_max > 0.0)) throw Error(Errc::InvalidArgument, "eta_max must be positive");

  const NormKind norm = options.norm.value_or(default_norm(model));
  detail::RaySolver solver(model, bound, options, norm);
  const std::size_t n = model.dimension();

  std::vector<Vector> starts;
  for (std::size_t k = 0; k < n; ++k)
    for (double sign : {1.0, -1.0}) {
      Vector d(n, 0.0);
      d[k] = sign;
      starts.push_back(std::move(d));
    }
  Rng rng(options.seed);
  while (starts.size() < 2 * n + 2 * n * n) {
    Vector d(n);
    for (auto& c : d) c = rng.normal();
    if (solver.normalize(d)) starts.push_back(std::move(d));
  }

  std::vector<detail::Candidate> found;
  ReliabilityResult result;
  result.norm = norm;
  result.g_midpoint = solver.g0();
  for (Vector& d : starts) {
    solver.normalize(d);
    detail::Candidate c{d, solver.ray(d)};
    if (std::isfinite(c.hit.t) && options.refine) {
      detail::compass_refine(solver, c);
      if (norm == NormKind::Euclidean) detail::hlrf_polish(solver, c);
    }
    result.start_etas.push_back(c.hit.t);
    if (std::isfinite(c.hit.t)) found.push_back(std::move(c));
  }
  result.evaluations = solver.evaluations();
  if (found.empty()) {
    throw Error(Errc::NoSurfaceFound, "g keeps the sign of g(midpoint) out to eta_max = " +
                                          std::to_string(options.eta_max) + ", so eta >= " +
                                          std::to_string(options.eta_max));
  }

  std::sort(found.begin(), found.end(), [](const detail::Candidate& a, const detail::Candidate& b) {
    if (a.hit.t != b.hit.t) return a.hit.t < b.hit.t;
    return a.direction < b.direction;
  });
  const detail::Candidate& best = found.front();
  result.delta_star = detail::RaySolver::scaled(best.direction, best.hit.t);
  result.eta = norm_of(norm, result.delta_star);
  result.x_star = from_delta(model, result.delta_star);
  result.g_star = best.hit.g;
  result.converged =
      found.size() >= 2 && std::abs(found[1].hit.t - found[0].hit.t) <= 1e-4 * std::max(found[0].hit.t, 1e-300);
  return result;
}

}  // namespace ncvx
