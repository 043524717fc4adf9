#pragma once
// Reference computations used by the tests. Each one is written independently
// of the library code it checks: closed forms for 2x2 factors, brute-force
// grids, plain rejection sampling and direct ray searches.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "ncvx/variant.hpp"

namespace oracle {

using ncvx::ModelVariant;

/// Pearson-style coefficient about zero, accumulated in long double.
inline double scc(const std::vector<double>& a, const std::vector<double>& b, double ma = 0.0, double mb = 0.0) {
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const long double da = a[k] - ma;
    const long double db = b[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

struct M2 {
  double a, b, c, d;  // [[a, b], [c, d]]
};

/// Closed-form 2x2 core factor of [[1, r], [r, 1]] for each MP rule.
inline M2 core2(ModelVariant v, double r) {
  const double p = std::sqrt(1.0 + r);
  const double m = std::sqrt(1.0 - r);
  switch (v) {
    case ModelVariant::MpI: return {1, r, r, 1};
    case ModelVariant::MpII: return {(p + m) / 2, (p - m) / 2, (p - m) / 2, (p + m) / 2};
    case ModelVariant::Rectangular: {
      const double s = 1.0 / std::sqrt(2.0);
      // eigenpairs (1 + r, (1, 1)/sqrt2) and (1 - r, (1, -1)/sqrt2)
      return {s * p, s * m, s * p, -s * m};
    }
    case ModelVariant::LowerTriangular: return {1, 0, r, std::sqrt(1 - r * r)};
    case ModelVariant::UpperTriangular: return {std::sqrt(1 - r * r), r, 0, 1};
    case ModelVariant::Ellipsoid: break;
  }
  return {1, 0, 0, 1};
}

inline M2 shape2(ModelVariant v, double r) {
  M2 h = core2(v, r);
  const double w1 = std::abs(h.a) + std::abs(h.b);
  const double w2 = std::abs(h.c) + std::abs(h.d);
  return {h.a / w1, h.b / w1, h.c / w2, h.d / w2};
}

/// Membership in the 2D family member of parameter r, tolerance 1e-9.
inline bool inside2(ModelVariant v, double r, double u1, double u2, double tol = 1e-9) {
  if (v == ModelVariant::Ellipsoid) {
    return (u1 * u1 - 2 * r * u1 * u2 + u2 * u2) / (1 - r * r) <= 1 + tol;
  }
  const M2 s = shape2(v, r);
  const double det = s.a * s.d - s.b * s.c;
  const double d1 = (s.d * u1 - s.b * u2) / det;
  const double d2 = (-s.c * u1 + s.a * u2) / det;
  return std::max(std::abs(d1), std::abs(d2)) <= 1 + tol;
}

/// CCC by exhaustive grid over r: the feasible r of largest |r|.
/// Returns NaN when nothing on the grid is feasible.
inline double ccc_grid(ModelVariant v, const std::vector<std::pair<double, double>>& pts, double step = 1e-5) {
  double best = std::numeric_limits<double>::quiet_NaN();
  const long k_max = static_cast<long>(std::floor((1.0 - 1e-6) / step));
  for (long k = -k_max; k <= k_max; ++k) {
    const double r = static_cast<double>(k) * step;
    bool ok = true;
    for (const auto& [a, b] : pts) ok = ok && inside2(v, r, a, b);
    if (ok && (std::isnan(best) || std::abs(r) > std::abs(best))) best = r;
  }
  return best;
}

/// SCC of points drawn by rejection from the 2D domain of parameter r.
inline double rejection_scc(ModelVariant v, double r, std::size_t count, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs, ys;
  while (xs.size() < count) {
    const double a = u(gen);
    const double b = u(gen);
    if (inside2(v, r, a, b, 0.0)) {
      xs.push_back(a);
      ys.push_back(b);
    }
  }
  return scc(xs, ys);
}

/// Support value max c^T u over {u : u^T G u <= 1} by projected gradient
/// ascent: step along the tangential part of c, rescale onto the boundary,
/// stop when the KKT residual c - lambda G u vanishes.
inline double ellipsoid_support(const std::vector<std::vector<double>>& g, const std::vector<double>& c) {
  const std::size_t n = c.size();
  double trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += g[i][i];
  std::vector<double> u = c;
  double value = 0;
  for (int it = 0; it < 2000000; ++it) {
    std::vector<double> gu(n, 0.0);
    double q = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) gu[i] += g[i][j] * u[j];
      q += u[i] * gu[i];
    }
    const double scale = 1.0 / std::sqrt(q);
    double lam = 0;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] *= scale;
      gu[i] *= scale;
      lam += c[i] * u[i];
    }
    value = lam;
    double residual = 0;
    std::vector<double> step(n);
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = c[i] - lam * gu[i];
      residual = std::max(residual, std::abs(step[i]));
    }
    if (residual < 1e-13) break;
    const double t = 1.0 / (std::abs(lam) * trace);
    for (std::size_t i = 0; i < n; ++i) u[i] += t * step[i];
  }
  return value;
}

/// Smallest t > 0 along direction d where f changes sign from f(0).
inline double ray_root(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& d,
                       double t_max, double step) {
  const std::size_t n = d.size();
  auto at = [&](double t) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = t * d[i];
    return f(x);
  };
  const double f0 = at(0.0);
  double lo = 0.0;
  for (double t = step; t <= t_max + 1e-12; t += step) {
    const double ft = at(t);
    if (!std::isfinite(ft)) return std::numeric_limits<double>::infinity();
    if ((ft > 0) != (f0 > 0) || ft == 0) {
      double hi = t;
      for (int k = 0; k < 100; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = at(mid);
        if ((fm > 0) != (f0 > 0) || fm == 0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    lo = t;
  }
  return std::numeric_limits<double>::infinity();
}

/// 2D minimum ray distance over a dense angle grid; directions are scaled to
/// unit Euclidean or unit infinity norm.
inline double min_distance_2d(const std::function<double(const std::vector<double>&)>& f, bool infinity_norm,
                              std::size_t angles = 20000, double t_max = 10.0, double step = 0.01) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < angles; ++k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(angles);
    std::vector<double> d{std::cos(a), std::sin(a)};
    const double len = infinity_norm ? std::max(std::abs(d[0]), std::abs(d[1])) : 1.0;
    d[0] /= len;
    d[1] /= len;
    best = std::min(best, ray_root(f, d, t_max, step));
  }
  return best;
}

/// Monte-Carlo boundary search: random Euclidean directions, exact ray roots,
/// then the minimum.
inline double min_distance_mc(const std::function<double(const std::vector<double>&)>& f, std::size_t n,
                              std::size_t directions, unsigned seed, double t_max = 10.0, double step = 0.02) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < directions; ++k) {
    std::vector<double> d(n);
    double len = 0;
    for (auto& x : d) {
      x = z(gen);
      len += x * x;
    }
    len = std::sqrt(len);
    for (auto& x : d) x /= len;
    best = std::min(best, ray_root(f, d, t_max, step));
  }
  return best;
}

/// Plain Cholesky of a small SPD matrix (vector-of-rows form).
inline std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    double s = a[j][j];
    for (std::size_t k = 0; k < j; ++k) s -= l[j][k] * l[j][k];
    l[j][j] = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = a[i][j];
      for (std::size_t k = 0; k < j; ++k) t -= l[i][k] * l[j][k];
      l[i][j] = t / l[j][j];
    }
  }
  return l;
}

/// Determinant by cofactor expansion (n <= 8 in tests).
inline double det(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  double s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> m;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<double> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(a[i][j]);
      m.push_back(row);
    }
    s += (c % 2 ? -1.0 : 1.0) * a[0][c] * det(m);
  }
  return s;
}

}  // namespace oracle
