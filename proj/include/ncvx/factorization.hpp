#pragma once
// Core of Shape Matrix (CSM) rules and the row-normalized Shape Matrix.
//
// Every parallelepiped variant builds its domain {u : |S^{-1} u| <= e} from a
// factor H of the correlation matrix R; the variants differ only in which
// factor they use:
//
//   MP-I         H = R
//   MP-II        H = R^{1/2} (symmetric principal root)
//   Rectangular  H = Q Lambda^{1/2}, R = Q Lambda Q^T
//   LTri         H = L, R = L L^T (Cholesky)
//   UTri         H = U, R = U U^T with U upper triangular
//
// S = diag(w) H with w_i = 1 / sum_j |H(i, j)|, so each row of S has unit
// absolute sum and the marginal of every coordinate is exactly [-1, 1].

#include <cmath>
#include <string>

#include "ncvx/error.hpp"
#include "ncvx/linalg.hpp"
#include "ncvx/variant.hpp"

namespace ncvx {

struct CoreShapeMatrix {
  Matrix entries;
  ModelVariant variant;
};

struct ShapeMatrix {
  Matrix entries;
  Vector weights;
};

namespace detail {

inline void require_square_symmetric(const Matrix& r) {
  if (!r.square()) throw Error(Errc::DimensionMismatch, "correlation matrix must be square");
  if (!is_symmetric(r, 1e-12)) throw Error(Errc::InvalidArgument, "correlation matrix must be symmetric");
}

inline SymmetricEigen positive_definite_eigen(const Matrix& r) {
  require_square_symmetric(r);
  SymmetricEigen eig = symmetric_eigen(r);
  if (!(eig.values.back() > 0.0)) {
    throw Error(Errc::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(eig.values.back()));
  }
  return eig;
}

}  // namespace detail

/// H = Q Lambda^{1/2} Q^T, the symmetric positive-definite square root.
inline CoreShapeMatrix symmetric_sqrt(const Matrix& r) {
  const SymmetricEigen eig = detail::positive_definite_eigen(r);
  const std::size_t n = r.rows();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += eig.vectors(i, k) * std::sqrt(eig.values[k]) * eig.vectors(j, k);
      h(i, j) = s;
      h(j, i) = s;
    }
  return {std::move(h), ModelVariant::MpII};
}

inline CoreShapeMatrix identity_factor(const Matrix& r) {
  detail::require_square_symmetric(r);
  return {r, ModelVariant::MpI};
}

/// H = Q Lambda^{1/2} with eigenvalues descending and each eigenvector's first
/// nonzero component positive.
inline CoreShapeMatrix eigen_factor(const Matrix& r) {
  const SymmetricEigen eig = detail::positive_definite_eigen(r);
  const std::size_t n = r.rows();
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) h(i, k) = eig.vectors(i, k) * std::sqrt(eig.values[k]);
  return {std::move(h), ModelVariant::Rectangular};
}

inline CoreShapeMatrix cholesky_lower(const Matrix& r) {
  detail::require_square_symmetric(r);
  return {cholesky(r), ModelVariant::LowerTriangular};
}

/// Upper-triangular U with U U^T = R: Cholesky of the index-reversed matrix,
/// reversed back.
inline CoreShapeMatrix upper_factor(const Matrix& r) {
  detail::require_square_symmetric(r);
  const std::size_t n = r.rows();
  Matrix reversed(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reversed(i, j) = r(n - 1 - i, n - 1 - j);
  const Matrix l = cholesky(reversed);
  Matrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = l(n - 1 - i, n - 1 - j);
  return {std::move(u), ModelVariant::UpperTriangular};
}

inline CoreShapeMatrix core_shape_matrix(ModelVariant variant, const Matrix& r) {
  switch (variant) {
    case ModelVariant::MpI: return identity_factor(r);
    case ModelVariant::MpII: return symmetric_sqrt(r);
    case ModelVariant::Rectangular: return eigen_factor(r);
    case ModelVariant::LowerTriangular: return cholesky_lower(r);
    case ModelVariant::UpperTriangular: return upper_factor(r);
    case ModelVariant::Ellipsoid: break;
  }
  throw Error(Errc::InvalidArgument, "the ellipsoid model has no core of shape matrix");
}

inline constexpr double kSingularShapeDeterminant = 1e-14;

inline ShapeMatrix shape_matrix(const CoreShapeMatrix& core) {
  const Matrix& h = core.entries;
  if (!h.square()) throw Error(Errc::DimensionMismatch, "core of shape matrix must be square");
  const std::size_t n = h.rows();
  ShapeMatrix s{Matrix(n, n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_sum += std::abs(h(i, j));
    if (!(row_sum > 0.0)) {
      throw Error(Errc::SingularShape, "row " + std::to_string(i) + " of the core is zero");
    }
    s.weights[i] = 1.0 / row_sum;
    for (std::size_t j = 0; j < n; ++j) s.entries(i, j) = h(i, j) / row_sum;
  }
  const double det = determinant(s.entries);
  if (!(std::abs(det) >= kSingularShapeDeterminant)) {
    throw Error(Errc::SingularShape, "|det S| = " + std::to_string(std::abs(det)));
  }
  return s;
}

inline ShapeMatrix shape_matrix_for(ModelVariant variant, const Matrix& r) {
  return shape_matrix(core_shape_matrix(variant, r));
}

}  // namespace ncvx
