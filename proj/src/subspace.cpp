#include "polyred/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyred {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

double rank_threshold(double s_max, const Tolerance& tol) {
  return std::max(tol.rank_rel * s_max, tol.abs_floor);
}

int rank_from_singular_values(const Vector& s, const Tolerance& tol) {
  if (s.size() == 0) return 0;
  const double thr = rank_threshold(s(0), tol);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) ++r;
  }
  return r;
}

}  // namespace

void Tolerance::validate() const {
  if (!(rank_rel > 0.0) || !(eq_abs > 0.0) || !(abs_floor > 0.0)) {
    throw InputError("tolerances must be strictly positive");
  }
}

Subspace::Subspace(int ambient_dim) : n_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw DimensionError("negative ambient dimension");
}

Subspace::Subspace(int ambient_dim, Matrix orthonormal_basis)
    : n_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (basis_.rows() != n_) throw DimensionError("basis row count differs from ambient dimension");
  if (basis_.cols() > n_) throw DimensionError("more basis vectors than ambient dimension");
  const auto r = basis_.cols();
  if (r > 0) {
    const double err = (basis_.transpose() * basis_ - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
    if (err > 1e-12) throw InputError("basis is not orthonormal");
  }
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

Vector Subspace::residual(const Vector& v) const {
  require_dims(v.size() == n_, "residual: vector dimension mismatch");
  return v - basis_ * (basis_.transpose() * v);
}

int numerical_rank(const Matrix& a, const Tolerance& tol) {
  require_finite(a, "numerical_rank");
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Subspace orthonormal_basis(const Matrix& columns, const Tolerance& tol) {
  require_finite(columns, "orthonormal_basis");
  const int n = static_cast<int>(columns.rows());
  if (columns.cols() == 0 || n == 0) return Subspace(n);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return Subspace(n, svd.matrixU().leftCols(r));
}

Subspace kernel(const Matrix& a, const Tolerance& tol) {
  require_finite(a, "kernel");
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0 || n == 0) return Subspace::full(n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), tol);
  return Subspace(n, svd.matrixV().rightCols(n - r));
}

Subspace intersect(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  require_dims(u.ambient_dim() == v.ambient_dim(), "intersect: ambient dimension mismatch");
  const int n = u.ambient_dim();
  if (u.dim() == 0 || v.dim() == 0) return Subspace(n);
  // x = U a lies in V iff (I - V V^T) U a = 0.
  const Matrix outside = u.basis() - v.basis() * (v.basis().transpose() * u.basis());
  const Subspace coeffs = kernel(outside, tol);
  if (coeffs.dim() == 0) return Subspace(n);
  return orthonormal_basis(u.basis() * coeffs.basis(), tol);
}

Subspace intersect_all(const std::vector<Subspace>& spaces, const Tolerance& tol) {
  if (spaces.empty()) throw InputError("intersect_all: empty list");
  Subspace acc = spaces.front();
  for (std::size_t i = 1; i < spaces.size(); ++i) acc = intersect(acc, spaces[i], tol);
  return acc;
}

Subspace sum(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  require_dims(u.ambient_dim() == v.ambient_dim(), "sum: ambient dimension mismatch");
  Matrix both(u.ambient_dim(), u.dim() + v.dim());
  both << u.basis(), v.basis();
  return orthonormal_basis(both, tol);
}

double containment_residual(const Subspace& u, const Subspace& v) {
  require_dims(u.ambient_dim() == v.ambient_dim(), "containment: ambient dimension mismatch");
  if (v.dim() == 0) return 0.0;
  const Matrix outside = v.basis() - u.basis() * (u.basis().transpose() * v.basis());
  Eigen::JacobiSVD<Matrix> svd(outside);
  return svd.singularValues()(0);
}

bool contains(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  return containment_residual(u, v) < tol.eq_abs;
}

double principal_angle_residual(const Subspace& u, const Subspace& v) {
  require_dims(u.ambient_dim() == v.ambient_dim(), "subspace_equal: ambient dimension mismatch");
  if (u.dim() != v.dim()) return std::numeric_limits<double>::infinity();
  return std::max(containment_residual(u, v), containment_residual(v, u));
}

bool subspace_equal(const Subspace& u, const Subspace& v, const Tolerance& tol) {
  return principal_angle_residual(u, v) < tol.eq_abs;
}

Subspace complement_in(const Subspace& w, const Subspace& u, const Tolerance& tol) {
  require_dims(u.ambient_dim() == w.ambient_dim(), "complement_in: ambient dimension mismatch");
  if (!contains(u, w, tol)) throw PreconditionError("complement_in: W is not contained in U");
  const int n = u.ambient_dim();
  if (u.dim() == 0) return Subspace(n);
  if (w.dim() == 0) return u;
  const Subspace coeffs = kernel(w.basis().transpose() * u.basis(), tol);
  if (coeffs.dim() == 0) return Subspace(n);
  return orthonormal_basis(u.basis() * coeffs.basis(), tol);
}

Subspace image(const Matrix& map, const Subspace& u, const Tolerance& tol) {
  require_dims(map.cols() == u.ambient_dim(), "image: map/subspace dimension mismatch");
  if (u.dim() == 0) return Subspace(static_cast<int>(map.rows()));
  return orthonormal_basis(map * u.basis(), tol);
}

}  // namespace polyred
