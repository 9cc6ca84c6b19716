#pragma once

#include "polyred/types.hpp"

namespace polyred {

/// Numerical tolerances used for every rank and subspace-equality decision.
///
/// A singular value s of a matrix with largest singular value s_max is
/// treated as zero when s <= max(rank_rel * s_max, abs_floor). The floor only
/// matters for matrices that are zero up to roundoff.
struct Tolerance {
  double rank_rel = 1e-9;
  double eq_abs = 1e-9;
  double abs_floor = 1e-12;

  void validate() const;
};

/// A linear subspace of R^n stored as an orthonormal basis (n x r).
/// r == 0 is the zero subspace.
class Subspace {
 public:
  explicit Subspace(int ambient_dim);
  /// Takes ownership of an already-orthonormal basis. Checked to 1e-12.
  Subspace(int ambient_dim, Matrix orthonormal_basis);

  static Subspace zero(int ambient_dim) { return Subspace(ambient_dim); }
  static Subspace full(int ambient_dim);

  int ambient_dim() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const;
  /// Component of v orthogonal to the subspace.
  Vector residual(const Vector& v) const;

 private:
  int n_;
  Matrix basis_;
};

Subspace orthonormal_basis(const Matrix& columns, const Tolerance& tol = {});
Subspace kernel(const Matrix& a, const Tolerance& tol = {});
Subspace intersect(const Subspace& u, const Subspace& v, const Tolerance& tol = {});
Subspace intersect_all(const std::vector<Subspace>& spaces, const Tolerance& tol = {});
Subspace sum(const Subspace& u, const Subspace& v, const Tolerance& tol = {});

/// Sine of the largest principal angle needed to fit v inside u (0 when v is inside u).
double containment_residual(const Subspace& u, const Subspace& v);
/// v is contained in u within tol.eq_abs.
bool contains(const Subspace& u, const Subspace& v, const Tolerance& tol = {});
/// Sine of the largest principal angle between equal-dimension subspaces;
/// +infinity when the dimensions differ.
double principal_angle_residual(const Subspace& u, const Subspace& v);
bool subspace_equal(const Subspace& u, const Subspace& v, const Tolerance& tol = {});

/// Orthogonal complement of w inside u. Requires w to be contained in u.
Subspace complement_in(const Subspace& w, const Subspace& u, const Tolerance& tol = {});

/// Numerical rank under the shared rank policy.
int numerical_rank(const Matrix& a, const Tolerance& tol = {});

/// Apply a linear map to a subspace and return the span of the image.
Subspace image(const Matrix& map, const Subspace& u, const Tolerance& tol = {});

}  // namespace polyred
