#pragma once

#include "polyred/subspace.hpp"

#include <optional>
#include <vector>

namespace polyred {

/// A finite-dimensional real Lie algebra given by structure constants
/// [e_a, e_b] = sum_e c[a][b][e] e_e, optionally with an inner product.
/// Covectors are expressed in the dual basis.
class LieAlgebraData {
 public:
  /// `constants` is laid out as c[(a * d + b) * d + e].
  LieAlgebraData(int d, std::vector<double> constants, std::optional<Matrix> metric = std::nullopt);

  static LieAlgebraData so3(std::optional<Matrix> metric = std::nullopt);
  static LieAlgebraData abelian(int d, std::optional<Matrix> metric = std::nullopt);

  int dim() const noexcept { return d_; }
  double c(int a, int b, int e) const { return c_[static_cast<std::size_t>((a * d_ + b) * d_ + e)]; }
  const std::optional<Matrix>& metric() const noexcept { return metric_; }
  LieAlgebraData with_metric(Matrix metric) const;

  /// Largest Jacobi-identity violation over basis triples.
  double jacobi_residual() const;

  Vector bracket(const Vector& x, const Vector& y) const;
  /// Matrix of y -> [x, y].
  Matrix ad_matrix(const Vector& x) const;
  /// (ad*_xi mu)(eta) = mu([xi, eta]).
  Vector ad_star(const Vector& xi, const Vector& mu) const;
  /// Matrix of xi -> ad*_xi mu for fixed mu.
  Matrix ad_star_in_xi(const Vector& mu) const;

  /// Musical maps of the metric: flat(xi) = <xi, .>, sharp = flat^{-1}.
  Vector metric_flat(const Vector& xi) const;
  Vector metric_sharp(const Vector& mu) const;
  /// Induced inner product on the dual.
  double dual_inner(const Vector& mu, const Vector& nu) const;

 private:
  int d_;
  std::vector<double> c_;
  std::optional<Matrix> metric_;
};

/// Rotation matrix with R^T R = I and det R = +1 (checked to 1e-10).
class Rotation {
 public:
  Rotation() : r_(Matrix3::Identity()) {}
  explicit Rotation(const Matrix3& r);

  const Matrix3& matrix() const noexcept { return r_; }
  Rotation operator*(const Rotation& other) const { return Rotation(r_ * other.r_, Unchecked{}); }
  Rotation inverse() const { return Rotation(r_.transpose(), Unchecked{}); }
  /// Nearest rotation in the Frobenius norm (polar factor).
  static Rotation project(const Matrix3& m);

 private:
  struct Unchecked {};
  Rotation(const Matrix3& r, Unchecked) : r_(r) {}
  Matrix3 r_;
};

Matrix3 so3_hat(const Vector3& x);
/// Inverse of hat; throws InputError on non-skew input.
Vector3 so3_vee(const Matrix3& x);
Rotation exp_so3(const Vector3& x);

/// Coadjoint action mu -> mu o Ad_{g^{-1}}; for SO(3) this is g * mu.
Vector3 coad(const Rotation& g, const Vector3& mu);
std::vector<Vector3> coad_k(const Rotation& g, const std::vector<Vector3>& mus);

/// Same action for an arbitrary group represented by the matrix of Coad_g on g^*.
std::vector<Vector> coad_k(const Matrix& coad_g, const std::vector<Vector>& mus);

/// g_mu = { xi : ad*_xi mu_A = 0 for all A }.
Subspace isotropy_subalgebra(const LieAlgebraData& alg, const std::vector<Vector>& mus,
                             const Tolerance& tol = {});

/// Infinitesimal generator of Coad^k at nu: component A is -ad*_xi nu_A.
std::vector<Vector> coadjoint_generator(const LieAlgebraData& alg, const Vector& xi,
                                        const std::vector<Vector>& nus);

/// Uniformly distributed rotation from a 4-vector of standard normals.
Rotation rotation_from_quaternion(double w, double x, double y, double z);

}  // namespace polyred
