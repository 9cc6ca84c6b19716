#pragma once

#include "polyred/liealg.hpp"
#include "polyred/reduction.hpp"

#include <array>
#include <functional>
#include <random>
#include <vector>

namespace polyred {

// ---------------------------------------------------------------------------
// Cotangent bundle of k^1-covelocities over Q = R^m with a lifted base action.

struct CovelocityPoint {
  Vector q;
  std::vector<Vector> p;  ///< k covectors on Q
};

/// Infinitesimal action on the base: generator(a, q) = (e_a)_Q(q) and
/// derivative(a, q) = its Jacobian in q. A missing derivative makes the
/// cotangent lift unavailable.
struct BaseAction {
  LieAlgebraData algebra;
  std::function<Vector(int, const Vector&)> generator;
  std::function<Matrix(int, const Vector&)> derivative;
};

BaseAction trivial_action(int m);
/// (R^{axes.size()}, +) translating the listed coordinates of R^m.
BaseAction translation_action(int m, const std::vector<int>& axes);
/// SO(3) rotating R^3: (xi)_Q(q) = xi x q.
BaseAction rotation_action();

/// Momentum J^A(q, p)(xi) = p^A((xi)_Q(q)) evaluated on the algebra basis.
std::vector<Vector> covelocity_momentum(const BaseAction& action, const CovelocityPoint& x);

/// Snapshot on R^{m(k+1)} with coordinates (q, p^1, ..., p^k).
GSpaceSnapshot covelocity_snapshot(int m, int k, const CovelocityPoint& x, const BaseAction& action,
                                   const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// M = N x N with N = T*R^2 (coordinates q1, q2, p1, p2) and G acting by
// translation of q1. omega^A is the pullback of the factor form by pr_A.

enum class ProductConfig { kDiagonal, kProductGroup };

GSpaceSnapshot product_model_snapshot(ProductConfig config, const Vector& point, const Tolerance& tol = {});
/// Value of J at a point of M (one component per form, each of length d).
std::vector<Vector> product_model_momentum(ProductConfig config, const Vector& point);

// ---------------------------------------------------------------------------
// G x (g^*)^k in left-trivialized coordinates (eta; beta_1, ..., beta_k).

struct GroupModelPoint {
  Rotation g;
  std::vector<Vector3> nus;
};

/// omega^A((xi, alpha), (eta, beta)) = beta_A(xi) - alpha_A(eta) + nu_A[xi, eta].
FormFamily group_model_forms(const LieAlgebraData& alg, const std::vector<Vector>& nus);

/// Generic variant: coad_g is the matrix of Coad_g on g^* and ad_ginv the
/// matrix of Ad_{g^{-1}} on g.
GSpaceSnapshot group_covelocity_snapshot(const LieAlgebraData& alg, const Matrix& coad_g, const Matrix& ad_ginv,
                                         const std::vector<Vector>& nus, const Tolerance& tol = {});
GSpaceSnapshot group_covelocity_snapshot(const GroupModelPoint& x, const Tolerance& tol = {});

/// J(g, nu) = Coad^k_g nu.
std::vector<Vector3> group_momentum(const GroupModelPoint& x);

/// The point (g, Coad^k_{g^{-1}} mu), which lies on J^{-1}(mu).
GroupModelPoint group_level_point(const Rotation& g, const std::vector<Vector3>& mus);

std::vector<Vector> to_dynamic(const std::vector<Vector3>& v);
std::vector<Vector3> to_fixed(const std::vector<Vector>& v);

// ---------------------------------------------------------------------------
// k-coadjoint orbits.

/// Tangent space of the orbit through nu, spanned by the generators
/// (-ad*_xi nu_1, ..., -ad*_xi nu_k), with the forms
/// omega^A(xi_gen, eta_gen) = -nu_A[xi, eta].
struct OrbitForms {
  LieAlgebraData algebra = LieAlgebraData::abelian(0);
  std::vector<Vector> nus;
  Matrix generator_matrix;  ///< dk x d, column a is the generator of e_a
  Subspace tangent{0};      ///< orthonormal basis of the tangent space in R^{dk}
  FormFamily forms{0, {}};  ///< forms on the tangent basis
  /// Largest |nu_A[z, e_b]| over z in the kernel of the generator map.
  double well_definedness = 0.0;

  /// Algebra element whose generator is the tangent vector w (least squares).
  Vector representative(const Vector& w) const;
  /// omega^A at nu on two tangent vectors given in R^{dk}.
  double eval(int a, const Vector& u, const Vector& v) const;
};

OrbitForms k_coadjoint_orbit_forms(const std::vector<Vector>& nus, const LieAlgebraData& alg,
                                   const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// SO(3) orbits through (pi1, pi2).

struct KksSo3 {
  int kase = 1;
  /// Nonzero seed vector spanning the orbit directions in case 2.
  Vector3 base = Vector3::Zero();
  /// Case 2: pi_A = scale[A] * base. scale = (1, lambda0) when pi1 != 0.
  std::array<double, 2> scale{0.0, 0.0};
  double lambda0 = 0.0;
  std::array<Vector3, 2> seeds{Vector3::Zero(), Vector3::Zero()};
  /// Case 3: omega^A(Id)(xi_i, xi_j) for the left-invariant forms.
  std::array<Matrix3, 2> identity_forms{Matrix3::Zero(), Matrix3::Zero()};

  /// Case 2: omega^A at (scale_1 pi, scale_2 pi) on (scale_1 u, scale_2 u), (scale_1 v, scale_2 v),
  /// for pi on the sphere of radius |base| and u, v tangent to it.
  double case2_form(int a, const Vector3& pi, const Vector3& u, const Vector3& v) const;
};

/// "Dependent" means the sine of the angle between the seeds is below 1e-9.
KksSo3 kks_so3(const Vector3& pi1, const Vector3& pi2, const Tolerance& tol = {});

// ---------------------------------------------------------------------------

/// Non-polysymplectic forms with zero generators and isotropy g: the second
/// reduction condition fails.
GSpaceSnapshot degenerate_fixture_snapshot();

/// Uniform rotation from a seeded generator.
Rotation random_rotation(std::mt19937_64& rng);
Vector3 random_vector3(std::mt19937_64& rng);

}  // namespace polyred
