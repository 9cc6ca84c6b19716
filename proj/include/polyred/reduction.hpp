#pragma once

#include "polyred/polyspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polyred {

/// Pointwise data of a Hamiltonian polysymplectic G-space at one point x.
///
/// momentum_jacobians[A] is d x n; row a is v -> <T_xJ^A(v), e_a>.
/// generators is n x d; column a is (e_a)_M(x).
struct GSpaceSnapshot {
  int n = 0;
  int k = 0;
  int d = 0;
  FormFamily forms{0, {}};
  std::vector<Matrix> momentum_jacobians;
  Matrix generators;
  std::vector<Subspace> isotropy_A;
  Subspace isotropy_mu{0};

  /// max_A |G^T Omega^A - Jac^A|, the matrix form of i_{xi_M} omega^A = dJ^A_xi.
  double momentum_residual() const;
  /// Throws InconsistentSnapshotError when shapes disagree, the momentum
  /// residual exceeds tol * (1 + scale), or isotropy_mu is not the
  /// intersection of the isotropy_A.
  void validate(double tol = 1e-9) const;
};

/// Assembles a snapshot and fills isotropy_mu as the intersection of isotropy_A.
GSpaceSnapshot make_snapshot(FormFamily forms, std::vector<Matrix> jacobians, Matrix generators,
                             std::vector<Subspace> isotropy_A, const Tolerance& tol = {});

/// One subspace comparison. lhs_dim/rhs_dim are the dimensions of the two
/// sides; residual is the principal-angle residual (infinity on a dimension gap).
struct Check {
  std::string name;
  bool passed = false;
  int lhs_dim = 0;
  int rhs_dim = 0;
  double residual = 0.0;
};

Check compare_subspaces(std::string name, const Subspace& lhs, const Subspace& rhs, const Tolerance& tol);

Subspace level_set_tangent(const GSpaceSnapshot& s, const Tolerance& tol = {});
Subspace momentum_kernel(const GSpaceSnapshot& s, int a, const Tolerance& tol = {});
/// Span of G * (basis of the subalgebra).
Subspace orbit_tangent(const GSpaceSnapshot& s, const Subspace& subalgebra, const Tolerance& tol = {});
Subspace full_orbit_tangent(const GSpaceSnapshot& s, const Tolerance& tol = {});

/// Item 1: T(G_mu x) = T(G x) cap T J^{-1}(mu). Item 2: T J^{-1}(mu) = T^{perp,k}(G x).
struct MomentumLemmaReport {
  Check item1;
  Check item2;
  bool passed() const { return item1.passed && item2.passed; }
};
MomentumLemmaReport check_momentum_lemma(const GSpaceSnapshot& s, const Tolerance& tol = {});

/// T(G_mu x) against T^{perp,k}(G x) cap T^{perp,k} J^{-1}(mu).
Check check_guenther_claim(const GSpaceSnapshot& s, const Tolerance& tol = {});

/// Both reduction conditions, evaluated directly and through the quotient maps.
///
/// Direct route: cond_1[A] compares ker T_xJ^A with
/// T J^{-1}(mu) + ker omega^A + T(G_{mu_A} x); cond_2 compares T(G_mu x) with
/// cap_B (ker omega^B + T(G_{mu_B} x)) cap T J^{-1}(mu).
///
/// Quotient route: V_A is represented by the orthonormal complement of
/// S_A = ker omega^A + T(G_{mu_A} x) inside ker T_xJ^A, and the quotient map
/// restricted to the level tangent is B_A^T. The epimorphism test is
/// rank(B_A^T L) = dim V_A; the kernel test asks that the stacked maps be
/// injective on the complement of T(G_mu x) in the level tangent.
struct ConditionsReport {
  std::vector<Check> cond1;
  Check cond2;
  std::vector<bool> epimorphism;
  bool trivial_kernel = false;
  bool routes_agree = false;

  bool cond1_holds() const;
  bool holds() const { return cond1_holds() && cond2.passed; }
};
ConditionsReport check_reduction_conditions(const GSpaceSnapshot& s, const Tolerance& tol = {});

/// The symplectic space V_A = ((ker T_xJ^A / ker omega^A) / {[xi_M] : xi in g_{mu_A}}).
struct Step1Result {
  Subspace representative{0};  ///< orthonormal representative of V_A inside ker T_xJ^A
  Matrix form;                 ///< induced form on the representative basis
  int dim_ker_j = 0;
  int dim_ker_omega = 0;
  int dim_orbit = 0;
  bool nondegenerate = false;
  /// (ker T_xJ^A / ker omega^A) equals the symplectic orthogonal of {[xi_M] : xi in g}.
  Check orthogonality;
  /// {[xi_M] : xi in g_{mu_A}} equals the quotient intersected with its orthogonal.
  Check isotropy;
};
/// Throws InconsistentSnapshotError when ker omega^A or T(G_{mu_A} x) is not
/// contained in ker T_xJ^A.
Step1Result step1_quotient(const GSpaceSnapshot& s, int a, const Tolerance& tol = {});

struct ReducedDiagnostics {
  ConditionsReport conditions;
  /// max |omega^A(w, l)| over orbit and level basis vectors.
  double well_definedness = 0.0;
  /// max |omega_mu^A([u],[v]) - omega^A(u,v)| over random level pairs.
  double pullback_residual = 0.0;
  int pullback_pairs = 0;
  bool polysymplectic = false;
  /// polysymplectic agrees with the outcome of the conditions.
  bool consistent = false;
  /// The characteristic space cap_A ker(i^* omega^A), computed directly and as
  /// level cap level^{perp,k}.
  Check characteristic;
  /// max_A |Q^T Omega^A Q - pi^T (B_A^T Omega^A B_A) pi|, NaN if a V_A could not be formed.
  double step1_form_residual = 0.0;
};

struct ReducedSpace {
  Subspace level_tangent{0};
  Subspace orbit_tangent{0};
  Subspace quotient_basis{0};
  FormFamily reduced_forms{0, {}};
  ReducedDiagnostics diagnostics;
};

/// Builds the reduced family on the quotient of the level tangent by the
/// G_mu-orbit tangent. Failures are reported in the diagnostics.
ReducedSpace reduced_forms(const GSpaceSnapshot& s, const Tolerance& tol = {}, int pullback_pairs = 50,
                           std::uint64_t seed = 1);

}  // namespace polyred
