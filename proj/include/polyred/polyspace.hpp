#pragma once

#include "polyred/subspace.hpp"

#include <utility>
#include <vector>

namespace polyred {

/// k skew bilinear forms on R^n, omega^A(u, v) = u^T Omega^A v.
class FormFamily {
 public:
  FormFamily(int n, std::vector<Matrix> omegas);

  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(omegas_.size()); }
  const Matrix& operator[](int a) const { return omegas_.at(static_cast<std::size_t>(a)); }
  const std::vector<Matrix>& omegas() const noexcept { return omegas_; }

  double eval(int a, const Vector& u, const Vector& v) const;

 private:
  int n_;
  std::vector<Matrix> omegas_;
};

/// Canonical forms dq^i ^ dp^A_i on R^{m(k+1)}, coordinates ordered (q, p^1, ..., p^k).
FormFamily canonical_covelocity_forms(int m, int k);

/// The common kernel of all forms.
Subspace common_kernel(const FormFamily& forms, const Tolerance& tol = {});
bool verify_polysymplectic(const FormFamily& forms, const Tolerance& tol = {});

/// W^{perp,k}: vectors omega^A-orthogonal to W for every A.
Subspace k_orthogonal(const Subspace& w, const FormFamily& forms, const Tolerance& tol = {});

/// sum_A i_{v_A} omega^A as a covector (components along the dual basis).
Vector flat(const std::vector<Vector>& vectors, const FormFamily& forms);
/// The n x nk matrix of the flat map acting on stacked (v_1; ...; v_k).
Matrix flat_matrix(const FormFamily& forms);

/// True iff v -> (i_v omega^1, ..., i_v omega^k) is injective.
bool sharp_injectivity(const FormFamily& forms, const Tolerance& tol = {});

/// Kernel of a skew form together with the induced nondegenerate form on the
/// orthonormal complement of the kernel. `complement` holds the basis used for
/// the induced form, so induced(i, j) = omega(complement_i, complement_j).
struct QuotientForm {
  Subspace kernel;
  Subspace complement;
  Matrix induced;
};

QuotientForm quotient_form(const Matrix& omega, const Tolerance& tol = {});

/// Pullback B^T Omega B of a form along the basis of W.
Matrix restrict_form(const Matrix& omega, const Subspace& w);

/// Standard symplectic matrix [[0, I], [-I, 0]] of size 2m.
Matrix standard_symplectic(int m);

}  // namespace polyred
