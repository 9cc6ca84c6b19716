#include "polyred/polyspace.hpp"

namespace polyred {

FormFamily::FormFamily(int n, std::vector<Matrix> omegas) : n_(n), omegas_(std::move(omegas)) {
  if (n < 0) throw DimensionError("FormFamily: negative dimension");
  for (const auto& om : omegas_) {
    require_dims(om.rows() == n && om.cols() == n, "FormFamily: form is not n x n");
    if (!om.allFinite()) throw InputError("FormFamily: non-finite entries");
    if (n > 0 && (om + om.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InputError("FormFamily: form is not skew-symmetric");
    }
  }
}

double FormFamily::eval(int a, const Vector& u, const Vector& v) const {
  require_dims(u.size() == n_ && v.size() == n_, "FormFamily::eval: dimension mismatch");
  return u.dot((*this)[a] * v);
}

FormFamily canonical_covelocity_forms(int m, int k) {
  const int n = m * (k + 1);
  std::vector<Matrix> omegas;
  omegas.reserve(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) {
    Matrix om = Matrix::Zero(n, n);
    const int p0 = m * (a + 1);
    for (int i = 0; i < m; ++i) {
      om(i, p0 + i) = 1.0;
      om(p0 + i, i) = -1.0;
    }
    omegas.push_back(std::move(om));
  }
  return FormFamily(n, std::move(omegas));
}

Subspace common_kernel(const FormFamily& forms, const Tolerance& tol) {
  const int n = forms.n();
  Matrix stacked(n * forms.k(), n);
  for (int a = 0; a < forms.k(); ++a) stacked.middleRows(a * n, n) = forms[a];
  return kernel(stacked, tol);
}

bool verify_polysymplectic(const FormFamily& forms, const Tolerance& tol) {
  std::vector<Subspace> kernels;
  for (int a = 0; a < forms.k(); ++a) kernels.push_back(kernel(forms[a], tol));
  if (kernels.empty()) return forms.n() == 0;
  return intersect_all(kernels, tol).dim() == 0;
}

Subspace k_orthogonal(const Subspace& w, const FormFamily& forms, const Tolerance& tol) {
  require_dims(w.ambient_dim() == forms.n(), "k_orthogonal: dimension mismatch");
  const int n = forms.n();
  const int r = w.dim();
  if (r == 0) return Subspace::full(n);
  // Rows: w_j^T Omega^A, so v is in the complement iff every row annihilates v.
  Matrix constraints(r * forms.k(), n);
  for (int a = 0; a < forms.k(); ++a) {
    constraints.middleRows(a * r, r) = w.basis().transpose() * forms[a];
  }
  return kernel(constraints, tol);
}

Matrix flat_matrix(const FormFamily& forms) {
  const int n = forms.n();
  Matrix f(n, n * forms.k());
  for (int a = 0; a < forms.k(); ++a) f.middleCols(a * n, n) = forms[a].transpose();
  return f;
}

Vector flat(const std::vector<Vector>& vectors, const FormFamily& forms) {
  require_dims(static_cast<int>(vectors.size()) == forms.k(), "flat: expected k vectors");
  Vector out = Vector::Zero(forms.n());
  for (int a = 0; a < forms.k(); ++a) {
    require_dims(vectors[static_cast<std::size_t>(a)].size() == forms.n(), "flat: vector dimension mismatch");
    out += forms[a].transpose() * vectors[static_cast<std::size_t>(a)];
  }
  return out;
}

bool sharp_injectivity(const FormFamily& forms, const Tolerance& tol) {
  if (forms.k() == 0) return forms.n() == 0;
  return common_kernel(forms, tol).dim() == 0;
}

QuotientForm quotient_form(const Matrix& omega, const Tolerance& tol) {
  require_dims(omega.rows() == omega.cols(), "quotient_form: form must be square");
  const int n = static_cast<int>(omega.rows());
  Subspace ker = kernel(omega, tol);
  Subspace comp = complement_in(ker, Subspace::full(n), tol);
  Matrix induced = comp.basis().transpose() * omega * comp.basis();
  return {std::move(ker), std::move(comp), std::move(induced)};
}

Matrix restrict_form(const Matrix& omega, const Subspace& w) {
  require_dims(omega.rows() == w.ambient_dim() && omega.cols() == w.ambient_dim(),
               "restrict_form: dimension mismatch");
  return w.basis().transpose() * omega * w.basis();
}

Matrix standard_symplectic(int m) {
  Matrix j = Matrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = Matrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return j;
}

}  // namespace polyred
