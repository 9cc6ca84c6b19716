#include "polyred/reduction.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace polyred {

namespace {

Matrix stack_rows(const std::vector<Matrix>& blocks, int cols) {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

Subspace lift(const Subspace& coeffs, const Subspace& outer, const Tolerance& tol) {
  if (coeffs.dim() == 0) return Subspace(outer.ambient_dim());
  return orthonormal_basis(outer.basis() * coeffs.basis(), tol);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Orthonormal complement of S_A = ker omega^A + T(G_{mu_A} x) inside ker T_xJ^A.
struct QuotientPieces {
  Subspace ker_j{0};
  Subspace ker_omega{0};
  Subspace orbit{0};
  Subspace v_basis{0};
};

QuotientPieces quotient_pieces(const GSpaceSnapshot& s, int a, const Tolerance& tol) {
  QuotientPieces p;
  p.ker_j = momentum_kernel(s, a, tol);
  p.ker_omega = kernel(s.forms[a], tol);
  p.orbit = orbit_tangent(s, s.isotropy_A[static_cast<std::size_t>(a)], tol);
  if (!contains(p.ker_j, p.ker_omega, tol)) {
    throw InconsistentSnapshotError("ker omega^A is not contained in ker T_xJ^A");
  }
  if (!contains(p.ker_j, p.orbit, tol)) {
    throw InconsistentSnapshotError("isotropy orbit tangent is not contained in ker T_xJ^A");
  }
  p.v_basis = complement_in(sum(p.ker_omega, p.orbit, tol), p.ker_j, tol);
  return p;
}

}  // namespace

double GSpaceSnapshot::momentum_residual() const {
  double worst = 0.0;
  for (int a = 0; a < k; ++a) {
    const Matrix diff = generators.transpose() * forms[a] - momentum_jacobians[static_cast<std::size_t>(a)];
    worst = std::max(worst, max_abs(diff));
  }
  return worst;
}

void GSpaceSnapshot::validate(double tol) const {
  if (forms.n() != n || forms.k() != k) throw InconsistentSnapshotError("snapshot: form family shape");
  if (generators.rows() != n || generators.cols() != d) throw InconsistentSnapshotError("snapshot: generator shape");
  if (static_cast<int>(momentum_jacobians.size()) != k || static_cast<int>(isotropy_A.size()) != k) {
    throw InconsistentSnapshotError("snapshot: expected k jacobians and k isotropy subspaces");
  }
  for (const auto& jac : momentum_jacobians) {
    if (jac.rows() != d || jac.cols() != n) throw InconsistentSnapshotError("snapshot: jacobian shape");
  }
  for (const auto& iso : isotropy_A) {
    if (iso.ambient_dim() != d) throw InconsistentSnapshotError("snapshot: isotropy ambient dimension");
  }
  if (isotropy_mu.ambient_dim() != d) throw InconsistentSnapshotError("snapshot: isotropy ambient dimension");

  double scale = 1.0;
  for (int a = 0; a < k; ++a) scale = std::max(scale, max_abs(generators) * max_abs(forms[a]));
  const double res = momentum_residual();
  if (!(res <= tol * scale)) {
    throw InconsistentSnapshotError("snapshot violates G^T Omega^A = Jac^A (residual " + std::to_string(res) + ")");
  }
  if (k > 0) {
    Tolerance t;
    t.eq_abs = std::max(t.eq_abs, tol);
    if (!subspace_equal(intersect_all(isotropy_A, t), isotropy_mu, t)) {
      throw InconsistentSnapshotError("isotropy_mu differs from the intersection of isotropy_A");
    }
  }
}

GSpaceSnapshot make_snapshot(FormFamily forms, std::vector<Matrix> jacobians, Matrix generators,
                             std::vector<Subspace> isotropy_A, const Tolerance& tol) {
  GSpaceSnapshot s;
  s.n = forms.n();
  s.k = forms.k();
  s.d = static_cast<int>(generators.cols());
  s.forms = std::move(forms);
  s.momentum_jacobians = std::move(jacobians);
  s.generators = std::move(generators);
  s.isotropy_A = std::move(isotropy_A);
  s.isotropy_mu = s.isotropy_A.empty() ? Subspace::full(s.d) : intersect_all(s.isotropy_A, tol);
  s.validate();
  return s;
}

Check compare_subspaces(std::string name, const Subspace& lhs, const Subspace& rhs, const Tolerance& tol) {
  Check c;
  c.name = std::move(name);
  c.lhs_dim = lhs.dim();
  c.rhs_dim = rhs.dim();
  c.residual = principal_angle_residual(lhs, rhs);
  c.passed = c.residual < tol.eq_abs;
  return c;
}

Subspace level_set_tangent(const GSpaceSnapshot& s, const Tolerance& tol) {
  if (s.k == 0 || s.d == 0) return Subspace::full(s.n);
  return kernel(stack_rows(s.momentum_jacobians, s.n), tol);
}

Subspace momentum_kernel(const GSpaceSnapshot& s, int a, const Tolerance& tol) {
  const Matrix& jac = s.momentum_jacobians.at(static_cast<std::size_t>(a));
  if (s.d == 0) return Subspace::full(s.n);
  return kernel(jac, tol);
}

Subspace orbit_tangent(const GSpaceSnapshot& s, const Subspace& subalgebra, const Tolerance& tol) {
  require_dims(subalgebra.ambient_dim() == s.d, "orbit_tangent: subalgebra dimension mismatch");
  return image(s.generators, subalgebra, tol);
}

Subspace full_orbit_tangent(const GSpaceSnapshot& s, const Tolerance& tol) {
  return orbit_tangent(s, Subspace::full(s.d), tol);
}

MomentumLemmaReport check_momentum_lemma(const GSpaceSnapshot& s, const Tolerance& tol) {
  const Subspace level = level_set_tangent(s, tol);
  const Subspace orbit = full_orbit_tangent(s, tol);
  const Subspace orbit_mu = orbit_tangent(s, s.isotropy_mu, tol);
  MomentumLemmaReport r;
  r.item1 = compare_subspaces("momentum_lemma_item1", orbit_mu, intersect(orbit, level, tol), tol);
  r.item2 = compare_subspaces("momentum_lemma_item2", level, k_orthogonal(orbit, s.forms, tol), tol);
  return r;
}

Check check_guenther_claim(const GSpaceSnapshot& s, const Tolerance& tol) {
  const Subspace level = level_set_tangent(s, tol);
  const Subspace orbit = full_orbit_tangent(s, tol);
  const Subspace orbit_mu = orbit_tangent(s, s.isotropy_mu, tol);
  const Subspace rhs = intersect(k_orthogonal(orbit, s.forms, tol), k_orthogonal(level, s.forms, tol), tol);
  return compare_subspaces("guenther_claim", orbit_mu, rhs, tol);
}

bool ConditionsReport::cond1_holds() const {
  for (const auto& c : cond1) {
    if (!c.passed) return false;
  }
  return true;
}

ConditionsReport check_reduction_conditions(const GSpaceSnapshot& s, const Tolerance& tol) {
  ConditionsReport r;
  const Subspace level = level_set_tangent(s, tol);
  const Subspace orbit_mu = orbit_tangent(s, s.isotropy_mu, tol);

  std::vector<Subspace> s_spaces;
  std::vector<Subspace> v_bases;
  for (int a = 0; a < s.k; ++a) {
    const QuotientPieces p = quotient_pieces(s, a, tol);
    const Subspace s_a = sum(p.ker_omega, p.orbit, tol);
    r.cond1.push_back(
        compare_subspaces("mw_cond_1[" + std::to_string(a + 1) + "]", p.ker_j, sum(level, s_a, tol), tol));
    s_spaces.push_back(s_a);

    const Matrix pi = p.v_basis.basis().transpose() * level.basis();
    r.epimorphism.push_back(numerical_rank(pi, tol) == p.v_basis.dim());
    v_bases.push_back(p.v_basis);
  }

  Subspace rhs = level;
  for (const auto& s_a : s_spaces) rhs = intersect(rhs, s_a, tol);
  r.cond2 = compare_subspaces("mw_cond_2", orbit_mu, rhs, tol);

  if (contains(level, orbit_mu, tol)) {
    const Subspace c = complement_in(orbit_mu, level, tol);
    if (c.dim() == 0) {
      r.trivial_kernel = true;
    } else {
      std::vector<Matrix> blocks;
      for (const auto& b : v_bases) blocks.push_back(b.basis().transpose() * c.basis());
      r.trivial_kernel = numerical_rank(stack_rows(blocks, c.dim()), tol) == c.dim();
    }
  }

  r.routes_agree = r.trivial_kernel == r.cond2.passed;
  for (int a = 0; a < s.k; ++a) {
    if (r.epimorphism[static_cast<std::size_t>(a)] != r.cond1[static_cast<std::size_t>(a)].passed) {
      r.routes_agree = false;
    }
  }
  return r;
}

Step1Result step1_quotient(const GSpaceSnapshot& s, int a, const Tolerance& tol) {
  if (a < 0 || a >= s.k) throw InputError("step1_quotient: form index out of range");
  const QuotientPieces p = quotient_pieces(s, a, tol);
  const Matrix& omega = s.forms[a];

  Step1Result r;
  r.representative = p.v_basis;
  r.form = restrict_form(omega, p.v_basis);
  r.dim_ker_j = p.ker_j.dim();
  r.dim_ker_omega = p.ker_omega.dim();
  r.dim_orbit = p.orbit.dim();
  r.nondegenerate = numerical_rank(r.form, tol) == p.v_basis.dim();

  // Work in T_xM / ker omega^A through its orthonormal representative.
  const QuotientForm qf = quotient_form(omega, tol);
  const Matrix to_quotient = qf.complement.basis().transpose();
  const Matrix& induced = qf.induced;
  const int m = qf.complement.dim();
  auto symplectic_orthogonal = [&](const Subspace& w) {
    if (w.dim() == 0) return Subspace::full(m);
    return kernel(w.basis().transpose() * induced, tol);
  };

  const Subspace ker_j_q = image(to_quotient, p.ker_j, tol);
  const Subspace gen_q = image(to_quotient, full_orbit_tangent(s, tol), tol);
  const Subspace orbit_q = image(to_quotient, p.orbit, tol);
  r.orthogonality = compare_subspaces("step1_orthogonality", ker_j_q, symplectic_orthogonal(gen_q), tol);
  r.isotropy =
      compare_subspaces("step1_isotropy", orbit_q, intersect(ker_j_q, symplectic_orthogonal(ker_j_q), tol), tol);
  return r;
}

ReducedSpace reduced_forms(const GSpaceSnapshot& s, const Tolerance& tol, int pullback_pairs, std::uint64_t seed) {
  ReducedSpace out;
  ReducedDiagnostics& diag = out.diagnostics;
  diag.conditions = check_reduction_conditions(s, tol);

  out.level_tangent = level_set_tangent(s, tol);
  out.orbit_tangent = orbit_tangent(s, s.isotropy_mu, tol);
  if (!contains(out.level_tangent, out.orbit_tangent, tol)) {
    throw InconsistentSnapshotError("G_mu orbit tangent is not contained in the level tangent");
  }
  out.quotient_basis = complement_in(out.orbit_tangent, out.level_tangent, tol);
  const Matrix& q = out.quotient_basis.basis();
  const Matrix& l = out.level_tangent.basis();
  const Matrix& w = out.orbit_tangent.basis();

  std::vector<Matrix> reduced;
  for (int a = 0; a < s.k; ++a) {
    Matrix f = q.transpose() * s.forms[a] * q;
    f = 0.5 * (f - f.transpose());
    reduced.push_back(std::move(f));
  }
  out.reduced_forms = FormFamily(out.quotient_basis.dim(), std::move(reduced));

  for (int a = 0; a < s.k; ++a) {
    if (w.cols() > 0 && l.cols() > 0) {
      diag.well_definedness = std::max(diag.well_definedness, max_abs(w.transpose() * s.forms[a] * l));
    }
  }

  // Pullback identity on random level vectors: [u] has coordinates Q^T u.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  diag.pullback_pairs = l.cols() > 0 ? pullback_pairs : 0;
  for (int i = 0; i < diag.pullback_pairs; ++i) {
    Vector cu(l.cols());
    Vector cv(l.cols());
    for (Eigen::Index j = 0; j < cu.size(); ++j) cu(j) = normal(rng);
    for (Eigen::Index j = 0; j < cv.size(); ++j) cv(j) = normal(rng);
    const Vector u = l * cu;
    const Vector v = l * cv;
    const Vector qu = q.transpose() * u;
    const Vector qv = q.transpose() * v;
    for (int a = 0; a < s.k; ++a) {
      const double lhs = out.reduced_forms.eval(a, qu, qv);
      const double rhs = s.forms.eval(a, u, v);
      diag.pullback_residual = std::max(diag.pullback_residual, std::abs(lhs - rhs));
    }
  }

  diag.polysymplectic = verify_polysymplectic(out.reduced_forms, tol);
  diag.consistent = diag.polysymplectic == diag.conditions.holds();

  // Characteristic space of the restricted forms, two ways.
  Subspace direct = out.level_tangent;
  if (l.cols() > 0 && s.k > 0) {
    std::vector<Matrix> blocks;
    for (int a = 0; a < s.k; ++a) blocks.push_back(l.transpose() * s.forms[a] * l);
    direct = lift(kernel(stack_rows(blocks, static_cast<int>(l.cols())), tol), out.level_tangent, tol);
  }
  const Subspace via_orthogonal =
      intersect(out.level_tangent, k_orthogonal(out.level_tangent, s.forms, tol), tol);
  diag.characteristic = compare_subspaces("characteristic_space", direct, via_orthogonal, tol);

  // Reduced forms against the V_A forms pulled back by the quotient maps.
  try {
    for (int a = 0; a < s.k; ++a) {
      const QuotientPieces p = quotient_pieces(s, a, tol);
      const Matrix& b = p.v_basis.basis();
      const Matrix pi = b.transpose() * q;
      const Matrix via_v = pi.transpose() * (b.transpose() * s.forms[a] * b) * pi;
      diag.step1_form_residual = std::max(diag.step1_form_residual, max_abs(via_v - out.reduced_forms[a]));
    }
  } catch (const InconsistentSnapshotError&) {
    diag.step1_form_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace polyred
