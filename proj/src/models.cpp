#include "polyred/models.hpp"

#include <cmath>

namespace polyred {

namespace {

constexpr int kFactorDim = 4;  // T*R^2: (q1, q2, p1, p2)

Matrix factor_form() {
  Matrix om = Matrix::Zero(kFactorDim, kFactorDim);
  om(0, 2) = 1.0;
  om(2, 0) = -1.0;
  om(1, 3) = 1.0;
  om(3, 1) = -1.0;
  return om;
}

std::vector<Subspace> isotropies(const LieAlgebraData& alg, const std::vector<Vector>& mus, const Tolerance& tol) {
  std::vector<Subspace> out;
  out.reserve(mus.size());
  for (const auto& mu : mus) out.push_back(isotropy_subalgebra(alg, {mu}, tol));
  return out;
}

}  // namespace

BaseAction trivial_action(int m) {
  return {LieAlgebraData::abelian(0), [m](int, const Vector&) { return Vector(Vector::Zero(m)); },
          [m](int, const Vector&) { return Matrix(Matrix::Zero(m, m)); }};
}

BaseAction translation_action(int m, const std::vector<int>& axes) {
  for (int ax : axes) {
    if (ax < 0 || ax >= m) throw InputError("translation_action: axis out of range");
  }
  return {LieAlgebraData::abelian(static_cast<int>(axes.size())),
          [m, axes](int a, const Vector&) {
            Vector v = Vector::Zero(m);
            v(axes.at(static_cast<std::size_t>(a))) = 1.0;
            return v;
          },
          [m](int, const Vector&) { return Matrix(Matrix::Zero(m, m)); }};
}

BaseAction rotation_action() {
  return {LieAlgebraData::so3(),
          [](int a, const Vector& q) {
            require_dims(q.size() == 3, "rotation_action: base must be R^3");
            return Vector(so3_hat(Vector3::Unit(a)) * q);
          },
          [](int a, const Vector&) { return Matrix(so3_hat(Vector3::Unit(a))); }};
}

std::vector<Vector> covelocity_momentum(const BaseAction& action, const CovelocityPoint& x) {
  if (!action.generator) throw UnsupportedActionError("base action has no generator");
  const int d = action.algebra.dim();
  std::vector<Vector> mus;
  for (const auto& p : x.p) {
    Vector mu(d);
    for (int a = 0; a < d; ++a) mu(a) = p.dot(action.generator(a, x.q));
    mus.push_back(std::move(mu));
  }
  return mus;
}

GSpaceSnapshot covelocity_snapshot(int m, int k, const CovelocityPoint& x, const BaseAction& action,
                                   const Tolerance& tol) {
  if (!action.generator || !action.derivative) {
    throw UnsupportedActionError("cotangent lift needs the generator and its derivative");
  }
  require_dims(x.q.size() == m && static_cast<int>(x.p.size()) == k, "covelocity_snapshot: point shape");
  for (const auto& p : x.p) require_dims(p.size() == m, "covelocity_snapshot: covector dimension");
  if (!x.q.allFinite()) throw InputError("covelocity_snapshot: non-finite point");

  const int n = m * (k + 1);
  const int d = action.algebra.dim();
  Matrix gens = Matrix::Zero(n, d);
  std::vector<Matrix> jacs(static_cast<std::size_t>(k), Matrix::Zero(d, n));
  for (int a = 0; a < d; ++a) {
    const Vector xq = action.generator(a, x.q);
    const Matrix dxq = action.derivative(a, x.q);
    require_dims(xq.size() == m && dxq.rows() == m && dxq.cols() == m, "base action output shape");
    gens.col(a).head(m) = xq;
    for (int b = 0; b < k; ++b) {
      const Vector& p = x.p[static_cast<std::size_t>(b)];
      gens.col(a).segment(m * (b + 1), m) = -dxq.transpose() * p;
      Matrix& jac = jacs[static_cast<std::size_t>(b)];
      jac.row(a).head(m) = (dxq.transpose() * p).transpose();
      jac.row(a).segment(m * (b + 1), m) = xq.transpose();
    }
  }
  const auto mus = covelocity_momentum(action, x);
  return make_snapshot(canonical_covelocity_forms(m, k), std::move(jacs), std::move(gens),
                       isotropies(action.algebra, mus, tol), tol);
}

GSpaceSnapshot product_model_snapshot(ProductConfig config, const Vector& point, const Tolerance& tol) {
  require_dims(point.size() == 2 * kFactorDim, "product model points live in R^8");
  if (!point.allFinite()) throw InputError("product_model_snapshot: non-finite point");
  const int n = 2 * kFactorDim;
  std::vector<Matrix> omegas(2, Matrix::Zero(n, n));
  omegas[0].topLeftCorner(kFactorDim, kFactorDim) = factor_form();
  omegas[1].bottomRightCorner(kFactorDim, kFactorDim) = factor_form();

  const int d = config == ProductConfig::kDiagonal ? 1 : 2;
  Matrix gens = Matrix::Zero(n, d);
  std::vector<Matrix> jacs(2, Matrix::Zero(d, n));
  if (config == ProductConfig::kDiagonal) {
    gens(0, 0) = 1.0;
    gens(kFactorDim, 0) = 1.0;
    jacs[0](0, 2) = 1.0;
    jacs[1](0, kFactorDim + 2) = 1.0;
  } else {
    gens(0, 0) = 1.0;
    gens(kFactorDim, 1) = 1.0;
    jacs[0](0, 2) = 1.0;
    jacs[1](1, kFactorDim + 2) = 1.0;
  }
  std::vector<Subspace> iso(2, Subspace::full(d));
  return make_snapshot(FormFamily(n, std::move(omegas)), std::move(jacs), std::move(gens), std::move(iso), tol);
}

std::vector<Vector> product_model_momentum(ProductConfig config, const Vector& point) {
  require_dims(point.size() == 2 * kFactorDim, "product model points live in R^8");
  if (config == ProductConfig::kDiagonal) {
    return {Vector::Constant(1, point(2)), Vector::Constant(1, point(kFactorDim + 2))};
  }
  Vector j1 = Vector::Zero(2);
  Vector j2 = Vector::Zero(2);
  j1(0) = point(2);
  j2(1) = point(kFactorDim + 2);
  return {j1, j2};
}

FormFamily group_model_forms(const LieAlgebraData& alg, const std::vector<Vector>& nus) {
  const int d = alg.dim();
  const int k = static_cast<int>(nus.size());
  const int n = d * (k + 1);
  std::vector<Matrix> omegas;
  for (int a = 0; a < k; ++a) {
    const Vector& nu = nus[static_cast<std::size_t>(a)];
    require_dims(nu.size() == d, "group_model_forms: covector dimension");
    Matrix om = Matrix::Zero(n, n);
    const int off = d * (a + 1);
    for (int i = 0; i < d; ++i) {
      om(i, off + i) = 1.0;
      om(off + i, i) = -1.0;
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int e = 0; e < d; ++e) s += alg.c(i, j, e) * nu(e);
        om(i, j) = s;
      }
    omegas.push_back(std::move(om));
  }
  return FormFamily(n, std::move(omegas));
}

GSpaceSnapshot group_covelocity_snapshot(const LieAlgebraData& alg, const Matrix& coad_g, const Matrix& ad_ginv,
                                         const std::vector<Vector>& nus, const Tolerance& tol) {
  const int d = alg.dim();
  const int k = static_cast<int>(nus.size());
  require_dims(coad_g.rows() == d && coad_g.cols() == d && ad_ginv.rows() == d && ad_ginv.cols() == d,
               "group_covelocity_snapshot: action matrices must be d x d");
  const int n = d * (k + 1);

  Matrix gens = Matrix::Zero(n, d);
  gens.topRows(d) = ad_ginv;

  // T J^A (eta, beta) = Coad_g (beta_A - ad*_eta nu_A).
  std::vector<Matrix> jacs;
  std::vector<Vector> mus;
  for (int a = 0; a < k; ++a) {
    const Vector& nu = nus[static_cast<std::size_t>(a)];
    Matrix jac = Matrix::Zero(d, n);
    jac.leftCols(d) = -coad_g * alg.ad_star_in_xi(nu);
    jac.middleCols(d * (a + 1), d) = coad_g;
    jacs.push_back(std::move(jac));
    mus.push_back(coad_g * nu);
  }
  return make_snapshot(group_model_forms(alg, nus), std::move(jacs), std::move(gens), isotropies(alg, mus, tol),
                       tol);
}

GSpaceSnapshot group_covelocity_snapshot(const GroupModelPoint& x, const Tolerance& tol) {
  const Matrix g = x.g.matrix();
  return group_covelocity_snapshot(LieAlgebraData::so3(), g, g.transpose(), to_dynamic(x.nus), tol);
}

std::vector<Vector3> group_momentum(const GroupModelPoint& x) { return coad_k(x.g, x.nus); }

GroupModelPoint group_level_point(const Rotation& g, const std::vector<Vector3>& mus) {
  return {g, coad_k(g.inverse(), mus)};
}

std::vector<Vector> to_dynamic(const std::vector<Vector3>& v) {
  std::vector<Vector> out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

std::vector<Vector3> to_fixed(const std::vector<Vector>& v) {
  std::vector<Vector3> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    require_dims(x.size() == 3, "to_fixed: expected 3-vectors");
    out.emplace_back(x);
  }
  return out;
}

Vector OrbitForms::representative(const Vector& w) const {
  require_dims(w.size() == generator_matrix.rows(), "OrbitForms: tangent vector dimension");
  if (generator_matrix.cols() == 0) return Vector(0);
  Eigen::JacobiSVD<Matrix> svd(generator_matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  if (smax <= 0.0) return Vector::Zero(generator_matrix.cols());
  svd.setThreshold(1e-9);
  return svd.solve(w);
}

double OrbitForms::eval(int a, const Vector& u, const Vector& v) const {
  const Vector& nu = nus.at(static_cast<std::size_t>(a));
  return -nu.dot(algebra.bracket(representative(u), representative(v)));
}

OrbitForms k_coadjoint_orbit_forms(const std::vector<Vector>& nus, const LieAlgebraData& alg, const Tolerance& tol) {
  const int d = alg.dim();
  const int k = static_cast<int>(nus.size());
  OrbitForms out;
  out.algebra = alg;
  out.nus = nus;
  out.generator_matrix = Matrix::Zero(d * k, d);
  for (int a = 0; a < d; ++a) {
    const auto gen = coadjoint_generator(alg, Vector::Unit(d, a), nus);
    for (int b = 0; b < k; ++b) out.generator_matrix.col(a).segment(d * b, d) = gen[static_cast<std::size_t>(b)];
  }
  out.tangent = orthonormal_basis(out.generator_matrix, tol);

  const int r = out.tangent.dim();
  std::vector<Vector> reps;
  for (int i = 0; i < r; ++i) reps.push_back(out.representative(out.tangent.basis().col(i)));
  std::vector<Matrix> omegas;
  for (int b = 0; b < k; ++b) {
    Matrix om(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        om(i, j) = -nus[static_cast<std::size_t>(b)].dot(alg.bracket(reps[static_cast<std::size_t>(i)],
                                                                     reps[static_cast<std::size_t>(j)]));
    om = 0.5 * (om - om.transpose());
    omegas.push_back(std::move(om));
  }
  out.forms = FormFamily(r, std::move(omegas));

  const Subspace iso = kernel(out.generator_matrix, tol);
  for (int z = 0; z < iso.dim(); ++z)
    for (int b = 0; b < d; ++b)
      for (const auto& nu : nus)
        out.well_definedness = std::max(
            out.well_definedness, std::abs(nu.dot(alg.bracket(iso.basis().col(z), Vector::Unit(d, b)))));
  return out;
}

double KksSo3::case2_form(int a, const Vector3& pi, const Vector3& u, const Vector3& v) const {
  if (kase != 2) throw PreconditionError("case2_form: orbit is not of the dependent type");
  if (a < 0 || a > 1) throw InputError("case2_form: form index out of range");
  const std::vector<Vector> nus{Vector(scale[0] * pi), Vector(scale[1] * pi)};
  Vector wu(6);
  Vector wv(6);
  wu << scale[0] * u, scale[1] * u;
  wv << scale[0] * v, scale[1] * v;
  return k_coadjoint_orbit_forms(nus, LieAlgebraData::so3()).eval(a, wu, wv);
}

KksSo3 kks_so3(const Vector3& pi1, const Vector3& pi2, const Tolerance& tol) {
  if (!pi1.allFinite() || !pi2.allFinite()) throw InputError("kks_so3: non-finite seeds");
  KksSo3 out;
  out.seeds = {pi1, pi2};
  const double n1 = pi1.norm();
  const double n2 = pi2.norm();
  if (n1 <= tol.abs_floor && n2 <= tol.abs_floor) {
    out.kase = 1;
    return out;
  }
  const bool dependent =
      n1 <= tol.abs_floor || n2 <= tol.abs_floor || pi1.cross(pi2).norm() / (n1 * n2) < 1e-9;
  if (dependent) {
    out.kase = 2;
    if (n1 > tol.abs_floor) {
      out.base = pi1;
      out.lambda0 = pi1.dot(pi2) / (n1 * n1);
      out.scale = {1.0, out.lambda0};
    } else {
      out.base = pi2;
      out.scale = {0.0, 1.0};
    }
    return out;
  }
  out.kase = 3;
  const LieAlgebraData so3 = LieAlgebraData::so3();
  const OrbitForms orbit = k_coadjoint_orbit_forms({Vector(pi1), Vector(pi2)}, so3, tol);
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.identity_forms[static_cast<std::size_t>(a)](i, j) =
            orbit.eval(a, orbit.generator_matrix.col(i), orbit.generator_matrix.col(j));
  return out;
}

GSpaceSnapshot degenerate_fixture_snapshot() {
  const int n = 4;
  Matrix om = Matrix::Zero(n, n);
  om(0, 1) = 1.0;
  om(1, 0) = -1.0;
  return make_snapshot(FormFamily(n, {om, om}), {Matrix::Zero(1, n), Matrix::Zero(1, n)}, Matrix::Zero(n, 1),
                       {Subspace::full(1), Subspace::full(1)});
}

Rotation random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double w = normal(rng);
  const double x = normal(rng);
  const double y = normal(rng);
  const double z = normal(rng);
  return rotation_from_quaternion(w, x, y, z);
}

Vector3 random_vector3(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double x = normal(rng);
  const double y = normal(rng);
  const double z = normal(rng);
  return {x, y, z};
}

}  // namespace polyred
