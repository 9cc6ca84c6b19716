#include "oracles.hpp"
#include "polyred/models.hpp"

#include <doctest.h>

using namespace polyred;

namespace {

/// Left-trivialized tangent (eta, beta) at (g, nu) integrated along (g exp(t eta), nu + t beta).
std::vector<Vector3> momentum_along(const GroupModelPoint& x, const Vector& tangent, double t) {
  GroupModelPoint y{x.g * exp_so3(t * Vector3(tangent.head<3>())), x.nus};
  for (std::size_t a = 0; a < y.nus.size(); ++a) y.nus[a] += t * tangent.segment(3 + 3 * static_cast<int>(a), 3);
  return group_momentum(y);
}

}  // namespace

TEST_CASE("group model jacobian matches finite differences of J") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupModelPoint x{random_rotation(rng), {random_vector3(rng), random_vector3(rng)}};
    const GSpaceSnapshot s = group_covelocity_snapshot(x);
    CHECK(s.n == 9);
    const Vector dir = oracle::random_vector(rng, 9);
    const double h = 1e-6;
    const auto plus = momentum_along(x, dir, h);
    const auto minus = momentum_along(x, dir, -h);
    for (int a = 0; a < 2; ++a) {
      const Vector3 fd = (plus[a] - minus[a]) / (2.0 * h);
      CHECK((s.momentum_jacobians[a] * dir - Vector(fd)).norm() < 1e-7);
    }
  }
}

TEST_CASE("group model generator is the left action velocity") {
  std::mt19937_64 rng(52);
  const GroupModelPoint x{random_rotation(rng), {random_vector3(rng), random_vector3(rng)}};
  const GSpaceSnapshot s = group_covelocity_snapshot(x);
  const double h = 1e-6;
  for (int a = 0; a < 3; ++a) {
    Vector3 e = Vector3::Zero();
    e(a) = 1.0;
    const Matrix3 dg = (exp_so3(h * e).matrix() - exp_so3(-h * e).matrix()) * x.g.matrix() / (2.0 * h);
    const Matrix3 eta_hat = x.g.matrix().transpose() * dg;
    const Vector3 eta(eta_hat(2, 1), eta_hat(0, 2), eta_hat(1, 0));
    CHECK((s.generators.col(a).head(3) - Vector(eta)).norm() < 1e-8);
    CHECK(s.generators.col(a).tail(6).norm() == 0.0);
  }
}

TEST_CASE("level points lie on the momentum level") {
  std::mt19937_64 rng(53);
  const std::vector<Vector3> mus{{0.3, -1.0, 2.0}, {1.0, 0.5, 0.0}};
  const GroupModelPoint x = group_level_point(random_rotation(rng), mus);
  const auto j = group_momentum(x);
  for (int a = 0; a < 2; ++a) CHECK((j[a] - mus[a]).norm() < 1e-14);
}

TEST_CASE("group reduction is polysymplectic for independent and dependent momenta") {
  std::mt19937_64 rng(54);
  const std::vector<std::vector<Vector3>> configs{{{0, 0, 1}, {1, 0, 0}}, {{0, 0, 1}, {0, 0, 2}}};
  const std::vector<int> expected_dims{3, 2};
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const GSpaceSnapshot s = group_covelocity_snapshot(group_level_point(random_rotation(rng), configs[c]));
    const ReducedSpace r = reduced_forms(s);
    CHECK(r.diagnostics.conditions.holds());
    CHECK(r.diagnostics.polysymplectic);
    CHECK(r.quotient_basis.dim() == expected_dims[c]);
  }
}

TEST_CASE("covelocity rotation model satisfies the momentum identity") {
  std::mt19937_64 rng(55);
  const BaseAction action = rotation_action();
  const CovelocityPoint x{random_vector3(rng), {random_vector3(rng), random_vector3(rng)}};
  const GSpaceSnapshot s = covelocity_snapshot(3, 2, x, action);
  const double h = 1e-6;
  for (int a = 0; a < 3; ++a) {
    Vector3 e = Vector3::Zero();
    e(a) = 1.0;
    // Cotangent lift of a rotation acts on q and every covelocity alike.
    Vector fd(9);
    const Matrix3 d = (exp_so3(h * e).matrix() - exp_so3(-h * e).matrix()) / (2.0 * h);
    fd << d * x.q, d * x.p[0], d * x.p[1];
    CHECK((s.generators.col(a) - fd).norm() < 1e-8);
  }
  CHECK(s.momentum_residual() < 1e-12);
  const auto j = covelocity_momentum(action, x);
  CHECK((j[0] - Vector(Vector3(x.q).cross(Vector3(x.p[0])))).norm() < 1e-14);
}

TEST_CASE("actions without a derivative cannot be lifted") {
  BaseAction action = translation_action(2, {0});
  action.derivative = nullptr;
  const CovelocityPoint x{Vector::Zero(2), {Vector::Zero(2)}};
  CHECK_THROWS_AS(covelocity_snapshot(2, 1, x, action), UnsupportedActionError);
}

TEST_CASE("orbit classification of pairs in so(3)*") {
  CHECK(kks_so3(Vector3::Zero(), Vector3::Zero()).kase == 1);
  const KksSo3 dep = kks_so3(Vector3(0, 0, 1), Vector3(0, 0, 2));
  CHECK(dep.kase == 2);
  CHECK(dep.lambda0 == doctest::Approx(2.0));
  CHECK(kks_so3(Vector3::Zero(), Vector3(0, 1, 0)).kase == 2);
  CHECK(kks_so3(Vector3(1, 2, 3), Vector3(0, 1, 0)).kase == 3);
}

TEST_CASE("case 3 forms at the identity match the published values") {
  const KksSo3 kks = kks_so3(Vector3(1, 2, 3), Vector3(0, 1, 0));
  const Matrix3& w1 = kks.identity_forms[0];
  const Matrix3& w2 = kks.identity_forms[1];
  CHECK(std::abs(w1(0, 1) - -3.0) < 1e-12);
  CHECK(std::abs(w1(1, 2) - -1.0) < 1e-12);
  CHECK(std::abs(w1(2, 0) - -2.0) < 1e-12);
  CHECK(std::abs(w2(0, 1)) < 1e-12);
  CHECK(std::abs(w2(1, 2)) < 1e-12);
  CHECK(std::abs(w2(2, 0) - -1.0) < 1e-12);
}

TEST_CASE("case 2 forms at unit radius equal minus the triple product") {
  std::mt19937_64 rng(56);
  const KksSo3 kks = kks_so3(Vector3(0, 0, 1), Vector3(0, 0, 2));
  for (int i = 0; i < 50; ++i) {
    const Vector3 pi = random_vector3(rng).normalized();
    Vector3 u = random_vector3(rng);
    Vector3 v = random_vector3(rng);
    u -= pi * pi.dot(u);
    v -= pi * pi.dot(v);
    const double base = -pi.dot(u.cross(v));
    CHECK(std::abs(kks.case2_form(0, pi, u, v) - base) < 1e-10);
    CHECK(std::abs(kks.case2_form(1, pi, u, v) - 2.0 * base) < 1e-10);
  }
}

TEST_CASE("case 2 forms scale with the inverse square radius") {
  std::mt19937_64 rng(57);
  const double r = 2.5;
  const KksSo3 kks = kks_so3(Vector3(0, r, 0), Vector3(0, -r, 0));
  CHECK(kks.lambda0 == doctest::Approx(-1.0));
  const Vector3 pi = r * random_vector3(rng).normalized();
  Vector3 u = random_vector3(rng);
  Vector3 v = random_vector3(rng);
  u -= pi * pi.dot(u) / (r * r);
  v -= pi * pi.dot(v) / (r * r);
  CHECK(std::abs(kks.case2_form(0, pi, u, v) + pi.dot(u.cross(v)) / (r * r)) < 1e-10);
}

TEST_CASE("orbit forms are well defined and match the group reduction") {
  std::mt19937_64 rng(58);
  const LieAlgebraData so3 = LieAlgebraData::so3();
  const std::vector<Vector3> mus{{1, 2, 3}, {0, 1, 0}};
  const GroupModelPoint x = group_level_point(random_rotation(rng), mus);
  const OrbitForms orbit = k_coadjoint_orbit_forms(to_dynamic(x.nus), so3);
  CHECK(orbit.tangent.dim() == 3);
  CHECK(orbit.well_definedness < 1e-12);
  CHECK(verify_polysymplectic(orbit.forms));
  const ReducedSpace r = reduced_forms(group_covelocity_snapshot(x));
  const Matrix& q = r.quotient_basis.basis();
  for (int a = 0; a < 2; ++a)
    for (Eigen::Index i = 0; i < q.cols(); ++i)
      for (Eigen::Index j = 0; j < q.cols(); ++j)
        CHECK(std::abs(r.reduced_forms[a](i, j) - orbit.eval(a, q.col(i).tail(6), q.col(j).tail(6))) < 1e-9);
}
