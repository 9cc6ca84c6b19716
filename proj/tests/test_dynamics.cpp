#include "oracles.hpp"
#include "polyred/dynamics.hpp"

#include <doctest.h>

#include <sstream>

using namespace polyred;

TEST_CASE("minimum-norm Hamiltonian field on the 3-dimensional canonical model") {
  // dH = alpha dq + beta dp1 + gamma dp2 has X1 = beta dq - alpha/2 dp1, X2 = gamma dq - alpha/2 dp2.
  const FormFamily f = canonical_covelocity_forms(1, 2);
  const double alpha = 0.7, beta = -1.3, gamma = 2.1;
  const auto x = solve_hamiltonian_field(f, Vector3(alpha, beta, gamma));
  CHECK((x[0] - Vector(Vector3(beta, -alpha / 2.0, 0.0))).norm() < 1e-14);
  CHECK((x[1] - Vector(Vector3(gamma, 0.0, -alpha / 2.0))).norm() < 1e-14);
}

TEST_CASE("solver returns the minimum-norm field on transformed families") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 3;
    const int k = 1 + (trial / 3) % 3;
    const FormFamily canon = canonical_covelocity_forms(m, k);
    const int n = canon.n();
    Matrix p = oracle::random_matrix(rng, n, n);
    while (std::abs(p.determinant()) < 1e-3) p = oracle::random_matrix(rng, n, n);
    std::vector<Matrix> omegas;
    for (int a = 0; a < k; ++a) omegas.push_back(p.transpose() * canon[a] * p);
    const FormFamily f(n, omegas);
    const Vector dh = oracle::random_vector(rng, n);
    const auto x = solve_hamiltonian_field(f, dh);
    CHECK(hamiltonian_residual(f, x, dh) < 1e-10 * (1.0 + dh.norm()));
    // Minimum norm means orthogonal to the kernel of the flat map.
    const Vector xs = stack(x);
    CHECK(oracle::null_space_component(flat_matrix(f), xs) < 1e-9 * (1.0 + xs.norm()));
  }
}

TEST_CASE("solver reports covectors outside the range") {
  Matrix omega = Matrix::Zero(3, 3);
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  const FormFamily f(3, {omega});
  CHECK_THROWS_AS(solve_hamiltonian_field(f, Vector3(0, 0, 1)), NoSolutionError);
  CHECK_NOTHROW(solve_hamiltonian_field(f, Vector3(1, 0, 0)));
}

TEST_CASE("group Hamiltonian field solves the Hamilton equation") {
  std::mt19937_64 rng(62);
  Matrix metric = Vector3(1.0, 2.0, 3.0).asDiagonal();
  const LieAlgebraData alg = LieAlgebraData::so3(metric);
  const std::vector<Vector> nus{Vector(random_vector3(rng)), Vector(random_vector3(rng))};
  const FormFamily f = group_model_forms(alg, nus);
  const auto x = group_hamiltonian_field(alg, nus);
  const Vector dh = group_hamiltonian_differential(alg, nus);
  CHECK(hamiltonian_residual(f, x, dh) < 1e-13);
  // dH by finite differences in the nu blocks
  const double h = 1e-6;
  for (int i = 0; i < 6; ++i) {
    auto plus = nus, minus = nus;
    plus[static_cast<std::size_t>(i / 3)](i % 3) += h;
    minus[static_cast<std::size_t>(i / 3)](i % 3) -= h;
    const double fd = (reduced_hamiltonian(alg, plus) - reduced_hamiltonian(alg, minus)) / (2.0 * h);
    CHECK(std::abs(dh(3 + i) - fd) < 1e-8);
  }
  CHECK(dh.head(3).norm() == 0.0);
}

TEST_CASE("reduced orbit field is a coadjoint generator") {
  std::mt19937_64 rng(63);
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix(Vector3(0.5, 1.0, 4.0).asDiagonal()));
  const std::vector<Vector> nus{Vector(random_vector3(rng)), Vector(random_vector3(rng))};
  for (int a = 0; a < 2; ++a) {
    const auto field = reduced_orbit_field(alg, nus, a);
    const auto gen = coadjoint_generator(alg, -alg.metric_sharp(nus[static_cast<std::size_t>(a)]), nus);
    for (int b = 0; b < 2; ++b) CHECK((field[b] - gen[b]).norm() < 1e-14);
  }
}

TEST_CASE("RK4 converges at fourth order on a linear system") {
  Matrix a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const VectorField f = [&](const Vector& x) { return Vector(a * x); };
  const Vector x0 = Eigen::Vector2d(1.0, 0.0);
  std::vector<double> errors;
  for (double dt : {0.04, 0.02, 0.01}) {
    const Trajectory t = integrate(f, x0, 1.0, dt);
    CHECK(t.times.back() == doctest::Approx(1.0));
    errors.push_back((t.states.back() - Vector(Eigen::Vector2d(std::cos(1.0), -std::sin(1.0)))).norm());
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(16.0).epsilon(0.05));
  CHECK(errors[1] / errors[2] == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("step count rounds up to reach the final time") {
  const VectorField zero = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  const Trajectory t = integrate(zero, Vector::Ones(1), 1.0, 0.3);
  CHECK(t.times.size() == 5);
  CHECK(t.times.back() == doctest::Approx(1.0));
  CHECK(integrate(zero, Vector::Ones(1), 0.0, 0.1).times.size() == 1);
}

TEST_CASE("blow-up raises a divergence error with the step index") {
  const VectorField blowup = [](const Vector& x) { return Vector(x.array().square()); };
  try {
    integrate(blowup, Vector::Ones(1), 10.0, 0.1);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.code() == ErrorCode::kDivergence);
  }
  CHECK_THROWS_AS(integrate(blowup, Vector::Ones(1), 1.0, -0.1), InputError);
}

TEST_CASE("reduced flow with the identity metric is a rigid rotation") {
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix::Identity(3, 3));
  const std::vector<Vector3> mus{{0, 0, 1}, {1, 0, 0}};
  const Trajectory t = integrate_reduced(alg, to_dynamic(mus), 0, 2.0, 1e-3);
  for (std::size_t i = 0; i < t.times.size(); i += 100) {
    const Matrix3 rot = exp_so3(-t.times[i] * mus[0]).matrix();
    CHECK((t.states[i].segment(3, 3) - Vector(rot * mus[1])).norm() < 1e-10);
    CHECK((t.states[i].head(3) - Vector(mus[0])).norm() < 1e-14);
  }
  const ConservationReport c = conservation_report(t);
  CHECK(c.worst < 1e-12);
  CHECK(c.drift("H") < 1e-12);
}

TEST_CASE("unreduced flow conserves momentum and matches the reduced flow") {
  std::mt19937_64 rng(64);
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix(Vector3(0.2, 0.4, 0.6).asDiagonal()));
  const std::vector<Vector3> mus{{0, 0, 1}, {1, 0, 0}};
  const GroupModelPoint p = group_level_point(random_rotation(rng), mus);
  const GroupState x0{p.g, p.nus};
  const Trajectory t = integrate_group(alg, x0, 1, 1.0, 1e-3);
  CHECK(conservation_report(t).drift("J_drift") < 1e-7);
  const CommutationReport c = projection_commutation_check(alg, mus, x0, 1, 1.0, 1e-3);
  CHECK(c.sup_discrepancy < 1e-6);
  CHECK(c.steps == 1000);
  std::vector<Vector3> wrong = mus;
  wrong[0] *= 2.0;
  CHECK_THROWS_AS(projection_commutation_check(alg, wrong, x0, 1, 1.0, 1e-3), PreconditionError);
}

TEST_CASE("pack and unpack round trip") {
  std::mt19937_64 rng(65);
  const GroupState x{random_rotation(rng), {random_vector3(rng), random_vector3(rng), random_vector3(rng)}};
  const Vector packed = pack(x);
  CHECK(packed.size() == 18);
  const GroupState y = unpack(packed);
  CHECK((y.g.matrix() - x.g.matrix()).norm() < 1e-15);
  for (std::size_t a = 0; a < 3; ++a) CHECK((y.nus[a] - x.nus[a]).norm() == 0.0);
}

TEST_CASE("harmonic sheet for proportional seeds") {
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix(Vector3(1, 2, 3).asDiagonal()));
  const Vector3 pi1(0.3, -0.5, 0.8);
  const HarmonicSheet s = harmonic_sheet(alg, pi1, 2.0 * pi1, 6, 6, 0.05, 1e-3);
  CHECK(s.kase == 2);
  CHECK(s.lambda0 == doctest::Approx(2.0));
  CHECK(s.proportionality < 1e-14);
  CHECK(s.commutator < 1e-8);
  CHECK(s.dirichlet_energy > 0.0);
  CHECK(s.nodes.size() == 6);
  CHECK(s.nodes[0].size() == 6);
}

TEST_CASE("harmonic sheet for independent seeds does not commute") {
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix(Vector3(1, 2, 3).asDiagonal()));
  const HarmonicSheet s = harmonic_sheet(alg, Vector3(1, 2, 3), Vector3(0, 1, 0), 4, 4, 0.05, 1e-3);
  CHECK(s.kase == 3);
  CHECK(std::isnan(s.proportionality));
  CHECK(s.commutator > 1e-3);
}

TEST_CASE("CSV writers emit headers and 17-digit values") {
  const LieAlgebraData alg = LieAlgebraData::so3(Matrix::Identity(3, 3));
  const Trajectory t = integrate_reduced(alg, {Vector(Vector3(0, 0, 1)), Vector(Vector3(1, 0, 0))}, 0, 0.01, 1e-3);
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,nu1x,nu1y,nu1z,nu2x,nu2y,nu2z,H,inv_11,inv_12,inv_22");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 11);
  // Values round-trip exactly through the text.
  std::istringstream again(out.str());
  std::string row;
  std::getline(again, row);
  std::getline(again, row);
  std::getline(again, row);
  std::vector<double> fields;
  std::stringstream cells(row);
  for (std::string cell; std::getline(cells, cell, ',');) fields.push_back(std::stod(cell));
  REQUIRE(fields.size() == 11);
  CHECK(fields[0] == t.times[1]);
  for (int i = 0; i < 6; ++i) CHECK(fields[static_cast<std::size_t>(1 + i)] == t.states[1](i));
}
