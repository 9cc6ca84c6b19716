#include "polyred/dynamics.hpp"

#include "polyred/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace polyred {

namespace {

Vector rk4_step(const VectorField& f, const Vector& x, double h) {
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * h * k1);
  const Vector k3 = f(x + 0.5 * h * k2);
  const Vector k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InputError("end time must be non-negative and finite");
  if (t_end == 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
}

std::vector<std::string> pair_names(int k) {
  std::vector<std::string> names;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) names.push_back("inv_" + std::to_string(a + 1) + std::to_string(b + 1));
  return names;
}

Vector pair_invariants(const std::vector<Vector>& nus) {
  const int k = static_cast<int>(nus.size());
  Vector out(k * (k + 1) / 2);
  int at = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) out(at++) = nus[static_cast<std::size_t>(a)].dot(nus[static_cast<std::size_t>(b)]);
  return out;
}

std::vector<std::string> nu_names(int k, int d) {
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < d; ++i)
      names.push_back("nu" + std::to_string(a + 1) + (d == 3 ? std::string(axes[i]) : "_" + std::to_string(i + 1)));
  return names;
}

VectorField reduced_field(const LieAlgebraData& alg, int k, int a) {
  const int d = alg.dim();
  return [&alg, k, d, a](const Vector& x) {
    require_dims(x.size() == k * d, "reduced field: state dimension");
    return stack(reduced_orbit_field(alg, unstack(x, d), a));
  };
}

void require_so3_metric(const LieAlgebraData& alg) {
  if (alg.dim() != 3) throw InputError("group integration is provided for so(3) only");
  if (!alg.metric()) throw InputError("group integration needs a metric");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<Vector> solve_hamiltonian_field(const FormFamily& forms, const Vector& dH, const Tolerance& tol) {
  require_dims(dH.size() == forms.n(), "solve_hamiltonian_field: covector dimension");
  if (!dH.allFinite()) throw InputError("solve_hamiltonian_field: non-finite covector");
  const int n = forms.n();
  const int k = forms.k();
  std::vector<Vector> fields(static_cast<std::size_t>(k), Vector::Zero(n));
  if (n == 0) return fields;
  const Matrix f = flat_matrix(forms);

  Vector x = Vector::Zero(static_cast<Eigen::Index>(n) * k);
  if (k > 0) {
    Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double thr = std::max(tol.rank_rel * (s.size() ? s(0) : 0.0), tol.abs_floor);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) <= thr) break;
      x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(dH) / s(i));
    }
  }
  const double res = (f * x - dH).norm();
  if (res > tol.eq_abs * (1.0 + dH.norm())) {
    throw NoSolutionError("dH is outside the range of the flat map (residual " + fmt(res) + ")");
  }
  for (int a = 0; a < k; ++a) fields[static_cast<std::size_t>(a)] = x.segment(static_cast<Eigen::Index>(a) * n, n);
  return fields;
}

double hamiltonian_residual(const FormFamily& forms, const std::vector<Vector>& fields, const Vector& dH) {
  return (flat(fields, forms) - dH).norm();
}

std::vector<Vector> group_hamiltonian_field(const LieAlgebraData& alg, const std::vector<Vector>& nus) {
  const int d = alg.dim();
  const int k = static_cast<int>(nus.size());
  std::vector<Vector> out;
  for (int a = 0; a < k; ++a) {
    const Vector xi = alg.metric_sharp(nus[static_cast<std::size_t>(a)]);
    Vector x(d * (k + 1));
    x.head(d) = xi;
    for (int b = 0; b < k; ++b) x.segment(d * (b + 1), d) = alg.ad_star(xi, nus[static_cast<std::size_t>(b)]);
    out.push_back(std::move(x));
  }
  return out;
}

Vector group_hamiltonian_differential(const LieAlgebraData& alg, const std::vector<Vector>& nus) {
  const int d = alg.dim();
  const int k = static_cast<int>(nus.size());
  Vector dh = Vector::Zero(d * (k + 1));
  for (int a = 0; a < k; ++a) dh.segment(d * (a + 1), d) = alg.metric_sharp(nus[static_cast<std::size_t>(a)]);
  return dh;
}

double reduced_hamiltonian(const LieAlgebraData& alg, const std::vector<Vector>& nus) {
  double h = 0.0;
  for (const auto& nu : nus) h += alg.dual_inner(nu, nu);
  return 0.5 * h;
}

std::vector<Vector> reduced_orbit_field(const LieAlgebraData& alg, const std::vector<Vector>& nus, int a) {
  if (a < 0 || a >= static_cast<int>(nus.size())) throw InputError("reduced_orbit_field: index out of range");
  const Vector xi = alg.metric_sharp(nus[static_cast<std::size_t>(a)]);
  std::vector<Vector> out;
  out.reserve(nus.size());
  for (const auto& nu : nus) out.push_back(alg.ad_star(xi, nu));
  return out;
}

Vector stack(const std::vector<Vector>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  Vector out(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.size()) = p;
    at += p.size();
  }
  return out;
}

std::vector<Vector> unstack(const Vector& x, int block) {
  require_dims(block > 0 && x.size() % block == 0, "unstack: size is not a multiple of the block");
  std::vector<Vector> out;
  for (Eigen::Index at = 0; at < x.size(); at += block) out.emplace_back(x.segment(at, block));
  return out;
}

Trajectory integrate(const VectorField& field, const Vector& x0, double t_end, double dt,
                     const Projection& projection) {
  const int steps = step_count(t_end, dt);
  const double h = steps > 0 ? t_end / steps : 0.0;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  Vector x = x0;
  for (int i = 1; i <= steps; ++i) {
    x = rk4_step(field, x, h);
    if (projection) projection(x);
    if (!x.allFinite()) throw DivergenceError("non-finite state", i);
    traj.times.push_back(i * h);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory integrate(const KVectorField& field, int a, const Vector& x0, double t_end, double dt,
                     const Projection& projection) {
  return integrate([&field, a](const Vector& x) { return field(x).at(static_cast<std::size_t>(a)); }, x0, t_end, dt,
                   projection);
}

Trajectory integrate_reduced(const LieAlgebraData& alg, const std::vector<Vector>& nus0, int a, double t_end,
                             double dt) {
  const int k = static_cast<int>(nus0.size());
  const int d = alg.dim();
  Trajectory traj = integrate(reduced_field(alg, k, a), stack(nus0), t_end, dt);
  traj.state_names = nu_names(k, d);
  traj.invariant_names = {"H"};
  for (const auto& n : pair_names(k)) traj.invariant_names.push_back(n);
  for (const auto& x : traj.states) {
    const auto nus = unstack(x, d);
    Vector row(1 + k * (k + 1) / 2);
    row(0) = reduced_hamiltonian(alg, nus);
    row.tail(row.size() - 1) = pair_invariants(nus);
    traj.invariant_log.push_back(std::move(row));
  }
  return traj;
}

Vector pack(const GroupState& x) {
  Vector out(9 + 3 * static_cast<Eigen::Index>(x.nus.size()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(3 * i + j) = x.g.matrix()(i, j);
  for (std::size_t a = 0; a < x.nus.size(); ++a) out.segment(9 + 3 * static_cast<Eigen::Index>(a), 3) = x.nus[a];
  return out;
}

GroupState unpack(const Vector& x) {
  require_dims(x.size() >= 9 && (x.size() - 9) % 3 == 0, "unpack: malformed group state");
  Matrix3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = x(3 * i + j);
  GroupState out{Rotation::project(g), {}};
  for (Eigen::Index at = 9; at < x.size(); at += 3) out.nus.emplace_back(x.segment(at, 3));
  return out;
}

GroupState group_step(const LieAlgebraData& alg, const GroupState& x, int a, double h) {
  require_so3_metric(alg);
  const int k = static_cast<int>(x.nus.size());
  if (a < 0 || a >= k) throw InputError("group_step: index out of range");
  const Vector nu0 = stack(to_dynamic(x.nus));
  auto velocity = [&](const Vector& nu) -> Vector3 {
    return alg.metric_sharp(nu.segment(3 * a, 3));
  };
  auto slope = [&](const Vector& nu) { return stack(reduced_orbit_field(alg, unstack(nu, 3), a)); };
  // Theta(t) with g(t) = g0 exp(Theta): Theta' = u + [Theta, u] / 2 + [Theta, [Theta, u]] / 12 + ...
  auto dexpinv = [](const Vector3& th, const Vector3& u) -> Vector3 {
    const Vector3 c = th.cross(u);
    return u + 0.5 * c + th.cross(c) / 12.0;
  };

  const Vector3 k1 = velocity(nu0);
  const Vector l1 = slope(nu0);
  const Vector nu2 = nu0 + 0.5 * h * l1;
  const Vector3 k2 = dexpinv(0.5 * h * k1, velocity(nu2));
  const Vector l2 = slope(nu2);
  const Vector nu3 = nu0 + 0.5 * h * l2;
  const Vector3 k3 = dexpinv(0.5 * h * k2, velocity(nu3));
  const Vector l3 = slope(nu3);
  const Vector nu4 = nu0 + h * l3;
  const Vector3 k4 = dexpinv(h * k3, velocity(nu4));
  const Vector l4 = slope(nu4);

  const Vector3 theta = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const Vector nu = nu0 + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  return {Rotation::project(x.g.matrix() * exp_so3(theta).matrix()), to_fixed(unstack(nu, 3))};
}

Trajectory integrate_group(const LieAlgebraData& alg, const GroupState& x0, int a, double t_end, double dt) {
  require_so3_metric(alg);
  const int steps = step_count(t_end, dt);
  const double h = steps > 0 ? t_end / steps : 0.0;
  const int k = static_cast<int>(x0.nus.size());
  const Vector j0 = stack(to_dynamic(coad_k(x0.g, x0.nus)));

  Trajectory traj;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) traj.state_names.push_back("g" + std::to_string(i + 1) + std::to_string(j + 1));
  for (const auto& n : nu_names(k, 3)) traj.state_names.push_back(n);
  traj.invariant_names = {"H"};
  for (const auto& n : pair_names(k)) traj.invariant_names.push_back(n);
  traj.invariant_names.push_back("J_drift");

  auto log = [&](const GroupState& x, double t) {
    const auto nus = to_dynamic(x.nus);
    Vector row(2 + k * (k + 1) / 2);
    row(0) = reduced_hamiltonian(alg, nus);
    row.segment(1, k * (k + 1) / 2) = pair_invariants(nus);
    row(row.size() - 1) = (stack(to_dynamic(coad_k(x.g, x.nus))) - j0).norm();
    traj.times.push_back(t);
    traj.states.push_back(pack(x));
    traj.invariant_log.push_back(std::move(row));
  };

  GroupState x = x0;
  log(x, 0.0);
  for (int i = 1; i <= steps; ++i) {
    x = group_step(alg, x, a, h);
    if (!pack(x).allFinite()) throw DivergenceError("non-finite group state", i);
    log(x, i * h);
  }
  return traj;
}

double ConservationReport::drift(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return max_drift[i];
  }
  throw InputError("conservation report has no quantity named " + name);
}

ConservationReport conservation_report(const Trajectory& traj) {
  ConservationReport r;
  r.names = traj.invariant_names;
  r.max_drift.assign(r.names.size(), 0.0);
  if (traj.invariant_log.empty()) return r;
  const Vector& first = traj.invariant_log.front();
  for (const auto& row : traj.invariant_log) {
    for (std::size_t i = 0; i < r.names.size(); ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      r.max_drift[i] = std::max(r.max_drift[i], std::abs(row(idx) - first(idx)));
    }
  }
  for (double v : r.max_drift) r.worst = std::max(r.worst, v);
  return r;
}

CommutationReport projection_commutation_check(const LieAlgebraData& alg, const std::vector<Vector3>& mus,
                                               const GroupState& x0, int a, double t_end, double dt) {
  require_so3_metric(alg);
  require_dims(mus.size() == x0.nus.size(), "projection_commutation_check: k mismatch");
  const int k = static_cast<int>(mus.size());
  const Vector mu = stack(to_dynamic(mus));
  auto j_of = [](const GroupState& x) { return stack(to_dynamic(coad_k(x.g, x.nus))); };
  if ((j_of(x0) - mu).norm() > 1e-9) throw PreconditionError("initial point is not on the level set");

  const int steps = step_count(t_end, dt);
  const double h = steps > 0 ? t_end / steps : 0.0;
  const VectorField red = reduced_field(alg, k, a);
  GroupState x = x0;
  Vector nu_red = stack(to_dynamic(x0.nus));

  CommutationReport r;
  r.steps = steps;
  for (int i = 1; i <= steps; ++i) {
    x = group_step(alg, x, a, h);
    nu_red = rk4_step(red, nu_red, h);
    if (!nu_red.allFinite() || !pack(x).allFinite()) throw DivergenceError("non-finite state", i);
    const Vector projected = stack(to_dynamic(coad_k(x.g.inverse(), mus)));
    r.sup_discrepancy = std::max(r.sup_discrepancy, (projected - nu_red).norm());
    r.momentum_drift = std::max(r.momentum_drift, (j_of(x) - mu).norm());
  }
  return r;
}

HarmonicSheet harmonic_sheet(const LieAlgebraData& alg, const Vector3& pi1, const Vector3& pi2, int ns, int nt,
                             double spacing, double dt) {
  if (alg.dim() != 3) throw InputError("harmonic_sheet: so(3) only");
  if (ns < 1 || nt < 1) throw InputError("harmonic_sheet: grid must be non-empty");
  if (!(spacing > 0.0)) throw InputError("harmonic_sheet: spacing must be positive");
  const int m = step_count(spacing, dt);
  const double h = spacing / m;

  HarmonicSheet sheet;
  const KksSo3 kks = kks_so3(pi1, pi2);
  sheet.kase = kks.kase;
  sheet.lambda0 = kks.lambda0;
  for (int i = 0; i < ns; ++i) sheet.s.push_back(i * spacing);
  for (int j = 0; j < nt; ++j) sheet.t.push_back(j * spacing);

  const VectorField f1 = reduced_field(alg, 2, 0);
  const VectorField f2 = reduced_field(alg, 2, 1);
  auto advance = [m, h](const VectorField& f, Vector x) {
    for (int i = 0; i < m; ++i) x = rk4_step(f, x, h);
    return x;
  };

  const Vector nu0 = stack({Vector(pi1), Vector(pi2)});
  // First column F^1_s(nu0) and first row F^2_t(nu0).
  std::vector<Vector> col(static_cast<std::size_t>(ns));
  std::vector<Vector> row(static_cast<std::size_t>(nt));
  col[0] = nu0;
  row[0] = nu0;
  for (int i = 1; i < ns; ++i) col[static_cast<std::size_t>(i)] = advance(f1, col[static_cast<std::size_t>(i - 1)]);
  for (int j = 1; j < nt; ++j) row[static_cast<std::size_t>(j)] = advance(f2, row[static_cast<std::size_t>(j - 1)]);

  sheet.nodes.assign(static_cast<std::size_t>(ns), std::vector<Vector>(static_cast<std::size_t>(nt)));
  std::vector<std::vector<Vector>> other = sheet.nodes;
  parallel_for(ns, [&](int i) {
    auto& line = sheet.nodes[static_cast<std::size_t>(i)];
    line[0] = col[static_cast<std::size_t>(i)];
    for (int j = 1; j < nt; ++j) line[static_cast<std::size_t>(j)] = advance(f2, line[static_cast<std::size_t>(j - 1)]);
  });
  parallel_for(nt, [&](int j) {
    other[0][static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)];
    for (int i = 1; i < ns; ++i) {
      other[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          advance(f1, other[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]);
    }
  });

  sheet.proportionality = kks.kase == 2 && kks.scale[0] != 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const Vector& x = sheet.nodes[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!x.allFinite()) throw DivergenceError("non-finite sheet node", static_cast<long>(i) * nt + j);
      sheet.commutator = std::max(
          sheet.commutator, (x - other[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]).norm());
      if (!std::isnan(sheet.proportionality)) {
        const Vector pi = x.head(3);
        const std::vector<Vector> nus{pi, kks.lambda0 * pi};
        const Vector x1 = stack(reduced_orbit_field(alg, nus, 0));
        const Vector x2 = stack(reduced_orbit_field(alg, nus, 1));
        sheet.proportionality = std::max(sheet.proportionality, (x2 - kks.lambda0 * x1).cwiseAbs().maxCoeff());
      }
      if (i + 1 < ns) {
        sheet.dirichlet_energy +=
            0.5 * (sheet.nodes[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j)] - x).squaredNorm();
      }
      if (j + 1 < nt) {
        sheet.dirichlet_energy +=
            0.5 * (sheet.nodes[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 1)] - x).squaredNorm();
      }
    }
  }
  return sheet;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (const auto& n : traj.state_names) out << ',' << n;
  for (const auto& n : traj.invariant_names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << fmt(traj.times[i]);
    for (Eigen::Index j = 0; j < traj.states[i].size(); ++j) out << ',' << fmt(traj.states[i](j));
    if (i < traj.invariant_log.size()) {
      for (Eigen::Index j = 0; j < traj.invariant_log[i].size(); ++j) out << ',' << fmt(traj.invariant_log[i](j));
    }
    out << '\n';
  }
}

void write_sheet_csv(std::ostream& out, const HarmonicSheet& sheet) {
  out << "s,t,nu1x,nu1y,nu1z,nu2x,nu2y,nu2z\n";
  for (std::size_t i = 0; i < sheet.s.size(); ++i) {
    for (std::size_t j = 0; j < sheet.t.size(); ++j) {
      out << fmt(sheet.s[i]) << ',' << fmt(sheet.t[j]);
      const Vector& x = sheet.nodes[i][j];
      for (Eigen::Index c = 0; c < x.size(); ++c) out << ',' << fmt(x(c));
      out << '\n';
    }
  }
}

}  // namespace polyred
