#pragma once

#include "polyred/models.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace polyred {

/// Minimum-norm solution of sum_A i_{X_A} omega^A = dH. Throws
/// NoSolutionError when dH is outside the range of the flat map.
std::vector<Vector> solve_hamiltonian_field(const FormFamily& forms, const Vector& dH, const Tolerance& tol = {});
/// |flat(X) - dH|.
double hamiltonian_residual(const FormFamily& forms, const std::vector<Vector>& fields, const Vector& dH);

// Group model G x (g^*)^k with H = 1/2 sum_A <nu_A, nu_A>.

/// X_A = (sharp nu_A; ad*_{sharp nu_A} nu_1, ..., ad*_{sharp nu_A} nu_k) in
/// left-trivialized coordinates. Requires a metric.
std::vector<Vector> group_hamiltonian_field(const LieAlgebraData& alg, const std::vector<Vector>& nus);
/// dH in left-trivialized coordinates.
Vector group_hamiltonian_differential(const LieAlgebraData& alg, const std::vector<Vector>& nus);
double reduced_hamiltonian(const LieAlgebraData& alg, const std::vector<Vector>& nus);

/// Component B of the reduced field A: ad*_{sharp nu_A} nu_B.
std::vector<Vector> reduced_orbit_field(const LieAlgebraData& alg, const std::vector<Vector>& nus, int a);

Vector stack(const std::vector<Vector>& parts);
std::vector<Vector> unstack(const Vector& x, int block);

// ---------------------------------------------------------------------------

using VectorField = std::function<Vector(const Vector&)>;
using KVectorField = std::function<std::vector<Vector>(const Vector&)>;
using Projection = std::function<void(Vector&)>;

/// Uniform-step trajectory with per-step monitored quantities.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::string> state_names;
  std::vector<std::string> invariant_names;
  std::vector<Vector> invariant_log;
};

/// Classical RK4 with t_end / dt rounded up to a whole number of uniform
/// steps. The projection, if any, is applied after every step. Throws
/// DivergenceError on a non-finite state.
Trajectory integrate(const VectorField& field, const Vector& x0, double t_end, double dt,
                     const Projection& projection = {});
Trajectory integrate(const KVectorField& field, int a, const Vector& x0, double t_end, double dt,
                     const Projection& projection = {});

/// Reduced orbit flow of field A; logs H, then nu_A . nu_B for A <= B.
Trajectory integrate_reduced(const LieAlgebraData& alg, const std::vector<Vector>& nus0, int a, double t_end,
                             double dt);

struct GroupState {
  Rotation g;
  std::vector<Vector3> nus;
};
Vector pack(const GroupState& x);
GroupState unpack(const Vector& x);

/// One RKMK4 step of the unreduced so(3) field A: g <- g exp(Theta) with a
/// truncated dexp^{-1} correction, nu by RK4, then polar re-orthonormalization.
GroupState group_step(const LieAlgebraData& alg, const GroupState& x, int a, double h);

/// Unreduced flow of field A. Logs H, the pairwise invariants and |J - J(x0)|.
Trajectory integrate_group(const LieAlgebraData& alg, const GroupState& x0, int a, double t_end, double dt);

struct ConservationReport {
  std::vector<std::string> names;
  std::vector<double> max_drift;
  double worst = 0.0;
  double drift(const std::string& name) const;
};
/// Largest deviation of every logged quantity from its initial value.
ConservationReport conservation_report(const Trajectory& traj);

struct CommutationReport {
  double sup_discrepancy = 0.0;  ///< sup_t max_A |g(t)^T mu_A - nu_A^red(t)|
  double momentum_drift = 0.0;   ///< sup_t |J(g(t), nu(t)) - mu|
  int steps = 0;
};
/// Integrates the unreduced field from x0 and the reduced field from its
/// projection. Throws PreconditionError when J(x0) differs from mu by more than 1e-9.
CommutationReport projection_commutation_check(const LieAlgebraData& alg, const std::vector<Vector3>& mus,
                                               const GroupState& x0, int a, double t_end, double dt);

struct HarmonicSheet {
  int kase = 0;
  double lambda0 = 0.0;
  std::vector<double> s;
  std::vector<double> t;
  /// nodes[i][j] = F^2_{t_j} F^1_{s_i}(nu0), stacked.
  std::vector<std::vector<Vector>> nodes;
  /// max over nodes of |F^1_s F^2_t(nu0) - F^2_t F^1_s(nu0)|.
  double commutator = 0.0;
  /// max |X2 - lambda0 X1| at (pi, lambda0 pi) along the sheet; NaN outside case 2.
  double proportionality = 0.0;
  double dirichlet_energy = 0.0;
};
/// ns x nt lattice with the given node spacing; dt is the integrator step.
HarmonicSheet harmonic_sheet(const LieAlgebraData& alg, const Vector3& pi1, const Vector3& pi2, int ns, int nt,
                             double spacing, double dt);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_sheet_csv(std::ostream& out, const HarmonicSheet& sheet);

}  // namespace polyred
