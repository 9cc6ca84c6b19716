#include "polyred/experiments.hpp"

#include "polyred/dynamics.hpp"
#include "polyred/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace polyred {

namespace {

constexpr double kPullbackBound = 1e-10;
constexpr double kCrossValidationBound = 1e-9;
constexpr double kInvariantDriftBound = 1e-8;
constexpr double kMomentumDriftBound = 1e-7;
constexpr double kCommutationBound = 1e-6;
constexpr double kSheetCommutatorBound = 1e-8;
constexpr double kProportionalityBound = 1e-14;

std::mt19937_64 sample_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

Vector3 as_vector3(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw InputError(std::string(what) + " needs exactly 3 values");
  return {v[0], v[1], v[2]};
}

std::vector<Vector3> as_mus(const std::vector<double>& v) {
  if (v.empty() || v.size() % 3 != 0) throw InputError("mu needs 3k values");
  std::vector<Vector3> out;
  for (std::size_t i = 0; i < v.size(); i += 3) out.emplace_back(v[i], v[i + 1], v[i + 2]);
  return out;
}

std::vector<double> flatten(const std::vector<Vector3>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.insert(out.end(), {x(0), x(1), x(2)});
  return out;
}

std::vector<double> default_mu() { return {0.0, 0.0, 1.0, 1.0, 0.0, 0.0}; }

LieAlgebraData so3_with(const std::vector<double>& diag) {
  return LieAlgebraData::so3(Matrix(as_vector3(diag, "metric").asDiagonal()));
}

std::string status_of(bool passed) { return passed ? "pass" : "fail"; }

/// Folds per-sample subspace checks. Dimensions are kept when every sample agrees.
CheckRecord aggregate(const std::string& name, const std::string& expected, const std::vector<Check>& checks) {
  CheckRecord r;
  r.name = name;
  r.expected = expected;
  r.samples = static_cast<int>(checks.size());
  r.residual = 0.0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Check& c = checks[i];
    if (c.passed) ++r.samples_passed;
    r.residual = std::max(r.residual, c.residual);
    if (i == 0) {
      r.lhs_dim = c.lhs_dim;
      r.rhs_dim = c.rhs_dim;
    } else {
      if (r.lhs_dim != c.lhs_dim) r.lhs_dim = -1;
      if (r.rhs_dim != c.rhs_dim) r.rhs_dim = -1;
    }
  }
  r.status = status_of(r.samples_passed == r.samples);
  r.met = expected == "pass" ? r.samples_passed == r.samples : r.samples_passed == 0;
  return r;
}

CheckRecord flags(const std::string& name, const std::string& expected, const std::vector<bool>& values) {
  std::vector<Check> checks;
  for (bool v : values) checks.push_back({name, v, -1, -1, std::numeric_limits<double>::quiet_NaN()});
  CheckRecord r = aggregate(name, expected, checks);
  r.residual = std::numeric_limits<double>::quiet_NaN();
  return r;
}

/// Passes when every value is below the bound; residual is the largest value.
CheckRecord bounded(const std::string& name, const std::vector<double>& values, double bound) {
  CheckRecord r;
  r.name = name;
  r.expected = "pass";
  r.samples = static_cast<int>(values.size());
  r.residual = 0.0;
  for (double v : values) {
    if (v < bound) ++r.samples_passed;
    r.residual = std::isnan(v) ? v : std::max(r.residual, v);
  }
  r.status = status_of(r.samples_passed == r.samples);
  r.met = r.samples_passed == r.samples;
  return r;
}

CheckRecord measured(const std::string& name, double value) {
  CheckRecord r;
  r.name = name;
  r.status = "measured";
  r.expected = "measured";
  r.met = true;
  r.residual = value;
  return r;
}

CheckRecord in_range(const std::string& name, double value, double lo, double hi) {
  CheckRecord r;
  r.name = name;
  r.expected = "pass";
  r.residual = value;
  r.samples_passed = value >= lo && value <= hi ? 1 : 0;
  r.status = status_of(r.samples_passed == 1);
  r.met = r.samples_passed == 1;
  return r;
}

Report make_report(const RunConfig& cfg, std::string model) {
  Report r;
  r.config = cfg;
  r.config.model = std::move(model);
  return r;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

// ---------------------------------------------------------------------------

struct CounterexampleSample {
  MomentumLemmaReport lemma;
  Check guenther;
  Check diag_cond2;
  bool diag_agree = false;
  bool diag_poly = false;
  int orbit_dim = 0;
  int characteristic_dim = 0;
  int diag_quotient = 0;
  ConditionsReport product;
  Check product_guenther;
  bool product_poly = false;
  double product_pullback = 0.0;
  int product_quotient = 0;
};

}  // namespace

void RunConfig::validate() const {
  if (samples < 1) throw InputError("samples must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be positive");
  if (t_end && (!(*t_end >= 0.0) || !std::isfinite(*t_end))) throw InputError("t_end must be non-negative");
  if (grid < 1) throw InputError("grid must be at least 1");
  if (!(spacing > 0.0)) throw InputError("spacing must be positive");
  if (component < 0) throw InputError("component must be non-negative");
  if (mu) as_mus(*mu);
  if (pi1) as_vector3(*pi1, "pi1");
  if (pi2) as_vector3(*pi2, "pi2");
  if (metric) so3_with(*metric);
  tol.validate();
}

bool Report::all_met() const {
  for (const auto& c : checks) {
    if (!c.met) return false;
  }
  return true;
}

std::string Report::to_json() const {
  std::ostringstream o;
  o << "{\n";
  o << "  \"version\": " << quoted(kVersion) << ",\n";
  o << "  \"command\": " << quoted(config.command) << ",\n";
  o << "  \"model\": " << quoted(config.model) << ",\n";
  o << "  \"seed\": " << config.seed << ",\n";
  o << "  \"samples\": " << config.samples << ",\n";
  o << "  \"tolerances\": {\"rank_rel\": " << num(config.tol.rank_rel) << ", \"eq_abs\": " << num(config.tol.eq_abs)
    << ", \"abs_floor\": " << num(config.tol.abs_floor) << "},\n";
  o << "  \"parameters\": {";
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    o << (i ? ", " : "") << quoted(parameters[i].first) << ": ";
    const auto& v = parameters[i].second;
    if (v.size() == 1) {
      o << num(v[0]);
    } else {
      o << '[';
      for (std::size_t j = 0; j < v.size(); ++j) o << (j ? ", " : "") << num(v[j]);
      o << ']';
    }
  }
  o << "},\n";
  o << "  \"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckRecord& c = checks[i];
    o << (i ? ",\n" : "\n") << "    {\"name\": " << quoted(c.name) << ", \"status\": " << quoted(c.status)
      << ", \"expected\": " << quoted(c.expected) << ", \"met\": " << (c.met ? "true" : "false")
      << ", \"lhs_dim\": " << (c.lhs_dim >= 0 ? std::to_string(c.lhs_dim) : "null")
      << ", \"rhs_dim\": " << (c.rhs_dim >= 0 ? std::to_string(c.rhs_dim) : "null")
      << ", \"residual\": " << num(c.residual) << ", \"samples\": " << c.samples
      << ", \"samples_passed\": " << c.samples_passed << "}";
  }
  o << (checks.empty() ? "],\n" : "\n  ],\n");
  o << "  \"metrics\": {";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    o << (i ? ", " : "") << quoted(metrics[i].first) << ": " << num(metrics[i].second);
  }
  o << "},\n";
  o << "  \"all_met\": " << (all_met() ? "true" : "false") << "\n";
  o << "}\n";
  return o.str();
}

Report run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "counterexample") return cmd_counterexample(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "kks") return cmd_kks(cfg);
  if (cfg.command == "integrate") return cmd_integrate(cfg);
  if (cfg.command == "harmonic") return cmd_harmonic(cfg);
  throw InputError("unknown command: " + cfg.command);
}

Report cmd_counterexample(const RunConfig& cfg) {
  cfg.validate();
  const Tolerance& tol = cfg.tol;
  const auto results = parallel_map<CounterexampleSample>(cfg.samples, [&](int i) {
    auto rng = sample_rng(cfg.seed, i);
    std::normal_distribution<double> normal;
    Vector x(8);
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = normal(rng);

    CounterexampleSample s;
    const GSpaceSnapshot diag = product_model_snapshot(ProductConfig::kDiagonal, x, tol);
    s.lemma = check_momentum_lemma(diag, tol);
    s.guenther = check_guenther_claim(diag, tol);
    const ConditionsReport dc = check_reduction_conditions(diag, tol);
    s.diag_cond2 = dc.cond2;
    s.diag_agree = dc.routes_agree;
    const Subspace level = level_set_tangent(diag, tol);
    s.orbit_dim = orbit_tangent(diag, diag.isotropy_mu, tol).dim();
    s.characteristic_dim = intersect(level, k_orthogonal(level, diag.forms, tol), tol).dim();
    const ReducedSpace dr = reduced_forms(diag, tol, 0);
    s.diag_poly = dr.diagnostics.polysymplectic;
    s.diag_quotient = dr.quotient_basis.dim();

    const GSpaceSnapshot prod = product_model_snapshot(ProductConfig::kProductGroup, x, tol);
    s.product = check_reduction_conditions(prod, tol);
    s.product_guenther = check_guenther_claim(prod, tol);
    const ReducedSpace pr = reduced_forms(prod, tol, 50, cfg.seed + static_cast<std::uint64_t>(i));
    s.product_poly = pr.diagnostics.polysymplectic;
    s.product_pullback = pr.diagnostics.pullback_residual;
    s.product_quotient = pr.quotient_basis.dim();
    return s;
  });

  Report r = make_report(cfg, cfg.model.empty() ? "product" : cfg.model);
  std::vector<Check> item1, item2, guenther, dcond2, pcond1a, pcond1b, pcond2, pguenther;
  std::vector<bool> dagree, dpoly, pagree, ppoly;
  std::vector<double> ppull;
  bool dims_ok = true;
  bool quotient_ok = true;
  for (const auto& s : results) {
    item1.push_back(s.lemma.item1);
    item2.push_back(s.lemma.item2);
    guenther.push_back(s.guenther);
    dcond2.push_back(s.diag_cond2);
    dagree.push_back(s.diag_agree);
    dpoly.push_back(s.diag_poly);
    pcond1a.push_back(s.product.cond1.at(0));
    pcond1b.push_back(s.product.cond1.at(1));
    pcond2.push_back(s.product.cond2);
    pagree.push_back(s.product.routes_agree);
    pguenther.push_back(s.product_guenther);
    ppoly.push_back(s.product_poly);
    ppull.push_back(s.product_pullback);
    dims_ok = dims_ok && s.orbit_dim == 1 && s.characteristic_dim == 2;
    quotient_ok = quotient_ok && s.product_quotient == 4 && s.diag_quotient == 5;
  }
  r.checks.push_back(aggregate("diagonal.momentum_lemma_item1", "pass", item1));
  r.checks.push_back(aggregate("diagonal.momentum_lemma_item2", "pass", item2));
  CheckRecord g = aggregate("diagonal.guenther_claim", "fail", guenther);
  g.met = g.met && dims_ok;
  r.checks.push_back(g);
  r.checks.push_back(aggregate("diagonal.mw_cond_2", "fail", dcond2));
  r.checks.push_back(flags("diagonal.reduced_polysymplectic", "fail", dpoly));
  r.checks.push_back(flags("diagonal.routes_agree", "pass", dagree));
  r.checks.push_back(aggregate("product_group.mw_cond_1[1]", "pass", pcond1a));
  r.checks.push_back(aggregate("product_group.mw_cond_1[2]", "pass", pcond1b));
  r.checks.push_back(aggregate("product_group.mw_cond_2", "pass", pcond2));
  r.checks.push_back(flags("product_group.routes_agree", "pass", pagree));
  r.checks.push_back(aggregate("product_group.guenther_claim", "pass", pguenther));
  r.checks.push_back(flags("product_group.reduced_polysymplectic", "pass", ppoly));
  r.checks.push_back(bounded("product_group.pullback", ppull, kPullbackBound));
  r.checks.push_back(flags("reduced_dimensions", "pass", {quotient_ok}));

  const auto& s0 = results.front();
  r.metrics = {{"diagonal.orbit_dim", s0.orbit_dim},
               {"diagonal.characteristic_dim", s0.characteristic_dim},
               {"diagonal.quotient_dim", s0.diag_quotient},
               {"product_group.quotient_dim", s0.product_quotient}};
  return r;
}

Report cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  const std::string model = cfg.model.empty() ? "group" : cfg.model;
  const Tolerance& tol = cfg.tol;
  const std::vector<Vector3> mus = as_mus(cfg.mu.value_or(default_mu()));

  std::function<GSpaceSnapshot(std::mt19937_64&)> build;
  if (model == "group") {
    build = [&](std::mt19937_64& rng) {
      return group_covelocity_snapshot(group_level_point(random_rotation(rng), mus), tol);
    };
  } else if (model == "covelocity") {
    const BaseAction action = rotation_action();
    build = [action, &tol](std::mt19937_64& rng) {
      Vector3 q = random_vector3(rng);
      while (q.norm() < 1e-3) q = random_vector3(rng);  // the action is not free at the origin
      const CovelocityPoint x{q, {random_vector3(rng), random_vector3(rng)}};
      return covelocity_snapshot(3, 2, x, action, tol);
    };
  } else if (model == "product_group" || model == "diagonal") {
    const ProductConfig pc = model == "diagonal" ? ProductConfig::kDiagonal : ProductConfig::kProductGroup;
    build = [pc, &tol](std::mt19937_64& rng) {
      std::normal_distribution<double> normal;
      Vector x(8);
      for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = normal(rng);
      return product_model_snapshot(pc, x, tol);
    };
  } else if (model == "fixture") {
    build = [](std::mt19937_64&) { return degenerate_fixture_snapshot(); };
  } else {
    throw UnknownModelError("unknown model: " + model);
  }

  struct Sample {
    ReducedSpace reduced;
    bool step1_ok = true;
    double momentum = 0.0;
    double orbit_agreement = 0.0;
    int momentum_rank = 0;
    int codomain_dim = 0;
  };
  const LieAlgebraData so3 = LieAlgebraData::so3();
  const auto results = parallel_map<Sample>(cfg.samples, [&](int i) {
    auto rng = sample_rng(cfg.seed, i);
    const GSpaceSnapshot s = build(rng);
    Sample out;
    out.momentum = s.momentum_residual();
    Matrix stacked(s.d * s.k, s.n);
    for (int a = 0; a < s.k; ++a) stacked.middleRows(a * s.d, s.d) = s.momentum_jacobians[static_cast<std::size_t>(a)];
    out.momentum_rank = numerical_rank(stacked, tol);
    out.codomain_dim = s.d * s.k;
    out.reduced = reduced_forms(s, tol, 50, cfg.seed + static_cast<std::uint64_t>(i));
    for (int a = 0; a < s.k; ++a) {
      const Step1Result st = step1_quotient(s, a, tol);
      out.step1_ok = out.step1_ok && st.nondegenerate && st.orthogonality.passed && st.isotropy.passed;
    }
    if (model == "group") {
      // The projection sends a level vector (eta, beta) to the orbit velocity beta.
      // The eta block of each form is nu_A . (e_i x e_j), which recovers nu_A.
      const int d = 3;
      std::vector<Vector> nus;
      for (int a = 0; a < s.k; ++a) {
        const Matrix& om = s.forms[a];
        nus.push_back(Vector3(om(1, 2), om(2, 0), om(0, 1)));
      }
      const OrbitForms orbit = k_coadjoint_orbit_forms(nus, so3, tol);
      const Matrix& q = out.reduced.quotient_basis.basis();
      for (int a = 0; a < s.k; ++a)
        for (Eigen::Index i2 = 0; i2 < q.cols(); ++i2)
          for (Eigen::Index j = 0; j < q.cols(); ++j) {
            const Vector bi = q.col(i2).tail(d * s.k);
            const Vector bj = q.col(j).tail(d * s.k);
            out.orbit_agreement = std::max(
                out.orbit_agreement, std::abs(out.reduced.reduced_forms[a](i2, j) - orbit.eval(a, bi, bj)));
          }
    }
    return out;
  });

  Report r = make_report(cfg, model);
  if (model == "group" || cfg.mu) r.parameters.push_back({"mu", flatten(mus)});
  const int k = results.front().reduced.reduced_forms.k();
  std::vector<std::vector<Check>> cond1(static_cast<std::size_t>(k));
  std::vector<Check> cond2, characteristic;
  std::vector<bool> agree, poly, step1;
  std::vector<double> momentum, pullback, welldef, agreement;
  for (const auto& s : results) {
    const ReducedDiagnostics& dg = s.reduced.diagnostics;
    for (int a = 0; a < k; ++a) cond1[static_cast<std::size_t>(a)].push_back(dg.conditions.cond1[static_cast<std::size_t>(a)]);
    cond2.push_back(dg.conditions.cond2);
    agree.push_back(dg.conditions.routes_agree);
    poly.push_back(dg.polysymplectic);
    step1.push_back(s.step1_ok);
    characteristic.push_back(dg.characteristic);
    momentum.push_back(s.momentum);
    pullback.push_back(dg.pullback_residual);
    welldef.push_back(dg.well_definedness);
    agreement.push_back(s.orbit_agreement);
  }
  r.checks.push_back(bounded("momentum_invariant", momentum, 1e-9));
  for (int a = 0; a < k; ++a) {
    r.checks.push_back(aggregate("mw_cond_1[" + std::to_string(a + 1) + "]", "pass", cond1[static_cast<std::size_t>(a)]));
  }
  r.checks.push_back(aggregate("mw_cond_2", "pass", cond2));
  r.checks.push_back(flags("routes_agree", "pass", agree));
  r.checks.push_back(flags("step1_quotients", "pass", step1));
  r.checks.push_back(aggregate("characteristic_space", "pass", characteristic));
  r.checks.push_back(bounded("well_definedness", welldef, tol.eq_abs));
  r.checks.push_back(bounded("pullback", pullback, kPullbackBound));
  r.checks.push_back(flags("reduced_polysymplectic", "pass", poly));
  if (model == "group") r.checks.push_back(bounded("orbit_form_agreement", agreement, kCrossValidationBound));
  // Regularity of mu is only probed pointwise: the smallest rank of T_xJ seen
  // against dim (g^*)^k. It is a diagnostic, not an expectation.
  int min_rank = results.front().momentum_rank;
  for (const auto& s : results) min_rank = std::min(min_rank, s.momentum_rank);
  r.metrics = {{"quotient_dim", results.front().reduced.quotient_basis.dim()},
               {"level_dim", results.front().reduced.level_tangent.dim()},
               {"momentum_rank_min", min_rank},
               {"momentum_codomain_dim", results.front().codomain_dim}};
  return r;
}

Report cmd_kks(const RunConfig& cfg) {
  cfg.validate();
  const Tolerance& tol = cfg.tol;
  const Vector3 pi1 = as_vector3(cfg.pi1.value_or(std::vector<double>{0.0, 0.0, 1.0}), "pi1");
  Vector3 pi2 = as_vector3(cfg.pi2.value_or(std::vector<double>{0.0, 0.0, 2.0}), "pi2");
  if (cfg.lambda0) pi2 = *cfg.lambda0 * pi1;
  const KksSo3 kks = kks_so3(pi1, pi2, tol);
  const LieAlgebraData so3 = LieAlgebraData::so3();

  Report r = make_report(cfg, "so3");
  r.parameters = {{"pi1", {pi1(0), pi1(1), pi1(2)}}, {"pi2", {pi2(0), pi2(1), pi2(2)}}};
  const OrbitForms seed_orbit = k_coadjoint_orbit_forms({Vector(pi1), Vector(pi2)}, so3, tol);
  const int expected_dim = kks.kase == 1 ? 0 : (kks.kase == 2 ? 2 : 3);
  CheckRecord dim = flags("orbit_dim", "pass", {seed_orbit.tangent.dim() == expected_dim});
  dim.lhs_dim = seed_orbit.tangent.dim();
  dim.rhs_dim = expected_dim;
  r.checks.push_back(dim);
  if (kks.kase != 1) {
    r.checks.push_back(flags("orbit_polysymplectic", "pass", {verify_polysymplectic(seed_orbit.forms, tol)}));
  }

  if (kks.kase == 2) {
    const double radius = kks.base.norm();
    const std::vector<double> errors = parallel_map<double>(cfg.samples, [&](int i) {
      auto rng = sample_rng(cfg.seed, i);
      const Vector3 pi = radius * random_vector3(rng).normalized();
      const Vector3 u = random_vector3(rng);
      const Vector3 v = random_vector3(rng);
      const Vector3 tu = u - pi * (pi.dot(u) / pi.squaredNorm());
      const Vector3 tv = v - pi * (pi.dot(v) / pi.squaredNorm());
      double worst = 0.0;
      for (int a = 0; a < 2; ++a) {
        // Tangent vectors of the sphere of radius r pair to -pi.(u x v) / r^2.
        const double closed = -kks.scale[static_cast<std::size_t>(a)] * pi.dot(tu.cross(tv)) / (radius * radius);
        worst = std::max(worst, std::abs(kks.case2_form(a, pi, tu, tv) - closed));
      }
      return worst;
    });
    r.checks.push_back(bounded("case2_forms", errors, 1e-10));
  }
  if (kks.kase == 3) {
    double worst = 0.0;
    for (int a = 0; a < 2; ++a) {
      const Vector3& p = kks.seeds[static_cast<std::size_t>(a)];
      const Matrix3& w = kks.identity_forms[static_cast<std::size_t>(a)];
      worst = std::max({worst, std::abs(w(0, 1) + p(2)), std::abs(w(1, 2) + p(0)), std::abs(w(2, 0) + p(1))});
    }
    r.checks.push_back(bounded("case3_identity_forms", {worst}, 1e-12));
    for (int a = 0; a < 2; ++a) {
      const Matrix3& w = kks.identity_forms[static_cast<std::size_t>(a)];
      const std::string p = "omega" + std::to_string(a + 1) + "_id_";
      r.metrics.push_back({p + "12", w(0, 1)});
      r.metrics.push_back({p + "23", w(1, 2)});
      r.metrics.push_back({p + "31", w(2, 0)});
    }
  }

  // Group-model reduction at J^{-1}(pi1, pi2) against the orbit forms.
  const std::vector<Vector3> mus{pi1, pi2};
  const std::vector<double> agreement = parallel_map<double>(cfg.samples, [&](int i) {
    auto rng = sample_rng(cfg.seed ^ 0x5bd1e995ULL, i);
    const GroupModelPoint x = group_level_point(random_rotation(rng), mus);
    const GSpaceSnapshot s = group_covelocity_snapshot(x, tol);
    const ReducedSpace red = reduced_forms(s, tol, 0);
    const OrbitForms orbit = k_coadjoint_orbit_forms(to_dynamic(x.nus), so3, tol);
    const Matrix& q = red.quotient_basis.basis();
    double worst = 0.0;
    for (int a = 0; a < 2; ++a)
      for (Eigen::Index i2 = 0; i2 < q.cols(); ++i2)
        for (Eigen::Index j = 0; j < q.cols(); ++j)
          worst = std::max(worst, std::abs(red.reduced_forms[a](i2, j) -
                                           orbit.eval(a, q.col(i2).tail(6), q.col(j).tail(6))));
    return worst;
  });
  r.checks.push_back(bounded("group_reduction_agreement", agreement, kCrossValidationBound));

  r.metrics.insert(r.metrics.begin(), {{"case", kks.kase}, {"lambda0", kks.lambda0}});
  return r;
}

Report cmd_integrate(const RunConfig& cfg) {
  cfg.validate();
  const std::string model = cfg.model.empty() ? "reduced" : cfg.model;
  const std::vector<Vector3> mus = as_mus(cfg.mu.value_or(default_mu()));
  const int k = static_cast<int>(mus.size());
  if (cfg.component >= k) throw InputError("component must be below the number of momenta");
  const int a = cfg.component;
  std::vector<double> metric_diag;
  double t_end = 1.0;
  if (model == "reduced") {
    metric_diag = cfg.metric.value_or(std::vector<double>{1.0, 1.0, 1.0});
    t_end = cfg.t_end.value_or(10.0);
  } else if (model == "group") {
    metric_diag = cfg.metric.value_or(std::vector<double>{1.0, 1.0, 1.0});
    t_end = cfg.t_end.value_or(1.0);
  } else if (model == "commutation") {
    // Anisotropic metric so the truncation error dominates roundoff.
    metric_diag = cfg.metric.value_or(std::vector<double>{0.2, 0.4, 0.6});
    t_end = cfg.t_end.value_or(1.0);
  } else {
    throw UnknownModelError("unknown model: " + model);
  }
  const LieAlgebraData alg = so3_with(metric_diag);
  const bool identity = metric_diag == std::vector<double>{1.0, 1.0, 1.0};

  Report r = make_report(cfg, model);
  r.parameters = {{"mu", flatten(mus)}, {"metric", metric_diag}, {"dt", {cfg.dt}}, {"t_end", {t_end}},
                  {"component", {static_cast<double>(a + 1)}}};
  std::ostringstream csv;

  if (model == "reduced") {
    const Trajectory traj = integrate_reduced(alg, to_dynamic(mus), a, t_end, cfg.dt);
    const ConservationReport cons = conservation_report(traj);
    for (std::size_t i = 0; i < cons.names.size(); ++i) {
      if (cons.names[i] == "H" && !identity) {
        r.checks.push_back(measured("drift." + cons.names[i], cons.max_drift[i]));
      } else {
        r.checks.push_back(bounded("drift." + cons.names[i], {cons.max_drift[i]}, kInvariantDriftBound));
      }
    }
    if (identity) {
      // Field A fixes nu_A and rotates the others: nu_B(t) = exp(-t nu_A) nu_B(0).
      double worst = 0.0;
      for (std::size_t i = 0; i < traj.times.size() && traj.times[i] <= 1.0 + 1e-12; ++i) {
        const Matrix3 rot = exp_so3(-traj.times[i] * mus[static_cast<std::size_t>(a)]).matrix();
        for (int b = 0; b < k; ++b) {
          const Vector3 exact = rot * mus[static_cast<std::size_t>(b)];
          worst = std::max(worst, (traj.states[i].segment(3 * b, 3) - exact).norm());
        }
      }
      r.checks.push_back(bounded("analytic_rotation", {worst}, 1e-10));
    }
    write_trajectory_csv(csv, traj);
  } else {
    std::mt19937_64 rng = sample_rng(cfg.seed, 0);
    const GroupModelPoint x0 = group_level_point(random_rotation(rng), mus);
    const GroupState start{x0.g, x0.nus};
    const Trajectory traj = integrate_group(alg, start, a, t_end, cfg.dt);
    const ConservationReport cons = conservation_report(traj);
    if (model == "group") {
      for (std::size_t i = 0; i < cons.names.size(); ++i) {
        const std::string& n = cons.names[i];
        if (n == "J_drift") {
          r.checks.push_back(bounded("drift.J", {cons.max_drift[i]}, kMomentumDriftBound));
        } else if (n == "H" && !identity) {
          r.checks.push_back(measured("drift.H", cons.max_drift[i]));
        } else {
          r.checks.push_back(bounded("drift." + n, {cons.max_drift[i]}, kInvariantDriftBound));
        }
      }
    } else {
      std::vector<double> sups;
      for (double f : {4.0, 2.0, 1.0}) {
        const CommutationReport c = projection_commutation_check(alg, mus, start, a, t_end, f * cfg.dt);
        sups.push_back(c.sup_discrepancy);
        if (f == 1.0) {
          r.checks.push_back(bounded("commutation", {c.sup_discrepancy}, kCommutationBound));
          r.checks.push_back(bounded("drift.J", {c.momentum_drift}, kMomentumDriftBound));
        }
      }
      r.checks.push_back(in_range("order_ratio_1", sups[0] / sups[1], 12.0, 20.0));
      r.checks.push_back(in_range("order_ratio_2", sups[1] / sups[2], 12.0, 20.0));
      r.metrics = {{"discrepancy_4dt", sups[0]}, {"discrepancy_2dt", sups[1]}, {"discrepancy_dt", sups[2]}};
    }
    write_trajectory_csv(csv, traj);
  }
  r.csv = csv.str();
  return r;
}

Report cmd_harmonic(const RunConfig& cfg) {
  cfg.validate();
  const Vector3 pi1 = as_vector3(cfg.pi1.value_or(std::vector<double>{0.3, -0.5, 0.8}), "pi1");
  Vector3 pi2 = cfg.pi2 ? as_vector3(*cfg.pi2, "pi2") : Vector3(2.0 * pi1);
  if (cfg.lambda0) pi2 = *cfg.lambda0 * pi1;
  const std::vector<double> metric_diag = cfg.metric.value_or(std::vector<double>{1.0, 2.0, 3.0});
  const LieAlgebraData alg = so3_with(metric_diag);
  const HarmonicSheet sheet = harmonic_sheet(alg, pi1, pi2, cfg.grid, cfg.grid, cfg.spacing, cfg.dt);

  Report r = make_report(cfg, "so3");
  r.parameters = {{"pi1", {pi1(0), pi1(1), pi1(2)}},
                  {"pi2", {pi2(0), pi2(1), pi2(2)}},
                  {"metric", metric_diag},
                  {"grid", {static_cast<double>(cfg.grid)}},
                  {"spacing", {cfg.spacing}},
                  {"dt", {cfg.dt}}};
  if (sheet.kase == 2 && !std::isnan(sheet.proportionality)) {
    r.checks.push_back(bounded("proportionality", {sheet.proportionality}, kProportionalityBound));
    r.checks.push_back(bounded("commutator", {sheet.commutator}, kSheetCommutatorBound));
  } else {
    r.checks.push_back(measured("commutator", sheet.commutator));
  }
  r.metrics = {{"case", sheet.kase}, {"lambda0", sheet.lambda0}, {"dirichlet_energy", sheet.dirichlet_energy}};
  std::ostringstream csv;
  write_sheet_csv(csv, sheet);
  r.csv = csv.str();
  return r;
}

}  // namespace polyred
