#include "polyred/polyred.h"

#include "polyred/dynamics.hpp"
#include "polyred/experiments.hpp"

#include <cstring>
#include <memory>
#include <new>
#include <string>

struct polyred_config {
  polyred::RunConfig cfg;
};

struct polyred_report {
  polyred::Report report;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

polyred_status fail(polyred_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs body and maps exceptions onto status codes.
template <class F>
polyred_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return POLYRED_OK;
  } catch (const polyred::Error& e) {
    return fail(static_cast<polyred_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(POLYRED_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(POLYRED_E_INTERNAL, e.what());
  } catch (...) {
    return fail(POLYRED_E_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw polyred::InputError(what);
}

polyred::Matrix col_major(const double* data, int rows, int cols) {
  return Eigen::Map<const polyred::Matrix>(data, rows, cols);
}

}  // namespace

extern "C" {

const char* polyred_version(void) { return polyred::kVersion; }

const char* polyred_last_error(void) { return g_last_error.c_str(); }

const char* polyred_status_name(polyred_status status) {
  switch (status) {
    case POLYRED_OK: return "ok";
    case POLYRED_E_INPUT: return "input";
    case POLYRED_E_DIMENSION: return "dimension";
    case POLYRED_E_PRECONDITION: return "precondition";
    case POLYRED_E_NO_SOLUTION: return "no_solution";
    case POLYRED_E_DIVERGENCE: return "divergence";
    case POLYRED_E_UNSUPPORTED_ACTION: return "unsupported_action";
    case POLYRED_E_INCONSISTENT_SNAPSHOT: return "inconsistent_snapshot";
    case POLYRED_E_UNKNOWN_MODEL: return "unknown_model";
    case POLYRED_E_IO: return "io";
    case POLYRED_E_INTERNAL: return "internal";
  }
  return "unknown";
}

polyred_status polyred_config_create(polyred_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = new polyred_config{};
  });
}

void polyred_config_destroy(polyred_config* config) { delete config; }

polyred_status polyred_config_set_string(polyred_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    const std::string k = key;
    if (k == "command") {
      config->cfg.command = value;
    } else if (k == "model") {
      config->cfg.model = value;
    } else {
      throw polyred::InputError("unknown string key: " + k);
    }
  });
}

polyred_status polyred_config_set_int(polyred_config* config, const char* key, int64_t value) {
  return guarded([&] {
    require(config && key, "null argument");
    const std::string k = key;
    auto narrow = [&](int64_t v) {
      if (v < -2147483647LL || v > 2147483647LL) throw polyred::InputError(k + " is out of range");
      return static_cast<int>(v);
    };
    if (k == "samples") {
      config->cfg.samples = narrow(value);
    } else if (k == "seed") {
      require(value >= 0, "seed must be non-negative");
      config->cfg.seed = static_cast<std::uint64_t>(value);
    } else if (k == "grid") {
      config->cfg.grid = narrow(value);
    } else if (k == "component") {
      config->cfg.component = narrow(value);
    } else {
      throw polyred::InputError("unknown integer key: " + k);
    }
  });
}

polyred_status polyred_config_set_double(polyred_config* config, const char* key, double value) {
  return guarded([&] {
    require(config && key, "null argument");
    const std::string k = key;
    if (k == "dt") {
      config->cfg.dt = value;
    } else if (k == "t_end") {
      config->cfg.t_end = value;
    } else if (k == "lambda0") {
      config->cfg.lambda0 = value;
    } else if (k == "tol_rank") {
      config->cfg.tol.rank_rel = value;
    } else if (k == "tol_eq") {
      config->cfg.tol.eq_abs = value;
    } else if (k == "spacing") {
      config->cfg.spacing = value;
    } else {
      throw polyred::InputError("unknown double key: " + k);
    }
  });
}

polyred_status polyred_config_set_vector(polyred_config* config, const char* key, const double* values,
                                         size_t count) {
  return guarded([&] {
    require(config && key && (values || count == 0), "null argument");
    const std::string k = key;
    std::vector<double> v(values, values + count);
    if (k == "mu") {
      config->cfg.mu = std::move(v);
    } else if (k == "pi1") {
      config->cfg.pi1 = std::move(v);
    } else if (k == "pi2") {
      config->cfg.pi2 = std::move(v);
    } else if (k == "metric") {
      config->cfg.metric = std::move(v);
    } else {
      throw polyred::InputError("unknown vector key: " + k);
    }
  });
}

polyred_status polyred_run(const polyred_config* config, polyred_report** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = nullptr;
    auto report = std::make_unique<polyred_report>();
    report->report = polyred::run(config->cfg);
    report->json = report->report.to_json();
    *out = report.release();
  });
}

void polyred_report_destroy(polyred_report* report) { delete report; }

polyred_status polyred_report_json(const polyred_report* report, const char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->json.c_str();
  });
}

polyred_status polyred_report_csv(const polyred_report* report, const char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->report.csv.c_str();
  });
}

polyred_status polyred_report_all_met(const polyred_report* report, int* out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->report.all_met() ? 1 : 0;
  });
}

polyred_status polyred_report_check_count(const polyred_report* report, size_t* out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->report.checks.size();
  });
}

polyred_status polyred_report_check_name(const polyred_report* report, size_t index, const char** out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(index < report->report.checks.size(), "check index out of range");
    *out = report->report.checks[index].name.c_str();
  });
}

polyred_status polyred_report_check_met(const polyred_report* report, size_t index, int* out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(index < report->report.checks.size(), "check index out of range");
    *out = report->report.checks[index].met ? 1 : 0;
  });
}

polyred_status polyred_analyze_snapshot(int n, int k, int d, const double* forms, const double* jacobians,
                                        const double* generators, const double* structure, const double* mus,
                                        double tol_rank, uint32_t* out_flags, int* out_reduced_dim) {
  return guarded([&] {
    require(forms && jacobians && generators && mus && out_flags, "null argument");
    if (n < 1 || k < 1 || d < 0) throw polyred::DimensionError("n and k must be positive, d non-negative");
    polyred::Tolerance tol;
    if (tol_rank > 0.0) tol.rank_rel = tol_rank;
    tol.validate();

    const auto nn = static_cast<std::size_t>(n);
    const auto dd = static_cast<std::size_t>(d);
    std::vector<polyred::Matrix> omegas;
    std::vector<polyred::Matrix> jacs;
    for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a) {
      omegas.push_back(col_major(forms + a * nn * nn, n, n));
      jacs.push_back(col_major(jacobians + a * dd * nn, d, n));
    }
    const polyred::LieAlgebraData alg =
        structure ? polyred::LieAlgebraData(d, std::vector<double>(structure, structure + dd * dd * dd))
                  : polyred::LieAlgebraData::abelian(d);
    std::vector<polyred::Subspace> isotropy;
    for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a) {
      const polyred::Vector mu = Eigen::Map<const polyred::Vector>(mus + a * dd, d);
      isotropy.push_back(polyred::isotropy_subalgebra(alg, {mu}, tol));
    }
    const polyred::GSpaceSnapshot s =
        polyred::make_snapshot(polyred::FormFamily(n, std::move(omegas)), std::move(jacs),
                               col_major(generators, n, d), std::move(isotropy), tol);

    const polyred::ReducedSpace r = polyred::reduced_forms(s, tol, 0);
    const polyred::ConditionsReport& c = r.diagnostics.conditions;
    uint32_t flags = 0;
    if (c.cond1_holds()) flags |= POLYRED_FLAG_COND1;
    if (c.cond2.passed) flags |= POLYRED_FLAG_COND2;
    if (c.routes_agree) flags |= POLYRED_FLAG_ROUTES_AGREE;
    if (r.diagnostics.polysymplectic) flags |= POLYRED_FLAG_POLYSYMPLECTIC;
    if (polyred::check_momentum_lemma(s, tol).passed()) flags |= POLYRED_FLAG_MOMENTUM_LEMMA;
    if (polyred::check_guenther_claim(s, tol).passed) flags |= POLYRED_FLAG_GUENTHER;
    *out_flags = flags;
    if (out_reduced_dim) *out_reduced_dim = r.quotient_basis.dim();
  });
}

polyred_status polyred_solve_hamiltonian(int n, int k, const double* forms, const double* dh, double* out_fields) {
  return guarded([&] {
    require(forms && dh && out_fields, "null argument");
    if (n < 1 || k < 1) throw polyred::DimensionError("n and k must be positive");
    const auto nn = static_cast<std::size_t>(n);
    std::vector<polyred::Matrix> omegas;
    for (std::size_t a = 0; a < static_cast<std::size_t>(k); ++a) omegas.push_back(col_major(forms + a * nn * nn, n, n));
    const polyred::FormFamily family(n, std::move(omegas));
    const auto fields = polyred::solve_hamiltonian_field(family, Eigen::Map<const polyred::Vector>(dh, n));
    for (std::size_t a = 0; a < fields.size(); ++a) {
      std::memcpy(out_fields + a * nn, fields[a].data(), nn * sizeof(double));
    }
  });
}

}  // extern "C"
