// Command-line front end over the C API.
#include "polyred/polyred.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitMet = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

bool is_usage_error(polyred_status s) {
  return s == POLYRED_E_INPUT || s == POLYRED_E_DIMENSION || s == POLYRED_E_UNKNOWN_MODEL;
}

int report_error(polyred_status s) {
  std::cerr << "error (" << polyred_status_name(s) << "): " << polyred_last_error() << "\n";
  return is_usage_error(s) ? kExitUsage : kExitFailed;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise polysymplectic reduction checks"};
  app.set_version_flag("--version", std::string(polyred_version()));

  std::string command = "counterexample";
  std::string model;
  std::optional<int> samples, grid, component;
  std::optional<long long> seed;
  std::vector<double> mu, pi1, pi2, metric;
  std::optional<double> lambda0, dt, t_end, tol_rank, tol_eq, spacing;
  std::string out_path, csv_path;

  app.add_option("command", command, "counterexample | verify | kks | integrate | harmonic")
      ->check(CLI::IsMember({"counterexample", "verify", "kks", "integrate", "harmonic"}));
  app.add_option("--model", model, "Model name; the command picks a default when empty");
  app.add_option("--samples", samples, "Number of sampled points");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--mu", mu, "Momentum values, 3 per component")->expected(3, CLI::detail::expected_max_vector_size);
  app.add_option("--pi1", pi1, "First orbit seed")->expected(3);
  app.add_option("--pi2", pi2, "Second orbit seed")->expected(3);
  app.add_option("--lambda0", lambda0, "Sets pi2 = lambda0 * pi1");
  app.add_option("--metric", metric, "Diagonal of the inner product on so(3)")->expected(3);
  app.add_option("--dt", dt, "Integrator step");
  app.add_option("--t-end", t_end, "Final time");
  app.add_option("--component", component, "Hamiltonian field index, one-based")->check(CLI::PositiveNumber);
  app.add_option("--grid", grid, "Sheet nodes per direction");
  app.add_option("--spacing", spacing, "Sheet node spacing");
  app.add_option("--tol-rank", tol_rank, "Relative rank tolerance");
  app.add_option("--tol-eq", tol_eq, "Absolute equality tolerance");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "Write the trajectory or sheet CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  polyred_config* cfg = nullptr;
  polyred_status s = polyred_config_create(&cfg);
  if (s != POLYRED_OK) return report_error(s);

  auto apply = [&]() -> polyred_status {
    polyred_status r = polyred_config_set_string(cfg, "command", command.c_str());
    if (r == POLYRED_OK && !model.empty()) r = polyred_config_set_string(cfg, "model", model.c_str());
    auto set_int = [&](const char* key, const auto& v) {
      if (r == POLYRED_OK && v) r = polyred_config_set_int(cfg, key, static_cast<int64_t>(*v));
    };
    auto set_double = [&](const char* key, const std::optional<double>& v) {
      if (r == POLYRED_OK && v) r = polyred_config_set_double(cfg, key, *v);
    };
    auto set_vector = [&](const char* key, const std::vector<double>& v) {
      if (r == POLYRED_OK && !v.empty()) r = polyred_config_set_vector(cfg, key, v.data(), v.size());
    };
    set_int("samples", samples);
    set_int("seed", seed);
    set_int("grid", grid);
    if (component) {
      const std::optional<int> zero_based = *component - 1;
      set_int("component", zero_based);
    }
    set_double("lambda0", lambda0);
    set_double("dt", dt);
    set_double("t_end", t_end);
    set_double("tol_rank", tol_rank);
    set_double("tol_eq", tol_eq);
    set_double("spacing", spacing);
    set_vector("mu", mu);
    set_vector("pi1", pi1);
    set_vector("pi2", pi2);
    set_vector("metric", metric);
    return r;
  };
  s = apply();
  if (s != POLYRED_OK) {
    polyred_config_destroy(cfg);
    return report_error(s);
  }

  polyred_report* report = nullptr;
  s = polyred_run(cfg, &report);
  polyred_config_destroy(cfg);
  if (s != POLYRED_OK) return report_error(s);

  const char* json = nullptr;
  const char* csv = nullptr;
  int all_met = 0;
  size_t count = 0;
  polyred_report_json(report, &json);
  polyred_report_csv(report, &csv);
  polyred_report_all_met(report, &all_met);
  polyred_report_check_count(report, &count);

  int code = all_met ? kExitMet : kExitFailed;
  if (out_path.empty()) {
    std::fputs(json, stdout);
  } else if (!write_file(out_path, json)) {
    std::cerr << "error (io): cannot write " << out_path << "\n";
    code = kExitFailed;
  }
  if (!csv_path.empty() && !write_file(csv_path, csv)) {
    std::cerr << "error (io): cannot write " << csv_path << "\n";
    code = kExitFailed;
  }
  for (size_t i = 0; i < count; ++i) {
    const char* name = nullptr;
    int met = 0;
    polyred_report_check_name(report, i, &name);
    polyred_report_check_met(report, i, &met);
    if (!met) std::cerr << "expectation not met: " << name << "\n";
  }
  polyred_report_destroy(report);
  return code;
}
