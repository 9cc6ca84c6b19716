#pragma once

#include "polyred/subspace.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyred {

inline constexpr const char* kVersion = "0.1.0";

/// Parameters of one run. Unset optionals take command-specific defaults.
struct RunConfig {
  std::string command = "counterexample";  ///< counterexample | verify | kks | integrate | harmonic
  std::string model;                       ///< empty selects the command default
  int samples = 100;
  std::uint64_t seed = 1;
  std::optional<std::vector<double>> mu;  ///< 3k values for SO(3) models
  std::optional<std::vector<double>> pi1;
  std::optional<std::vector<double>> pi2;
  std::optional<double> lambda0;  ///< sets pi2 = lambda0 * pi1
  std::optional<std::vector<double>> metric;  ///< diagonal of the inner product
  double dt = 1e-3;
  std::optional<double> t_end;
  int component = 0;  ///< field index A, zero-based
  int grid = 20;
  double spacing = 0.05;
  Tolerance tol;

  /// Throws InputError on invalid values.
  void validate() const;
};

/// One aggregated check. status is "pass", "fail" or "measured"; expected uses
/// the same vocabulary and `met` tells whether the outcome matches it.
struct CheckRecord {
  std::string name;
  std::string status;
  std::string expected;
  bool met = false;
  int lhs_dim = -1;
  int rhs_dim = -1;
  double residual = std::numeric_limits<double>::quiet_NaN();
  int samples = 1;
  int samples_passed = 0;
};

struct Report {
  RunConfig config;
  std::vector<std::pair<std::string, std::vector<double>>> parameters;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, double>> metrics;
  std::string csv;

  bool all_met() const;
  /// Deterministic JSON; numbers use 17 significant digits and non-finite values become null.
  std::string to_json() const;
};

Report run(const RunConfig& cfg);

Report cmd_counterexample(const RunConfig& cfg);
Report cmd_verify(const RunConfig& cfg);
Report cmd_kks(const RunConfig& cfg);
Report cmd_integrate(const RunConfig& cfg);
Report cmd_harmonic(const RunConfig& cfg);

}  // namespace polyred
