#pragma once

// Run specification: everything needed to reproduce one CLI run. Read from
// JSON (unknown keys rejected), overridable from flags, and echoed verbatim
// into every output file.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cimsolve/bench.hpp"

namespace cimsolve {

struct RunSpec {
  std::string input;
  std::string format;  // "json", "gset" or empty for by-extension
  bool negate_j = false;
  std::string solver = "closed-loop";
  std::optional<std::uint64_t> seed;
  std::size_t steps = 20000;
  std::size_t runs = 1;
  std::optional<double> target;

  // soft-spin solvers
  std::string gain = "cubic";
  std::string feedback = "identity";
  std::optional<double> pump;  // closed-loop p; open-loop constant pump when no ramp given
  std::optional<double> beta;
  double xi = 0.3;
  double a = 0.1;
  std::string modulation = "static";
  double epsilon = 0.1;
  std::optional<double> dt;
  double gamma = 0.0;
  double initial_spread = 1e-3;

  // open-loop schedule
  std::vector<std::pair<double, double>> pump_ramp;  // empty: 0.5 -> 1.5 over the run
  std::vector<std::pair<double, double>> beta_ramp;
  std::string noise = "constant";
  double noise_gamma = 0.05;
  double noise_c = 1.0;
  double diffusion = 0.0;

  // bp / tap
  double damping = 0.5;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  std::string variant = "bolthausen";
  bool sequential = false;

  std::string output;
  std::string trajectory;
  std::size_t trajectory_every = 1;

  /// Cross-field checks; throws std::invalid_argument.
  void validate() const;
  /// Translates into solver parameters (validates first).
  SolverConfig solver_config() const;
};

/// Throws std::invalid_argument on unknown keys or wrong types.
RunSpec parse_runspec(std::string_view text);
RunSpec runspec_from_json(const nlohmann::json& doc);
nlohmann::json runspec_to_json(const RunSpec& spec);

}  // namespace cimsolve
