#pragma once

// Runs one solver over every (instance, run) cell of an ensemble and
// collects best-so-far traces. Seeds come from (master seed, instance id,
// run index) only, so the records do not depend on instance order or on the
// number of worker threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimsolve/belief_propagation.hpp"
#include "cimsolve/closedloop.hpp"
#include "cimsolve/ising.hpp"
#include "cimsolve/metrics.hpp"
#include "cimsolve/nonlinearity.hpp"
#include "cimsolve/schedule.hpp"
#include "cimsolve/tap.hpp"

namespace cimsolve {

enum class SolverKind { open_loop, closed_loop, bp, tap, eigvec };

std::string_view solver_name(SolverKind kind);
/// Accepts open-loop, closed-loop, bp, tap, eigvec.
SolverKind parse_solver(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::closed_loop;
  // open-loop
  Nonlinearity nonlinearity{};
  Schedule schedule = Schedule::standard(100.0);
  // closed-loop
  ClosedLoopParams closed{};
  std::size_t steps = 20000;
  // bp / tap
  double beta = 1.0;
  BpOptions bp{};
  TapOptions tap{};

  /// Step budget of one run.
  std::size_t budget() const;
};

struct BenchInstance {
  std::string id;
  IsingInstance instance;
  /// Success target; computed by exhaustive search when absent and n <= 24.
  std::optional<double> target;
};

struct RunGridOptions {
  std::size_t threads = 1;
  /// Stop a run as soon as it reaches the target.
  bool stop_at_target = true;
  double rel_tol = kDefaultSuccessTolerance;
};

/// One record per cell, ordered by (instance id, run). Throws
/// std::invalid_argument for duplicate ids, runs == 0, or an instance
/// without a target that is too large for exhaustive search.
std::vector<BenchRecord> run_grid(std::span<const BenchInstance> instances, const SolverConfig& config,
                                  std::size_t runs_per_instance, std::uint64_t master_seed,
                                  const RunGridOptions& options = {});

/// Runs a single cell; exposed for the CLI and tests.
BenchRecord run_cell(const BenchInstance& instance, double target, const SolverConfig& config, std::size_t run,
                     std::uint64_t master_seed, const RunGridOptions& options = {});

std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view instance_id, std::size_t run);

}  // namespace cimsolve
