#include "cimsolve/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "cimsolve/openloop.hpp"
#include "cimsolve/oracle.hpp"
#include "cimsolve/spectral.hpp"

namespace cimsolve {

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::open_loop: return "open-loop";
    case SolverKind::closed_loop: return "closed-loop";
    case SolverKind::bp: return "bp";
    case SolverKind::tap: return "tap";
    case SolverKind::eigvec: return "eigvec";
  }
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  for (SolverKind k : {SolverKind::open_loop, SolverKind::closed_loop, SolverKind::bp, SolverKind::tap,
                       SolverKind::eigvec}) {
    if (solver_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

std::size_t SolverConfig::budget() const {
  switch (kind) {
    case SolverKind::open_loop: return schedule.steps();
    case SolverKind::closed_loop: return steps;
    case SolverKind::bp: return bp.max_iters;
    case SolverKind::tap: return tap.max_iters;
    case SolverKind::eigvec: return 1;
  }
  return 0;
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::string_view instance_id, std::size_t run) {
  return derive_seed(derive_seed(master_seed, fnv1a(instance_id)), run);
}

BenchRecord run_cell(const BenchInstance& bi, double target, const SolverConfig& config, std::size_t run,
                     std::uint64_t master_seed, const RunGridOptions& options) {
  BenchRecord rec;
  rec.instance_id = bi.id;
  rec.solver_id = std::string(solver_name(config.kind));
  rec.seed = cell_seed(master_seed, bi.id, run);
  rec.run = run;
  rec.ground_energy = target;
  const std::optional<double> stop =
      options.stop_at_target ? std::optional<double>(success_threshold(target, options.rel_tol)) : std::nullopt;

  switch (config.kind) {
    case SolverKind::open_loop: {
      OpenLoopOptions o;
      o.stop_energy = stop;
      OpenLoopResult r = integrate_openloop(bi.instance, config.nonlinearity, config.schedule, rec.seed, o);
      rec.trace = r.trace.points();
      rec.steps = r.steps;
      rec.status = std::string(status_name(r.status));
      break;
    }
    case SolverKind::closed_loop: {
      ClosedLoopOptions o;
      o.stop_energy = stop;
      ClosedLoopResult r = integrate_closedloop(bi.instance, config.closed, config.steps, rec.seed, o);
      rec.trace = r.trace.points();
      rec.steps = r.steps;
      rec.status = std::string(status_name(r.status));
      break;
    }
    case SolverKind::bp: {
      BpResult r = bp_run(bi.instance, config.beta, rec.seed, config.bp);
      rec.trace = {{r.iterations, bp_energy_readout(bi.instance, r.magnetizations).energy()}};
      rec.steps = r.iterations;
      rec.status = r.converged ? "converged" : "not_converged";
      break;
    }
    case SolverKind::tap: {
      TapResult r = tap_run(bi.instance, config.beta, rec.seed, config.tap);
      rec.trace = {{r.iterations, bp_energy_readout(bi.instance, r.state.m_now).energy()}};
      rec.steps = r.iterations;
      rec.status = r.converged ? "converged" : "not_converged";
      break;
    }
    case SolverKind::eigvec: {
      rec.trace = {{1, eigenvector_rounding(bi.instance).rounded.energy()}};
      rec.steps = 1;
      rec.status = "completed";
      break;
    }
  }
  return rec;
}

std::vector<BenchRecord> run_grid(std::span<const BenchInstance> instances, const SolverConfig& config,
                                  std::size_t runs_per_instance, std::uint64_t master_seed,
                                  const RunGridOptions& options) {
  if (runs_per_instance == 0) throw std::invalid_argument("run_grid: runs per instance must be >= 1");
  std::set<std::string> seen;
  std::vector<double> targets;
  for (const BenchInstance& bi : instances) {
    if (!seen.insert(bi.id).second) throw std::invalid_argument("run_grid: duplicate instance id '" + bi.id + "'");
    if (bi.target) {
      targets.push_back(*bi.target);
    } else if (bi.instance.size() <= kOracleMaxSpins) {
      targets.push_back(exhaustive_ground_states(bi.instance, {1, 1}).ground_energy);
    } else {
      throw std::invalid_argument("run_grid: instance '" + bi.id + "' has no target energy and is too large for "
                                  "exhaustive search");
    }
  }

  // Cells in (id, run) order so the output order is fixed.
  std::vector<std::size_t> by_id(instances.size());
  for (std::size_t k = 0; k < by_id.size(); ++k) by_id[k] = k;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return instances[a].id < instances[b].id; });

  const std::size_t cells = instances.size() * runs_per_instance;
  std::vector<BenchRecord> out(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      const std::size_t k = by_id[c / runs_per_instance];
      try {
        out[c] = run_cell(instances[k], targets[k], config, c % runs_per_instance, master_seed, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.threads, cells));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace cimsolve
