#include "cimsolve/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cimsolve/bench.hpp"
#include "cimsolve/gset.hpp"
#include "cimsolve/instance_io.hpp"
#include "cimsolve/metrics.hpp"
#include "cimsolve/openloop.hpp"
#include "cimsolve/oracle.hpp"
#include "cimsolve/runspec.hpp"
#include "cimsolve/spectral.hpp"

namespace cimsolve {
namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// JSON has no infinity; unattained values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json spins_json(std::span<const Spin> s) {
  json a = json::array();
  for (Spin v : s) a.push_back(static_cast<int>(v));
  return a;
}

void emit(const std::string& path, const json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string shortest(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::to_string(v);
}

std::size_t thread_budget(std::size_t flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CIMSOLVE_THREADS")) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && v > 0) return v;
    throw UsageError("CIMSOLVE_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Options shared by the solver subcommands; applied on top of an optional
// --spec file only when given on the command line.
struct SpecFlags {
  std::string spec_path;
  RunSpec flags;
  std::vector<std::string> clamps;

  void add_io(CLI::App* app) {
    app->add_option("--spec", spec_path, "JSON run spec; flags override its fields");
    app->add_option("--input,-i", flags.input, "Instance file (.json, otherwise G-set)");
    app->add_option("--format", flags.format, "Input format: json or gset")->check(CLI::IsMember({"json", "gset"}));
    app->add_flag("--negate-j", flags.negate_j, "Apply J -> -J after loading");
    app->add_option("--seed", flags.seed, "Master RNG seed");
    app->add_option("--out,-o", flags.output, "Output path (default stdout)");
  }
  void add_dynamics(CLI::App* app) {
    app->add_option("--solver", flags.solver, "open-loop, closed-loop, bp, tap, eigvec or oracle");
    app->add_option("--steps", flags.steps, "Step budget per run");
    app->add_option("--target", flags.target, "Success energy (default: exhaustive search for n <= 24)");
    app->add_option("--gain", flags.gain, "cubic or tanh_saturation");
    app->add_option("--feedback", flags.feedback, "identity or tanh");
    app->add_option("--pump", flags.pump, "Pump rate p");
    app->add_option("--beta", flags.beta, "Coupling strength / inverse temperature");
    app->add_option("--xi", flags.xi, "Error-variable rate");
    app->add_option("--a", flags.a, "Target squared amplitude");
    app->add_option("--modulation", flags.modulation, "static or divergence_positive");
    app->add_option("--epsilon", flags.epsilon, "Divergence margin for modulation");
    app->add_option("--dt", flags.dt, "Time step");
    app->add_option("--gamma", flags.gamma, "Closed-loop measurement noise");
    app->add_option("--noise", flags.noise, "Open-loop noise schedule: constant or log_decay");
    app->add_option("--noise-gamma", flags.noise_gamma, "Open-loop noise amplitude");
    app->add_option("--noise-c", flags.noise_c, "log_decay constant");
    app->add_option("--diffusion", flags.diffusion, "Additive diffusion amplitude");
    app->add_option("--trajectory", flags.trajectory, "Trajectory CSV path");
    app->add_option("--trajectory-every", flags.trajectory_every, "Trajectory sampling cadence");
  }
  void add_message_passing(CLI::App* app, bool bp) {
    app->add_option("--beta", flags.beta, "Inverse temperature")->required();
    app->add_option("--tol", flags.tol, "Convergence tolerance");
    app->add_option("--max-iters", flags.max_iters, "Iteration cap");
    if (bp) {
      app->add_option("--damping", flags.damping, "Damping in [0, 1)");
      app->add_flag("--sequential", flags.sequential, "Random-order sequential updates");
      app->add_option("--clamp", clamps, "Clamp a spin, as index:+1 or index:-1");
    } else {
      app->add_option("--variant", flags.variant, "bolthausen or paper_literal");
    }
  }

  // Merges the spec file (if any) with the flags that were actually given.
  RunSpec resolve(const CLI::App* app) const {
    RunSpec s;
    if (!spec_path.empty()) {
      const std::string text = read_file(spec_path);
      try {
        s = parse_runspec(text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    auto given = [app](const char* name) { return app->get_option_no_throw(name) && app->count(name) > 0; };
    const RunSpec& f = flags;
#define CIMSOLVE_TAKE(opt, field) \
  if (given(opt)) s.field = f.field;
    CIMSOLVE_TAKE("--input", input)
    CIMSOLVE_TAKE("--format", format)
    CIMSOLVE_TAKE("--negate-j", negate_j)
    CIMSOLVE_TAKE("--seed", seed)
    CIMSOLVE_TAKE("--out", output)
    CIMSOLVE_TAKE("--solver", solver)
    CIMSOLVE_TAKE("--steps", steps)
    CIMSOLVE_TAKE("--runs", runs)
    CIMSOLVE_TAKE("--target", target)
    CIMSOLVE_TAKE("--gain", gain)
    CIMSOLVE_TAKE("--feedback", feedback)
    CIMSOLVE_TAKE("--pump", pump)
    CIMSOLVE_TAKE("--beta", beta)
    CIMSOLVE_TAKE("--xi", xi)
    CIMSOLVE_TAKE("--a", a)
    CIMSOLVE_TAKE("--modulation", modulation)
    CIMSOLVE_TAKE("--epsilon", epsilon)
    CIMSOLVE_TAKE("--dt", dt)
    CIMSOLVE_TAKE("--gamma", gamma)
    CIMSOLVE_TAKE("--noise", noise)
    CIMSOLVE_TAKE("--noise-gamma", noise_gamma)
    CIMSOLVE_TAKE("--noise-c", noise_c)
    CIMSOLVE_TAKE("--diffusion", diffusion)
    CIMSOLVE_TAKE("--trajectory", trajectory)
    CIMSOLVE_TAKE("--trajectory-every", trajectory_every)
    CIMSOLVE_TAKE("--tol", tol)
    CIMSOLVE_TAKE("--max-iters", max_iters)
    CIMSOLVE_TAKE("--damping", damping)
    CIMSOLVE_TAKE("--sequential", sequential)
    CIMSOLVE_TAKE("--variant", variant)
#undef CIMSOLVE_TAKE
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

std::uint64_t require_seed(const RunSpec& s) {
  if (!s.seed) throw UsageError("--seed is required (all randomness flows from it)");
  return *s.seed;
}

void require_input(const RunSpec& s) {
  if (s.input.empty()) throw UsageError("--input is required");
}

SolverConfig config_of(const RunSpec& s) {
  try {
    return s.solver_config();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::string& path, bool closed) : out_(path), closed_(closed) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    out_ << "step,t,energy_of_rounded,best_energy,V";
    if (closed_) out_ << ",min_e,max_e,a_current,divergence";
    out_ << '\n';
    out_.precision(17);
  }
  void operator()(const TrajectoryRow& r) {
    out_ << r.step << ',' << r.t << ',' << r.energy << ',' << r.best_energy << ',' << r.lyapunov;
    if (closed_) out_ << ',' << r.min_e << ',' << r.max_e << ',' << r.a_current << ',' << r.divergence;
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  bool closed_;
};

json instance_json(const IsingInstance& inst) {
  return {{"label", inst.label()}, {"n", inst.size()}, {"edges", inst.edge_count()}};
}

int cmd_solve(const RunSpec& s, std::ostream& out) {
  require_input(s);
  const std::uint64_t seed = require_seed(s);
  const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);

  json result{{"schema_version", kSchemaVersion}, {"run_spec", runspec_to_json(s)}, {"instance", instance_json(inst)},
              {"solver", s.solver}, {"seed", seed}};
  if (s.solver == "oracle") {
    const GroundTruth gt = exhaustive_ground_states(inst, {thread_budget(0), 1u << 16});
    result["best_energy"] = gt.ground_energy;
    result["best_spins"] = spins_json(gt.ground_states.front().spins());
    result["status"] = "completed";
    emit(s.output, result, out);
    return kExitOk;
  }

  const SolverConfig cfg = config_of(s);
  std::optional<TrajectoryWriter> traj;
  if (!s.trajectory.empty() && (cfg.kind == SolverKind::open_loop || cfg.kind == SolverKind::closed_loop)) {
    traj.emplace(s.trajectory, cfg.kind == SolverKind::closed_loop);
  }
  std::optional<double> stop;
  if (s.target) stop = success_threshold(*s.target);

  BestTrace trace;
  std::string status, diagnostic;
  std::size_t steps = 0;
  switch (cfg.kind) {
    case SolverKind::open_loop: {
      OpenLoopOptions o;
      o.stop_energy = stop;
      if (traj) {
        o.sink = std::ref(*traj);
        o.sink_every = s.trajectory_every;
      }
      OpenLoopResult r = integrate_openloop(inst, cfg.nonlinearity, cfg.schedule, seed, o);
      trace = r.trace;
      status = status_name(r.status);
      diagnostic = r.diagnostic;
      steps = r.steps;
      break;
    }
    case SolverKind::closed_loop: {
      ClosedLoopOptions o;
      o.stop_energy = stop;
      if (traj) {
        o.sink = std::ref(*traj);
        o.sink_every = s.trajectory_every;
      }
      ClosedLoopResult r = integrate_closedloop(inst, cfg.closed, cfg.steps, seed, o);
      trace = r.trace;
      status = status_name(r.status);
      diagnostic = r.diagnostic;
      steps = r.steps;
      result["final_target_a"] = r.state.a_current;
      break;
    }
    case SolverKind::bp: {
      const BpResult r = bp_run(inst, cfg.beta, seed, cfg.bp);
      const SpinConfig best = bp_energy_readout(inst, r.magnetizations);
      trace.offer(r.iterations, best.energy(), best.spins());
      status = r.converged ? "converged" : "not_converged";
      steps = r.iterations;
      break;
    }
    case SolverKind::tap: {
      const TapResult r = tap_run(inst, cfg.beta, seed, cfg.tap);
      const SpinConfig best = bp_energy_readout(inst, r.state.m_now);
      trace.offer(r.iterations, best.energy(), best.spins());
      status = r.converged ? "converged" : "not_converged";
      steps = r.iterations;
      break;
    }
    case SolverKind::eigvec: {
      const SpinConfig best = eigenvector_rounding(inst).rounded;
      trace.offer(1, best.energy(), best.spins());
      status = "completed";
      steps = 1;
      break;
    }
  }
  result["steps"] = steps;
  result["status"] = status;
  if (!diagnostic.empty()) result["diagnostic"] = diagnostic;
  if (!trace.empty()) {
    result["best_energy"] = trace.best_energy();
    result["best_step"] = trace.best_step();
    result["best_spins"] = spins_json(trace.best_spins());
  } else {
    result["best_energy"] = nullptr;
  }
  if (s.target) {
    result["target"] = *s.target;
    result["target_reached"] = !trace.empty() && trace.best_energy() <= success_threshold(*s.target);
  }
  if (input_format(s.input, s.format) == InputFormat::gset && !trace.empty()) {
    const WeightedGraph g = gset_graph(parse_gset(read_file(s.input)));
    result["cut"] = cut_value(g, trace.best_spins());
  }
  emit(s.output, result, out);
  return kExitOk;
}

struct BenchFlags {
  std::vector<std::string> inputs;
  std::size_t sk_n = 0, sk_count = 0;
  std::uint64_t sk_seed = 1;
  std::string records, summary, plot_prefix;
  std::size_t threads = 0;
  std::vector<double> ps{50.0, 80.0, 90.0};
};

int cmd_bench(const RunSpec& s, const BenchFlags& b, std::ostream& out) {
  const std::uint64_t seed = require_seed(s);
  const SolverConfig cfg = config_of(s);

  std::vector<BenchInstance> instances;
  std::vector<std::string> paths = b.inputs;
  if (!s.input.empty() && paths.empty()) paths.push_back(s.input);
  for (const std::string& p : paths) {
    IsingInstance inst = load_instance(p, s.format, s.negate_j);
    std::string id = inst.label().empty() ? p : inst.label();
    instances.push_back({std::move(id), std::move(inst), paths.size() == 1 ? s.target : std::nullopt});
  }
  for (std::size_t k = 0; k < b.sk_count; ++k) {
    IsingInstance inst = generate_sk(b.sk_n, derive_seed(b.sk_seed, k));
    instances.push_back({inst.label(), std::move(inst), std::nullopt});
  }
  if (instances.empty()) throw UsageError("bench needs --input files or --sk-n/--sk-count");

  const std::vector<BenchRecord> records = run_grid(instances, cfg, s.runs, seed, {thread_budget(b.threads), true});
  const std::vector<std::size_t> grid = default_grid(records);
  const SuccessCurve curve = success_probability(records, grid);
  const NsSummary ns = summarize_ns(records, b.ps);

  if (!b.records.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "instance,solver,seed,step,best_energy\n";
    for (const BenchRecord& r : records) {
      for (const TracePoint& p : r.trace) {
        csv << r.instance_id << ',' << r.solver_id << ',' << r.seed << ',' << p.step << ',' << p.energy << '\n';
      }
    }
    write_file(b.records, csv.str());
  }
  if (!b.plot_prefix.empty()) {
    std::ostringstream p0, pct;
    p0.precision(17);
    pct.precision(17);
    p0 << "n,p0\n";
    for (std::size_t k = 0; k < curve.n_grid.size(); ++k) p0 << curve.n_grid[k] << ',' << curve.p0[k] << '\n';
    pct << "percentile,n_s\n";
    for (std::size_t k = 0; k < ns.percentile_values.size(); ++k) pct << ns.ps[k] << ',' << ns.percentile_values[k] << '\n';
    write_file(b.plot_prefix + "_p0.csv", p0.str());
    write_file(b.plot_prefix + "_percentiles.csv", pct.str());
  }

  std::size_t hits = 0;
  for (const BenchRecord& r : records) hits += r.hit_step().has_value();
  json per = json::object();
  for (const auto& [id, v] : ns.per_instance) per[id] = number(v);
  json pcts = json::object();
  for (std::size_t k = 0; k < ns.percentile_values.size(); ++k) pcts[shortest(ns.ps[k])] = ns.percentile_values[k];
  json summary{{"schema_version", kSchemaVersion},
               {"run_spec", runspec_to_json(s)},
               {"solver", solver_name(cfg.kind)},
               {"instances", instances.size()},
               {"runs_per_instance", s.runs},
               {"success_rate", static_cast<double>(hits) / static_cast<double>(records.size())},
               {"curve", {{"n", curve.n_grid}, {"p0", curve.p0}}},
               {"n_s", number(iterations_to_solution(curve))},
               {"n_s_per_instance", per},
               {"n_s_percentiles", pcts},
               {"attainment", ns.attainment}};
  emit(b.summary.empty() ? s.output : b.summary, summary, out);
  return kExitOk;
}

int cmd_oracle(const RunSpec& s, std::optional<double> beta, std::size_t max_states, std::ostream& out) {
  require_input(s);
  const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);
  if (inst.size() > kOracleMaxSpins) throw UsageError("oracle supports at most 24 spins");
  const GroundTruth gt = exhaustive_ground_states(inst, {thread_budget(0), max_states});
  json states = json::array();
  for (const SpinConfig& c : gt.ground_states) states.push_back(spins_json(c.spins()));
  json doc{{"schema_version", kSchemaVersion},
           {"run_spec", runspec_to_json(s)},
           {"instance", instance_json(inst)},
           {"ground_energy", gt.ground_energy},
           {"degeneracy", gt.degeneracy},
           {"truncated", gt.truncated},
           {"ground_states", states}};
  if (beta) {
    if (inst.size() > kMomentsMaxSpins) throw UsageError("Gibbs moments support at most 20 spins");
    const ExactMoments m = exact_moments(inst, *beta);
    doc["moments"] = {{"beta", m.beta}, {"log_z", m.log_z}, {"mean_energy", m.mean_energy},
                      {"magnetizations", m.magnetizations}};
  }
  emit(s.output, doc, out);
  return kExitOk;
}

std::vector<std::pair<std::size_t, Spin>> parse_clamps(const std::vector<std::string>& specs) {
  std::vector<std::pair<std::size_t, Spin>> out;
  for (const std::string& c : specs) {
    const auto colon = c.find(':');
    std::size_t idx = 0;
    const auto [p, ec] = std::from_chars(c.data(), c.data() + (colon == std::string::npos ? c.size() : colon), idx);
    const std::string value = colon == std::string::npos ? "" : c.substr(colon + 1);
    if (ec != std::errc() || colon == std::string::npos || p != c.data() + colon ||
        (value != "+1" && value != "1" && value != "-1")) {
      throw UsageError("--clamp expects index:+1 or index:-1, got '" + c + "'");
    }
    out.emplace_back(idx, value == "-1" ? Spin{-1} : Spin{1});
  }
  return out;
}

int cmd_bp(const RunSpec& s, const std::vector<std::string>& clamps, std::ostream& out) {
  require_input(s);
  const std::uint64_t seed = require_seed(s);
  const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);
  SolverConfig cfg = config_of(s);
  cfg.bp.clamps = parse_clamps(clamps);
  for (const auto& [i, v] : cfg.bp.clamps) {
    if (i >= inst.size()) throw UsageError("--clamp index " + std::to_string(i) + " out of range");
  }
  const BpResult r = bp_run(inst, cfg.beta, seed, cfg.bp);
  const SpinConfig rounded = bp_energy_readout(inst, r.magnetizations);
  emit(s.output,
       json{{"schema_version", kSchemaVersion},
            {"run_spec", runspec_to_json(s)},
            {"converged", r.converged},
            {"iters", r.iterations},
            {"saturations", r.saturations},
            {"magnetizations", r.magnetizations},
            {"rounded_spins", spins_json(rounded.spins())},
            {"rounded_energy", rounded.energy()}},
       out);
  return kExitOk;
}

int cmd_tap(const RunSpec& s, std::ostream& out) {
  require_input(s);
  const std::uint64_t seed = require_seed(s);
  const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);
  const SolverConfig cfg = config_of(s);
  const TapResult r = tap_run(inst, cfg.beta, seed, cfg.tap);
  const SpinConfig rounded = bp_energy_readout(inst, r.state.m_now);
  emit(s.output,
       json{{"schema_version", kSchemaVersion},
            {"run_spec", runspec_to_json(s)},
            {"variant", tap_variant_name(cfg.tap.variant)},
            {"converged", r.converged},
            {"iters", r.iterations},
            {"onsager_max", r.onsager_max},
            {"magnetizations", r.state.m_now},
            {"rounded_spins", spins_json(rounded.spins())},
            {"rounded_energy", rounded.energy()}},
       out);
  return kExitOk;
}

int cmd_spectrum(const RunSpec& s, std::ostream& out) {
  require_input(s);
  const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);
  if (inst.size() < 2) throw UsageError("spectrum needs at least 2 spins");
  const SpectralResult r = eigenvector_rounding(inst);
  json doc{{"schema_version", kSchemaVersion},
           {"run_spec", runspec_to_json(s)},
           {"instance", instance_json(inst)},
           {"lambda_max", r.eigenvalue},
           {"residual", r.residual},
           {"eigenvector", r.eigenvector},
           {"rounded_spins", spins_json(r.rounded.spins())},
           {"rounded_energy", r.rounded.energy()}};
  if (s.beta) doc["threshold_gain"] = threshold_gain(inst, *s.beta);
  emit(s.output, doc, out);
  return kExitOk;
}

int cmd_convert(const RunSpec& s, const std::string& to, std::ostream& out) {
  require_input(s);
  const InputFormat from = input_format(s.input, s.format);
  std::string text;
  if (to == "gset") {
    if (from == InputFormat::gset && !s.negate_j) {
      text = write_gset(parse_gset(read_file(s.input)));
    } else {
      // Ising -> MAXCUT: w_uv = -J_uv.
      const IsingInstance inst = load_instance(s.input, s.format, s.negate_j);
      GsetFile g{inst.size(), {}};
      for (const Coupling& c : inst.edges()) g.edges.push_back({c.i + 1, c.j + 1, -c.value, shortest(-c.value)});
      text = write_gset(g);
    }
  } else {
    text = instance_to_json(load_instance(s.input, s.format, s.negate_j));
  }
  if (s.output.empty() || s.output == "-") {
    out << text;
  } else {
    write_file(s.output, text);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ising ground-state solvers: soft-spin dynamics, message passing and exact search", "cimsolve"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SpecFlags solve_f, bench_f, oracle_f, bp_f, tap_f, spec_f, conv_f;
  BenchFlags bench_extra;

  CLI::App* solve = app.add_subcommand("solve", "Run one solver on one instance");
  solve_f.add_io(solve);
  solve_f.add_dynamics(solve);

  CLI::App* bench = app.add_subcommand("bench", "Run an ensemble and report success curves and n_s");
  bench_f.add_io(bench);
  bench_f.add_dynamics(bench);
  bench->add_option("--runs", bench_f.flags.runs, "Runs per instance");
  bench->add_option("--inputs", bench_extra.inputs, "Several instance files");
  bench->add_option("--sk-n", bench_extra.sk_n, "Generate SK instances of this size");
  bench->add_option("--sk-count", bench_extra.sk_count, "Number of generated SK instances");
  bench->add_option("--sk-seed", bench_extra.sk_seed, "Seed for the generated instances");
  bench->add_option("--records", bench_extra.records, "Records CSV path");
  bench->add_option("--summary", bench_extra.summary, "Summary JSON path (default --out or stdout)");
  bench->add_option("--emit-plot-data", bench_extra.plot_prefix, "Write PREFIX_p0.csv and PREFIX_percentiles.csv");
  bench->add_option("--threads", bench_extra.threads, "Worker threads (default CIMSOLVE_THREADS or all cores)");
  bench->add_option("--percentiles", bench_extra.ps, "Percentiles of n_s to report");

  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive ground states (n <= 24)");
  oracle_f.add_io(oracle);
  std::optional<double> oracle_beta;
  std::size_t max_states = 1u << 16;
  oracle->add_option("--beta", oracle_beta, "Also report exact Gibbs moments at this beta (n <= 20)");
  oracle->add_option("--max-states", max_states, "Cap on listed ground states");

  CLI::App* bp = app.add_subcommand("bp", "Belief propagation marginals");
  bp_f.add_io(bp);
  bp_f.add_message_passing(bp, true);

  CLI::App* tap = app.add_subcommand("tap", "TAP magnetizations");
  tap_f.add_io(tap);
  tap_f.add_message_passing(tap, false);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Leading eigenpair and eigenvector rounding");
  spec_f.add_io(spectrum);
  spectrum->add_option("--beta", spec_f.flags.beta, "Also report the threshold gain at this coupling");

  CLI::App* convert = app.add_subcommand("convert", "Convert between JSON instances and G-set files");
  conv_f.add_io(convert);
  std::string to = "json";
  convert->add_option("--to", to, "Output format")->check(CLI::IsMember({"json", "gset"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* used = app.get_subcommands().front();
  try {
    if (used == solve) return cmd_solve(solve_f.resolve(solve), out);
    if (used == bench) return cmd_bench(bench_f.resolve(bench), bench_extra, out);
    if (used == oracle) return cmd_oracle(oracle_f.resolve(oracle), oracle_beta, max_states, out);
    if (used == bp) return cmd_bp(bp_f.resolve(bp), bp_f.clamps, out);
    if (used == tap) return cmd_tap(tap_f.resolve(tap), out);
    if (used == spectrum) return cmd_spectrum(spec_f.resolve(spectrum), out);
    return cmd_convert(conv_f.resolve(convert), to, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << used->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace cimsolve
