#include "cimsolve/runspec.hpp"

#include <set>
#include <stdexcept>

namespace cimsolve {

using nlohmann::json;

namespace {

template <class T>
void take(const json& doc, const char* key, T& field) {
  if (!doc.contains(key)) return;
  try {
    field = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("run spec: bad value for '") + key + "'");
  }
}

template <class T>
void take(const json& doc, const char* key, std::optional<T>& field) {
  if (!doc.contains(key) || doc.at(key).is_null()) return;
  T v{};
  take(doc, key, v);
  field = v;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

Ramp ramp_from(const std::vector<std::pair<double, double>>& knots, Ramp fallback) {
  return knots.empty() ? fallback : Ramp(knots);
}

}  // namespace

RunSpec runspec_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("run spec: top level must be an object");
  static const std::set<std::string> allowed{
      "schema_version", "input", "format", "negate_j", "solver", "seed", "steps", "runs", "target", "gain",
      "feedback", "pump", "beta", "xi", "a", "modulation", "epsilon", "dt", "gamma", "initial_spread",
      "pump_ramp", "beta_ramp", "noise", "noise_gamma", "noise_c", "diffusion", "damping", "tol", "max_iters",
      "variant", "sequential", "output", "trajectory", "trajectory_every"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("run spec: unknown key '" + key + "'");
  }
  RunSpec s;
  take(doc, "input", s.input);
  take(doc, "format", s.format);
  take(doc, "negate_j", s.negate_j);
  take(doc, "solver", s.solver);
  take(doc, "seed", s.seed);
  take(doc, "steps", s.steps);
  take(doc, "runs", s.runs);
  take(doc, "target", s.target);
  take(doc, "gain", s.gain);
  take(doc, "feedback", s.feedback);
  take(doc, "pump", s.pump);
  take(doc, "beta", s.beta);
  take(doc, "xi", s.xi);
  take(doc, "a", s.a);
  take(doc, "modulation", s.modulation);
  take(doc, "epsilon", s.epsilon);
  take(doc, "dt", s.dt);
  take(doc, "gamma", s.gamma);
  take(doc, "initial_spread", s.initial_spread);
  take(doc, "pump_ramp", s.pump_ramp);
  take(doc, "beta_ramp", s.beta_ramp);
  take(doc, "noise", s.noise);
  take(doc, "noise_gamma", s.noise_gamma);
  take(doc, "noise_c", s.noise_c);
  take(doc, "diffusion", s.diffusion);
  take(doc, "damping", s.damping);
  take(doc, "tol", s.tol);
  take(doc, "max_iters", s.max_iters);
  take(doc, "variant", s.variant);
  take(doc, "sequential", s.sequential);
  take(doc, "output", s.output);
  take(doc, "trajectory", s.trajectory);
  take(doc, "trajectory_every", s.trajectory_every);
  s.validate();
  return s;
}

RunSpec parse_runspec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("run spec: ") + e.what());
  }
  return runspec_from_json(doc);
}

json runspec_to_json(const RunSpec& s) {
  return json{{"schema_version", 1},
              {"input", s.input},
              {"format", s.format},
              {"negate_j", s.negate_j},
              {"solver", s.solver},
              {"seed", opt(s.seed)},
              {"steps", s.steps},
              {"runs", s.runs},
              {"target", opt(s.target)},
              {"gain", s.gain},
              {"feedback", s.feedback},
              {"pump", opt(s.pump)},
              {"beta", opt(s.beta)},
              {"xi", s.xi},
              {"a", s.a},
              {"modulation", s.modulation},
              {"epsilon", s.epsilon},
              {"dt", opt(s.dt)},
              {"gamma", s.gamma},
              {"initial_spread", s.initial_spread},
              {"pump_ramp", s.pump_ramp},
              {"beta_ramp", s.beta_ramp},
              {"noise", s.noise},
              {"noise_gamma", s.noise_gamma},
              {"noise_c", s.noise_c},
              {"diffusion", s.diffusion},
              {"damping", s.damping},
              {"tol", s.tol},
              {"max_iters", s.max_iters},
              {"variant", s.variant},
              {"sequential", s.sequential},
              {"output", s.output},
              {"trajectory", s.trajectory},
              {"trajectory_every", s.trajectory_every}};
}

void RunSpec::validate() const {
  if (solver != "oracle") parse_solver(solver);
  if (gain != "cubic" && gain != "tanh_saturation") throw std::invalid_argument("run spec: gain must be cubic or tanh_saturation");
  if (feedback != "identity" && feedback != "tanh") throw std::invalid_argument("run spec: feedback must be identity or tanh");
  if (modulation != "static" && modulation != "divergence_positive") {
    throw std::invalid_argument("run spec: modulation must be static or divergence_positive");
  }
  if (noise != "constant" && noise != "log_decay") throw std::invalid_argument("run spec: noise must be constant or log_decay");
  parse_tap_variant(variant);
  if (steps == 0) throw std::invalid_argument("run spec: steps must be >= 1");
  if (runs == 0) throw std::invalid_argument("run spec: runs must be >= 1");
  if (trajectory_every == 0) throw std::invalid_argument("run spec: trajectory_every must be >= 1");
}

SolverConfig RunSpec::solver_config() const {
  validate();
  if (solver == "oracle") throw std::invalid_argument("run spec: the oracle is not an iterative solver");
  SolverConfig c;
  c.kind = parse_solver(solver);
  const Nonlinearity nl{gain == "cubic" ? GainKind::cubic : GainKind::tanh_saturation,
                        feedback == "identity" ? FeedbackKind::identity : FeedbackKind::tanh, pump.value_or(0.0)};

  const double ol_dt = dt.value_or(0.01);
  c.nonlinearity = nl;
  c.schedule.dt = ol_dt;
  c.schedule.duration = static_cast<double>(steps) * ol_dt;
  c.schedule.pump = ramp_from(pump_ramp, pump ? Ramp::constant(*pump) : Ramp::linear(0.5, 1.5, c.schedule.duration));
  c.schedule.beta = ramp_from(beta_ramp, Ramp::constant(beta.value_or(1.0)));
  c.schedule.noise.kind = noise == "constant" ? NoiseSchedule::Kind::constant : NoiseSchedule::Kind::log_decay;
  c.schedule.noise.gamma = noise_gamma;
  c.schedule.noise.c = noise_c;
  c.schedule.diffusion = diffusion;

  c.closed.nonlinearity = nl;
  c.closed.beta = beta.value_or(0.3);
  c.closed.xi = xi;
  c.closed.target = a;
  c.closed.modulation = modulation == "static" ? Modulation::static_target : Modulation::divergence_positive;
  c.closed.epsilon = epsilon;
  c.closed.dt = dt.value_or(0.1);
  c.closed.gamma = gamma;
  c.closed.initial_spread = initial_spread;
  c.steps = steps;

  c.beta = beta.value_or(1.0);
  c.bp.damping = damping;
  c.bp.tol = tol;
  c.bp.max_iters = max_iters;
  c.bp.sequential = sequential;
  c.tap.tol = tol;
  c.tap.max_iters = max_iters;
  c.tap.variant = parse_tap_variant(variant);
  return c;
}

}  // namespace cimsolve
