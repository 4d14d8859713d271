#include "gpe/bench/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace gpe::bench {

using nlohmann::json;

std::string to_string(Profile p) { return p == Profile::Desk ? "desk" : "paper"; }

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

template <class T>
T get(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(key, std::string("wrong type (") + e.what() + ")");
  }
}

double positive(const json& j, const std::string& key, double fallback) {
  const double v = get<double>(j, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be a positive number");
  return v;
}

SolveMethod parse_method(const std::string& s) {
  if (s == "auto") return SolveMethod::Auto;
  if (s == "direct") return SolveMethod::Direct;
  if (s == "iterative") return SolveMethod::Iterative;
  fail("solver.method", "expected auto, direct or iterative, got '" + s + "'");
}

std::string method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::Direct: return "direct";
    case SolveMethod::Iterative: return "iterative";
  }
  return "auto";
}

const std::vector<std::string> kKnownKeys = {
    "problem", "scheme", "schemes", "profile", "h", "final_time", "tau", "n_steps", "taus", "hs",
    "observer_stride", "solver", "newton", "re_init", "output_dir", "repeats", "workers", "seed",
    "reference", "reference_scheme", "reference_tau", "energy_threshold", "sp2_points", "ground_state",
    "initial_state_file", "state_cache_dir"};

}  // namespace

RunConfig resolve_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& k : kKnownKeys) known = known || k == key;
    if (!known) fail(key, "unknown key");
  }

  RunConfig c;
  c.problem = get<std::string>(j, "problem", "");
  if (c.problem.empty()) fail("problem", "required");
  const ProblemSpec* problem = nullptr;
  try {
    problem = &find_problem(c.problem);
  } catch (const std::invalid_argument& e) {
    fail("problem", e.what());
  }

  const std::string profile = get<std::string>(j, "profile", "desk");
  if (profile == "desk")
    c.profile = Profile::Desk;
  else if (profile == "paper")
    c.profile = Profile::Paper;
  else
    fail("profile", "expected desk or paper");

  if (j.contains("schemes")) {
    c.schemes = get<std::vector<std::string>>(j, "schemes", {});
  } else {
    c.schemes = {get<std::string>(j, "scheme", "RE")};
  }
  if (c.schemes.empty()) fail("schemes", "at least one scheme required");
  for (auto& s : c.schemes) {
    if (s == "SP2" || s == "sp2") {
      s = "SP2";
      continue;
    }
    try {
      s = gpe::to_string(parse_scheme(s));
    } catch (const std::invalid_argument& e) {
      fail("schemes", e.what());
    }
  }

  c.h = positive(j, "h", c.profile == Profile::Desk ? problem->h_desk : problem->h_paper);
  c.final_time = positive(j, "final_time", problem->final_time);

  const bool has_tau = j.contains("tau"), has_steps = j.contains("n_steps");
  if (has_steps) {
    c.n_steps = get<Index>(j, "n_steps", 0);
    if (c.n_steps < 0) fail("n_steps", "must be nonnegative");
  }
  if (has_tau) c.tau = positive(j, "tau", 1.0);
  if (has_steps && c.n_steps == 0) {
    // a zero-step run only records the initial observables
    c.tau = has_tau ? c.tau : problem->tau_paper;
    c.final_time = 0.0;
  } else if (has_tau && has_steps) {
    if (std::abs(c.tau * static_cast<double>(c.n_steps) - c.final_time) > 1e-12 * std::max(1.0, c.final_time))
      fail("tau", "tau * n_steps must equal final_time");
  } else if (has_tau) {
    c.n_steps = static_cast<Index>(std::llround(c.final_time / c.tau));
    if (std::abs(c.tau * static_cast<double>(c.n_steps) - c.final_time) > 1e-12 * std::max(1.0, c.final_time))
      fail("tau", "final_time is not an integer multiple of tau");
  } else if (has_steps) {
    c.tau = c.final_time / static_cast<double>(c.n_steps);
  } else {
    c.tau = problem->tau_paper;
    c.n_steps = static_cast<Index>(std::llround(c.final_time / c.tau));
    if (std::abs(c.tau * static_cast<double>(c.n_steps) - c.final_time) > 1e-12 * std::max(1.0, c.final_time))
      fail("tau", "default step does not divide final_time; set tau or n_steps");
  }

  c.taus = get<std::vector<double>>(j, "taus", {});
  for (double t : c.taus)
    if (!(t > 0.0)) fail("taus", "entries must be positive");
  c.hs = get<std::vector<double>>(j, "hs", {});
  for (double h : c.hs)
    if (!(h > 0.0)) fail("hs", "entries must be positive");

  c.observer_stride = get<Index>(j, "observer_stride", 1);
  if (c.observer_stride < 0) fail("observer_stride", "must be nonnegative");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (!s.is_object()) fail("solver", "must be an object");
    c.solver.method = parse_method(get<std::string>(s, "method", "auto"));
    c.solver.direct_tol = positive(s, "direct_tol", c.solver.direct_tol);
    c.solver.iterative_tol = positive(s, "iterative_tol", c.solver.iterative_tol);
    c.solver.max_iterations = get<Index>(s, "max_iterations", c.solver.max_iterations);
    c.solver.refinement_steps = get<int>(s, "refinement_steps", c.solver.refinement_steps);
    c.solver.band_limit = get<Index>(s, "band_limit", c.solver.band_limit);
  }
  if (j.contains("newton")) {
    const json& s = j.at("newton");
    if (!s.is_object()) fail("newton", "must be an object");
    c.newton.rtol = positive(s, "rtol", c.newton.rtol);
    c.newton.atol = positive(s, "atol", c.newton.atol);
    c.newton.max_iterations = get<int>(s, "max_iterations", c.newton.max_iterations);
    if (c.newton.max_iterations < 1) fail("newton.max_iterations", "must be at least 1");
    c.newton.damping = get<bool>(s, "damping", c.newton.damping);
  }
  const std::string re_init = get<std::string>(j, "re_init", "simple");
  if (re_init == "simple")
    c.re_init = ReInit::Simple;
  else if (re_init == "halfstep")
    c.re_init = ReInit::HalfStep;
  else
    fail("re_init", "expected simple or halfstep");

  c.output_dir = get<std::string>(j, "output_dir", "out");
  c.repeats = get<int>(j, "repeats", 5);
  if (c.repeats < 1) fail("repeats", "must be at least 1");
  c.workers = get<int>(j, "workers", 1);
  if (c.workers < 1) fail("workers", "must be at least 1");
  c.seed = get<unsigned>(j, "seed", 0);

  c.reference = get<std::string>(j, "reference", "auto");
  if (c.reference != "auto" && c.reference != "exact" && c.reference != "run")
    fail("reference", "expected auto, exact or run");
  if (c.reference == "exact" && !problem->exact) fail("reference", "problem has no exact solution");
  c.reference_scheme = get<std::string>(j, "reference_scheme", "RE");
  try {
    c.reference_scheme = gpe::to_string(parse_scheme(c.reference_scheme));
  } catch (const std::invalid_argument& e) {
    fail("reference_scheme", e.what());
  }
  double min_tau = c.tau;
  for (double t : c.taus) min_tau = std::min(min_tau, t);
  c.reference_tau = positive(j, "reference_tau", min_tau / 8.0);

  if (j.contains("energy_threshold")) {
    if (j.at("energy_threshold").is_string()) {
      const std::string s = j.at("energy_threshold").get<std::string>();
      if (s == "inf" || s == "infinity")
        c.energy_threshold = std::numeric_limits<double>::infinity();
      else
        fail("energy_threshold", "expected a number or \"inf\"");
    } else {
      c.energy_threshold = get<double>(j, "energy_threshold", 0.0);
    }
  }
  c.sp2_points = get<Index>(j, "sp2_points", 2048);
  if (c.sp2_points < 4) fail("sp2_points", "need at least 4 points");

  if (problem->ground) c.ground.tau = problem->ground->gf_tau;
  if (j.contains("ground_state")) {
    const json& g = j.at("ground_state");
    if (!g.is_object()) fail("ground_state", "must be an object");
    c.ground.tau = positive(g, "tau", c.ground.tau);
    c.ground.tol = positive(g, "tol", c.ground.tol);
    c.ground.max_iterations = get<int>(g, "max_iterations", c.ground.max_iterations);
    c.ground.continuation_stages = get<int>(g, "continuation_stages", c.ground.continuation_stages);
  }
  c.ground.solver = c.solver;
  c.initial_state_file = get<std::string>(j, "initial_state_file", "");
  c.state_cache_dir = get<std::string>(j, "state_cache_dir", "");

  const bool two_d = problem->dim == 2;
  if (two_d && c.profile == Profile::Desk) {
    Interval xr = problem->x_range, yr = problem->y_range;
    if (problem->desk_range) xr = yr = *problem->desk_range;
    const double unknowns = static_cast<double>(problem->cells_for(c.h, xr) + 1) *
                            static_cast<double>(problem->cells_for(c.h, yr) + 1);
    if (unknowns > 3e5) fail("h", "desk profile caps 2D runs at 3e5 unknowns; use --profile paper");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return resolve_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["schemes"] = c.schemes;
  j["profile"] = to_string(c.profile);
  j["h"] = c.h;
  j["final_time"] = c.final_time;
  j["tau"] = c.tau;
  j["n_steps"] = c.n_steps;
  j["taus"] = c.taus;
  j["hs"] = c.hs;
  j["observer_stride"] = c.observer_stride;
  j["solver"] = {{"method", method_name(c.solver.method)},
                 {"direct_tol", c.solver.direct_tol},
                 {"iterative_tol", c.solver.iterative_tol},
                 {"max_iterations", c.solver.max_iterations},
                 {"refinement_steps", c.solver.refinement_steps},
                 {"band_limit", c.solver.band_limit}};
  j["newton"] = {{"rtol", c.newton.rtol},
                 {"atol", c.newton.atol},
                 {"max_iterations", c.newton.max_iterations},
                 {"damping", c.newton.damping}};
  j["re_init"] = c.re_init == ReInit::Simple ? "simple" : "halfstep";
  j["output_dir"] = c.output_dir;
  j["repeats"] = c.repeats;
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  j["reference"] = c.reference;
  j["reference_scheme"] = c.reference_scheme;
  j["reference_tau"] = c.reference_tau;
  if (c.energy_threshold) {
    if (std::isinf(*c.energy_threshold))
      j["energy_threshold"] = "inf";
    else
      j["energy_threshold"] = *c.energy_threshold;
  }
  j["sp2_points"] = c.sp2_points;
  j["ground_state"] = {{"tau", c.ground.tau},
                       {"tol", c.ground.tol},
                       {"max_iterations", c.ground.max_iterations},
                       {"continuation_stages", c.ground.continuation_stages}};
  j["initial_state_file"] = c.initial_state_file;
  j["state_cache_dir"] = c.state_cache_dir;
  return j;
}

}  // namespace gpe::bench
