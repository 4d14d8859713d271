#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpe/linear_solver.hpp"
#include "gpe/newton.hpp"
#include "gpe/problems.hpp"
#include "gpe/steppers.hpp"

namespace gpe::bench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Profile { Desk, Paper };

/// Fully resolved run description. Every field has a value after
/// resolve_config; the JSON form round-trips.
struct RunConfig {
  std::string problem;
  std::vector<std::string> schemes;  // scheme names; "SP2" allowed for stability sweeps
  Profile profile = Profile::Desk;
  double h = 0.0;
  double final_time = 0.0;
  double tau = 0.0;
  Index n_steps = 0;
  std::vector<double> taus;          // converge / stability sweeps
  std::vector<double> hs;            // converge: optional mesh sweep
  Index observer_stride = 1;
  SolverOptions solver;
  NewtonOptions newton;
  ReInit re_init = ReInit::Simple;
  std::string output_dir = "out";
  int repeats = 5;
  int workers = 1;
  unsigned seed = 0;
  // converge: reference is the exact solution when available, otherwise a
  // fine run of reference_scheme at reference_tau on the same mesh
  std::string reference = "auto";    // auto | exact | run
  std::string reference_scheme = "RE";
  double reference_tau = 0.0;
  // stability
  std::optional<double> energy_threshold;
  Index sp2_points = 2048;
  // ground state
  GroundStateOptions ground;
  std::string initial_state_file;
  std::string state_cache_dir;
};

/// Reads the JSON object, applies defaults from the problem catalog and the
/// profile, and validates. Errors name the offending field.
RunConfig resolve_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

std::string to_string(Profile p);

}  // namespace gpe::bench
