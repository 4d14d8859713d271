// Benchmark driver: gpe_bench <run|converge|groundstate|stability> [options]

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gpe/bench/commands.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
  CLI::App app{"Finite element time stepping benchmarks for the Gross-Pitaevskii equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, profile, problem, threshold;
  std::vector<std::string> schemes;
  std::vector<double> taus, hs;
  int workers = 0, repeats = 0;
  long long n_steps = -1, stride = -1;
  unsigned seed = 0;
  double tau = 0.0, h = 0.0, final_time = 0.0;
  bool seed_set = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--profile", profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--workers", workers, "parallel jobs")->check(CLI::PositiveNumber);
    sub->add_option_function<unsigned>("--seed", [&](unsigned s) { seed = s; seed_set = true; }, "random seed");
    sub->add_option("--problem", problem, "catalogued problem name");
    sub->add_option("--scheme", schemes, "IM, CN, RE, LCN, TWOSTEP (SP2 for stability)");
    sub->add_option("--tau", tau, "time step");
    sub->add_option("--taus", taus, "time steps of a sweep");
    sub->add_option("--mesh-size", h, "mesh size h");
    sub->add_option("--mesh-sizes", hs, "mesh sizes of a sweep");
    sub->add_option("--steps", n_steps, "number of time steps");
    sub->add_option("--final-time", final_time, "final time");
    sub->add_option("--stride", stride, "observer stride");
    sub->add_option("--repeats", repeats, "timing repeats")->check(CLI::PositiveNumber);
    sub->add_option("--threshold", threshold, "energy threshold (stability), number or inf");
  };
  CLI::App* run = app.add_subcommand("run", "single evolution per scheme");
  CLI::App* converge = app.add_subcommand("converge", "error and EOC tables over tau (and h) sweeps");
  CLI::App* groundstate = app.add_subcommand("groundstate", "normalized gradient flow ground state");
  CLI::App* stability = app.add_subcommand("stability", "first time the energy exceeds a threshold");
  for (CLI::App* sub : {run, converge, groundstate, stability}) common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    json j = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      j = json::parse(in, nullptr, true, true);
    }
    if (!out_dir.empty()) j["output_dir"] = out_dir;
    if (!profile.empty()) j["profile"] = profile;
    if (workers > 0) j["workers"] = workers;
    if (seed_set) j["seed"] = seed;
    if (!problem.empty()) j["problem"] = problem;
    if (!schemes.empty()) {
      j.erase("scheme");
      j["schemes"] = schemes;
    }
    if (final_time > 0.0) j["final_time"] = final_time;
    if (tau > 0.0) {
      j["tau"] = tau;
      if (n_steps < 0) j.erase("n_steps");
    }
    if (n_steps >= 0) {
      j["n_steps"] = n_steps;
      if (!(tau > 0.0) && n_steps > 0) j.erase("tau");
    }
    if (!taus.empty()) j["taus"] = taus;
    if (h > 0.0) j["h"] = h;
    if (!hs.empty()) j["hs"] = hs;
    if (stride >= 0) j["observer_stride"] = stride;
    if (repeats > 0) j["repeats"] = repeats;
    if (!threshold.empty()) {
      if (threshold == "inf")
        j["energy_threshold"] = "inf";
      else
        j["energy_threshold"] = std::stod(threshold);
    }
    const gpe::bench::RunConfig config = gpe::bench::resolve_config(j);
    if (run->parsed()) return gpe::bench::cmd_run(config);
    if (converge->parsed()) return gpe::bench::cmd_converge(config);
    if (groundstate->parsed()) return gpe::bench::cmd_groundstate(config);
    return gpe::bench::cmd_stability(config);
  } catch (const gpe::bench::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
