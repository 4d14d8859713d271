#include "gpe/bench/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gpe/evolution.hpp"
#include "gpe/spectral.hpp"
#include "gpe/state_io.hpp"

namespace gpe::bench {

const char* const kObservableColumns = "t,mass,energy,pseudo_energy,err_l2,err_h1,err_l1rho,wall_s";

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

std::string tag(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void prepare_output(const RunConfig& c, const std::string& command) {
  fs::create_directories(c.output_dir);
  nlohmann::json j = to_json(c);
  j["command"] = command;
  std::ofstream(fs::path(c.output_dir) / "resolved_config.json") << j.dump(2) << '\n';
}

void write_observables(const fs::path& path, const std::vector<ObservableSample>& samples) {
  std::ofstream out(path);
  out << kObservableColumns << '\n';
  for (const auto& s : samples) {
    out << num(s.t) << ',' << num(s.mass) << ',' << num(s.energy) << ',' << num(s.pseudo_energy) << ',';
    if (s.errors)
      out << num(s.errors->l2) << ',' << num(s.errors->h1) << ',' << num(s.errors->l1_density);
    else
      out << "nan,nan,nan";
    out << ',' << num(s.wall_seconds) << '\n';
  }
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

fs::path cache_path(const RunConfig& c, double h) {
  return fs::path(c.state_cache_dir) / (c.problem + "_h" + tag(h) + "_" + to_string(c.profile) + "_ground.csv");
}

/// Discretization with the initial state taken from, in order: the explicit
/// state file, the cache directory, or a fresh computation (then cached).
Discretization prepare(const RunConfig& c, double h) {
  const ProblemSpec& p = find_problem(c.problem);
  const bool desk = c.profile == Profile::Desk;
  if (!c.initial_state_file.empty()) {
    const Mesh mesh = p.build_mesh(h, desk);
    const ComplexVector u0 = read_state(c.initial_state_file, mesh);
    return discretize(p, h, desk, c.ground, &u0);
  }
  if (!c.state_cache_dir.empty() && p.initial == InitialKind::GroundState) {
    const fs::path file = cache_path(c, h);
    if (fs::exists(file)) {
      const Mesh mesh = p.build_mesh(h, desk);
      const ComplexVector u0 = read_state(file.string(), mesh);
      return discretize(p, h, desk, c.ground, &u0);
    }
    Discretization d = discretize(p, h, desk, c.ground);
    fs::create_directories(c.state_cache_dir);
    write_state(file.string(), d.space->mesh(), d.u0,
                {{"problem", c.problem}, {"h", num(h)}, {"eigenvalue", num(d.ground->eigenvalue)}});
    return d;
  }
  return discretize(p, h, desk, c.ground);
}

EvolutionOptions evolution_options(const RunConfig& c) {
  EvolutionOptions o;
  o.stepper.newton = c.newton;
  o.stepper.solver = c.solver;
  o.stepper.re_init = c.re_init;
  o.observer_stride = c.observer_stride;
  return o;
}

Index steps_for(double final_time, double tau, const std::string& field) {
  const Index n = static_cast<Index>(std::llround(final_time / tau));
  if (std::abs(static_cast<double>(n) * tau - final_time) > 1e-12 * std::max(1.0, final_time))
    throw ConfigError("config field '" + field + "': final_time is not an integer multiple of " + num(tau));
  return n;
}

}  // namespace

int cmd_run(const RunConfig& c) {
  prepare_output(c, "run");
  const ProblemSpec& p = find_problem(c.problem);
  Discretization d = prepare(c, c.h);
  std::ofstream summary(fs::path(c.output_dir) / "summary.csv");
  summary << "problem,scheme,h,nodes,tau,n_steps,steps_completed,mass_drift,energy_drift,err_l2,err_h1,err_l1rho,"
             "blow_up_time,newton_iterations,linear_solves,step_seconds_mean,repeats,status\n";
  int exit_code = 0;
  for (const auto& name : c.schemes) {
    if (name == "SP2") throw ConfigError("config field 'schemes': SP2 is only available in the stability command");
    const SchemeId scheme = parse_scheme(name);
    EvolutionOptions o = evolution_options(c);
    o.exact = exact_solution(p);
    RunReport rep;
    double seconds = 0.0;
    for (int r = 0; r < c.repeats; ++r) {
      rep = run_evolution(*d.ops, d.u0, scheme, c.tau, c.n_steps, p.beta, o);
      seconds += rep.stepping_seconds;
    }
    write_observables(fs::path(c.output_dir) / ("run_" + name + ".csv"), rep.samples);
    const auto& first = rep.samples.front();
    const auto& last = rep.samples.back();
    const double mass_drift = std::abs(last.mass - first.mass) / std::abs(first.mass);
    const double energy_drift = std::abs(last.energy - first.energy) / std::abs(first.energy);
    const ErrorNorms e = rep.final_errors.value_or(ErrorNorms{NAN, NAN, NAN});
    std::string status = rep.failed ? "failed: " + rep.failure : "ok";
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    summary << c.problem << ',' << name << ',' << num(c.h) << ',' << d.space->num_nodes() << ',' << num(c.tau) << ','
            << c.n_steps << ',' << rep.steps_completed << ',' << num(mass_drift) << ',' << num(energy_drift) << ','
            << num(e.l2) << ',' << num(e.h1) << ',' << num(e.l1_density) << ',' << num(rep.blow_up_time) << ','
            << rep.stats.newton_iterations << ',' << rep.stats.linear_solves << ','
            << num(seconds / c.repeats) << ',' << c.repeats << ',' << status << '\n';
    std::cout << name << ": " << status << ", " << rep.steps_completed << " steps, " << num(seconds / c.repeats)
              << " s\n";
    if (rep.failed) exit_code = 1;
  }
  return exit_code;
}

int cmd_converge(const RunConfig& c) {
  prepare_output(c, "converge");
  const ProblemSpec& p = find_problem(c.problem);
  std::vector<double> taus = c.taus.empty() ? std::vector<double>{c.tau} : c.taus;
  std::sort(taus.begin(), taus.end(), std::greater<>());
  const std::vector<double> hs = c.hs.empty() ? std::vector<double>{c.h} : c.hs;
  if (taus.size() < 2 && hs.size() < 2) throw ConfigError("config field 'taus': need at least two resolutions");
  std::vector<Index> steps;
  for (double t : taus) steps.push_back(steps_for(c.final_time, t, "taus"));
  const bool use_exact = c.reference == "exact" || (c.reference == "auto" && p.exact);

  struct Level {
    Discretization d;
    std::optional<ComplexVector> reference;
    std::string failure;
  };
  std::vector<Level> levels;
  for (double h : hs) levels.push_back({prepare(c, h), std::nullopt, {}});

  parallel_for(levels.size(), use_exact ? 1 : c.workers, [&](std::size_t k) {
    if (use_exact) return;
    Level& lv = levels[k];
    EvolutionOptions o = evolution_options(c);
    o.observer_stride = 0;
    const Index n = steps_for(c.final_time, c.reference_tau, "reference_tau");
    const RunReport r = run_evolution(*lv.d.ops, lv.d.u0, parse_scheme(c.reference_scheme), c.reference_tau, n,
                                      p.beta, o);
    if (r.failed)
      lv.failure = r.failure;
    else
      lv.reference = r.final_state;
  });

  struct Cell {
    std::size_t scheme = 0, level = 0, tau = 0;
    ErrorNorms errors{NAN, NAN, NAN};
    double seconds = 0.0;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < c.schemes.size(); ++s)
    for (std::size_t l = 0; l < levels.size(); ++l)
      for (std::size_t t = 0; t < taus.size(); ++t) {
        Cell cell;
        cell.scheme = s;
        cell.level = l;
        cell.tau = t;
        cells.push_back(cell);
      }

  parallel_for(cells.size(), c.workers, [&](std::size_t i) {
    Cell& cell = cells[i];
    Level& lv = levels[cell.level];
    if (!use_exact && !lv.reference) {
      cell.status = "failed: reference run: " + lv.failure;
      return;
    }
    EvolutionOptions o = evolution_options(c);
    o.observer_stride = 0;
    o.errors_every_sample = false;
    if (use_exact)
      o.exact = exact_solution(p);
    else
      o.reference = &*lv.reference;
    try {
      const RunReport r = run_evolution(*lv.d.ops, lv.d.u0, parse_scheme(c.schemes[cell.scheme]), taus[cell.tau],
                                        steps[cell.tau], p.beta, o);
      cell.seconds = r.stepping_seconds;
      if (r.failed)
        cell.status = "failed: " + r.failure;
      else if (r.final_errors)
        cell.errors = *r.final_errors;
    } catch (const std::exception& e) {
      cell.status = std::string("failed: ") + e.what();
    }
  });

  std::ofstream out(fs::path(c.output_dir) / "converge.csv");
  out << "scheme,h,tau,n_steps,err_l2,err_h1,err_l1rho,eoc_l2,eoc_h1,eoc_l1rho,wall_s,status\n";
  int exit_code = 0;
  for (std::size_t s = 0; s < c.schemes.size(); ++s)
    for (std::size_t l = 0; l < levels.size(); ++l) {
      std::vector<const Cell*> row;
      for (const auto& cell : cells)
        if (cell.scheme == s && cell.level == l) row.push_back(&cell);
      std::vector<double> e2, e1, er;
      for (const Cell* cell : row) {
        e2.push_back(cell->errors.l2);
        e1.push_back(cell->errors.h1);
        er.push_back(cell->errors.l1_density);
      }
      std::vector<std::optional<double>> r2(row.size()), r1(row.size()), rr(row.size());
      if (row.size() >= 2) {
        auto a = eoc(e2, taus), b = eoc(e1, taus), d = eoc(er, taus);
        for (std::size_t k = 0; k + 1 < row.size(); ++k) {
          r2[k + 1] = a[k];
          r1[k + 1] = b[k];
          rr[k + 1] = d[k];
        }
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        const Cell& cell = *row[k];
        std::string status = cell.status;
        for (char& ch : status)
          if (ch == ',' || ch == '\n') ch = ';';
        if (status != "ok") exit_code = 1;
        out << c.schemes[s] << ',' << num(hs[l]) << ',' << num(taus[cell.tau]) << ',' << steps[cell.tau] << ','
            << num(cell.errors.l2) << ',' << num(cell.errors.h1) << ',' << num(cell.errors.l1_density) << ','
            << num(r2[k]) << ',' << num(r1[k]) << ',' << num(rr[k]) << ',' << num(cell.seconds) << ',' << status
            << '\n';
      }
    }
  std::cout << "wrote " << (fs::path(c.output_dir) / "converge.csv").string() << '\n';
  return exit_code;
}

int cmd_groundstate(const RunConfig& c) {
  prepare_output(c, "groundstate");
  const ProblemSpec& p = find_problem(c.problem);
  if (!p.ground) throw ConfigError("config field 'problem': '" + p.name + "' has no ground-state recipe");
  const bool desk = c.profile == Profile::Desk;
  FemSpace space(p.build_mesh(c.h, desk));
  const GroundStateSpec& g = *p.ground;
  GroundStateOptions opts = c.ground;
  GroundStateResult r;
  try {
    r = ground_state(space, space.sample(g.potential.function()), g.beta, g.omega, p.kinetic, opts);
  } catch (const GroundStateError& e) {
    std::cerr << "ground state failed: " << e.what() << '\n';
    return 1;
  }
  const fs::path file = fs::path(c.output_dir) / (c.problem + "_ground.csv");
  write_state(file.string(), space.mesh(), r.state,
              {{"problem", c.problem}, {"h", num(c.h)}, {"eigenvalue", num(r.eigenvalue)}});
  if (!c.state_cache_dir.empty()) {
    fs::create_directories(c.state_cache_dir);
    fs::copy_file(file, cache_path(c, c.h), fs::copy_options::overwrite_existing);
  }
  std::ofstream hist(fs::path(c.output_dir) / "groundstate_energy.csv");
  hist << "iteration,energy\n";
  for (std::size_t k = 0; k < r.energy_history.size(); ++k) hist << k << ',' << num(r.energy_history[k]) << '\n';
  std::ofstream out(fs::path(c.output_dir) / "groundstate.csv");
  out << "problem,h,nodes,eigenvalue,residual,iterations,vortices\n";
  const std::string vortices = p.dim == 2 ? std::to_string(count_vortices(space.mesh(), r.state)) : "nan";
  out << c.problem << ',' << num(c.h) << ',' << space.num_nodes() << ',' << num(r.eigenvalue) << ','
      << num(r.residual) << ',' << r.iterations << ',' << vortices << '\n';
  std::cout << "eigenvalue " << num(r.eigenvalue) << " after " << r.iterations << " iterations, state in "
            << file.string() << '\n';
  return 0;
}

int cmd_stability(const RunConfig& c) {
  prepare_output(c, "stability");
  const ProblemSpec& p = find_problem(c.problem);
  const std::vector<double> taus = c.taus.empty() ? std::vector<double>{c.tau} : c.taus;
  const double threshold = c.energy_threshold.value_or(0.0);
  std::vector<Index> steps;
  for (double t : taus) steps.push_back(steps_for(c.final_time, t, "taus"));

  bool needs_fem = false;
  for (const auto& s : c.schemes) needs_fem = needs_fem || s != "SP2";
  std::optional<Discretization> d;
  if (needs_fem) d = prepare(c, c.h);

  struct Cell {
    std::size_t scheme = 0, tau = 0;
    std::optional<double> crossing;
    double max_energy = NAN;
    double seconds = 0.0;
    std::string status = "ok";
  };
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < c.schemes.size(); ++s)
    for (std::size_t t = 0; t < taus.size(); ++t) {
      Cell cell;
      cell.scheme = s;
      cell.tau = t;
      cells.push_back(cell);
    }
  std::mutex io;

  parallel_for(cells.size(), c.workers, [&](std::size_t i) {
    Cell& cell = cells[i];
    const std::string& name = c.schemes[cell.scheme];
    const double tau = taus[cell.tau];
    const fs::path trace = fs::path(c.output_dir) / ("stability_" + name + "_tau" + tag(tau) + ".csv");
    try {
      if (name == "SP2") {
        if (p.dim != 1 || !p.exact) throw ConfigError("SP2 needs a 1D problem with a closed-form initial datum");
        const PeriodicGrid grid(p.x_range.lo, p.x_range.hi, c.sp2_points);
        const auto v_fn = p.potential.function();
        std::vector<double> v(static_cast<std::size_t>(grid.n));
        ComplexVector u0(grid.n);
        const ExactField f = exact_field(p, 0.0);
        for (Index j = 0; j < grid.n; ++j) {
          v[static_cast<std::size_t>(j)] = v_fn({grid.x(j), 0.0});
          u0(j) = f.value({grid.x(j), 0.0});
        }
        const Sp2Report r = run_sp2(grid, u0, v, p.beta, p.kinetic, tau, steps[cell.tau], c.observer_stride, threshold);
        cell.crossing = r.crossing_time;
        cell.seconds = r.seconds;
        double mx = -INFINITY;
        std::ofstream out(trace);
        out << "t,mass,energy\n";
        for (const auto& s : r.samples) {
          mx = std::max(mx, s.energy);
          out << num(s.t) << ',' << num(s.mass) << ',' << num(s.energy) << '\n';
        }
        cell.max_energy = mx;
        if (r.blow_up) cell.status = "blow-up";
      } else {
        EvolutionOptions o = evolution_options(c);
        o.energy_threshold = threshold;
        const RunReport r = run_evolution(*d->ops, d->u0, parse_scheme(name), tau, steps[cell.tau], p.beta, o);
        cell.crossing = r.crossing_time;
        cell.seconds = r.stepping_seconds;
        double mx = -INFINITY;
        for (const auto& s : r.samples) mx = std::max(mx, s.energy);
        cell.max_energy = mx;
        write_observables(trace, r.samples);
        if (r.failed) cell.status = "failed: " + r.failure;
      }
    } catch (const std::exception& e) {
      cell.status = std::string("failed: ") + e.what();
    }
    std::lock_guard<std::mutex> lock(io);
    std::cout << name << " tau=" << num(tau) << ": crossing " << (cell.crossing ? num(*cell.crossing) : "none")
              << '\n';
  });

  std::ofstream out(fs::path(c.output_dir) / "stability.csv");
  out << "scheme,tau,final_time,threshold,crossing_time,max_energy,wall_s,status\n";
  int exit_code = 0;
  for (const auto& cell : cells) {
    std::string status = cell.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    if (status.rfind("failed", 0) == 0) exit_code = 1;
    out << c.schemes[cell.scheme] << ',' << num(taus[cell.tau]) << ',' << num(c.final_time) << ',' << num(threshold)
        << ',' << (cell.crossing ? num(*cell.crossing) : "none") << ',' << num(cell.max_energy) << ','
        << num(cell.seconds) << ',' << status << '\n';
  }
  return exit_code;
}

}  // namespace gpe::bench
