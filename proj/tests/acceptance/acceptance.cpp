// Acceptance runner. Prints one PASS/FAIL line per criterion; detail lines
// above each verdict are indented. Usage: acceptance [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gpe/evolution.hpp"
#include "gpe/observables.hpp"
#include "gpe/problems.hpp"
#include "gpe/spectral.hpp"
#include "gpe/steppers.hpp"

using namespace gpe;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<SchemeId> kAllSchemes = {SchemeId::IM, SchemeId::CN, SchemeId::RE, SchemeId::LCN,
                                           SchemeId::TwoStep};

struct Outcome {
  bool pass = false;
  std::string summary;
};

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

void detail(const std::string& s) { std::printf("    %s\n", s.c_str()); }

double pow2(int e) { return std::ldexp(1.0, e); }

// 1. Conservation on the single soliton.
Outcome conservation() {
  const ProblemSpec& p = find_problem("single_soliton");
  const Discretization d = discretize(p, 100.0 / 4096.0);
  const double tau = pow2(-6);
  bool ok = true;
  for (SchemeId id : kAllSchemes) {
    EvolutionOptions o;
    o.observer_stride = 1;
    const RunReport r = run_evolution(*d.ops, d.u0, id, tau, 640, p.beta, o);
    const ObservableSample& s0 = r.samples.front();
    double dm = 0.0, de = 0.0, dp = 0.0;
    for (const auto& s : r.samples) {
      dm = std::max(dm, std::abs(s.mass - s0.mass) / s0.mass);
      de = std::max(de, std::abs(s.energy - s0.energy) / std::abs(s0.energy));
      if (s.pseudo_energy) dp = std::max(dp, std::abs(*s.pseudo_energy - *s0.pseudo_energy) / std::abs(*s0.pseudo_energy));
    }
    bool pass = !r.failed && r.steps_completed == 640 && dm <= 1e-9 && r.total_seconds <= 120.0;
    if (id == SchemeId::CN) pass = pass && de <= 1e-8;
    if (id == SchemeId::RE) pass = pass && dp <= 1e-9;
    detail(fmt("%-7s mass %.2e  energy %.2e  pseudo-energy %s  %.1f s %s", to_string(id).c_str(), dm, de,
               id == SchemeId::RE ? fmt("%.2e", dp).c_str() : "-", r.total_seconds, pass ? "" : "<-"));
    ok = ok && pass;
  }
  return {ok, "mass <= 1e-9 for all schemes, CN energy <= 1e-8, RE pseudo-energy <= 1e-9"};
}

// 2. Coincidence of the schemes in the linear case.
Outcome linear_coincidence() {
  const FemSpace space(build_interval_mesh(-10.0, 10.0, 400));
  const Operators ops = Operators::build(space, space.sample([](const Point& x) { return 0.5 * x.x * x.x; }), 0.5);
  std::mt19937 rng(20240917);
  std::normal_distribution<double> g;
  std::vector<Complex> coef(8);
  for (auto& c : coef) c = Complex(g(rng), g(rng));
  const ComplexVector u0 = interpolate_nodal(space.mesh(), [&](const Point& x) {
    Complex v = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k)
      v += coef[k] * std::sin(static_cast<double>(k + 1) * kPi * (x.x + 10.0) / 20.0) / static_cast<double>(k + 1);
    return v;
  });
  const double tau = 0.01;
  std::vector<ComplexVector> finals;
  for (SchemeId id : kAllSchemes) {
    EvolutionOptions o;
    o.observer_stride = 0;
    finals.push_back(run_evolution(ops, u0, id, tau, 100, 0.0, o).final_state);
  }
  double one_step = 0.0, with_two_step = 0.0;
  for (std::size_t a = 0; a < finals.size(); ++a)
    for (std::size_t b = a + 1; b < finals.size(); ++b) {
      const double e = error_norms(space, finals[a], finals[b]).l2;
      const bool two = kAllSchemes[a] == SchemeId::TwoStep || kAllSchemes[b] == SchemeId::TwoStep;
      (two ? with_two_step : one_step) = std::max(two ? with_two_step : one_step, e);
      if (e > 1e-10) detail(fmt("%s vs %s: %.2e", to_string(kAllSchemes[a]).c_str(), to_string(kAllSchemes[b]).c_str(), e));
    }
  detail(fmt("max pairwise L2 among IM, CN, RE, LCN: %.2e", one_step));
  detail(fmt("max pairwise L2 involving TWOSTEP: %.2e", with_two_step));
  return {std::max(one_step, with_two_step) <= 1e-10, "beta = 0: all pairs agree to 1e-10 in L2 after 100 steps"};
}

// 3. Temporal order on the single soliton.
Outcome convergence_order() {
  const ProblemSpec& p = find_problem("single_soliton");
  const Discretization d = discretize(p, 100.0 / 8192.0);
  const ExactField exact = exact_field(p, 1.0);
  std::vector<double> taus;
  for (int k = 4; k <= 8; ++k) taus.push_back(pow2(-k));
  bool ok = true;
  for (SchemeId id : kAllSchemes) {
    EvolutionOptions o;
    o.observer_stride = 0;
    const double ref_tau = pow2(-11);
    const ComplexVector ref = run_evolution(*d.ops, d.u0, id, ref_tau, std::llround(1.0 / ref_tau), p.beta, o).final_state;
    std::vector<double> l2, h1, l2x;
    for (double tau : taus) {
      const RunReport r = run_evolution(*d.ops, d.u0, id, tau, std::llround(1.0 / tau), p.beta, o);
      const ErrorNorms e = error_norms(*d.space, r.final_state, ref);
      l2.push_back(e.l2);
      h1.push_back(e.h1);
      l2x.push_back(error_norms(*d.space, r.final_state, exact).l2);
    }
    std::string line = fmt("%-7s EOC L2/H1:", to_string(id).c_str());
    for (auto eo : {eoc(l2, taus), eoc(h1, taus)})
      for (const auto& v : eo) {
        const bool in = v && *v >= 1.7 && *v <= 2.3;
        ok = ok && in;
        line += v ? fmt(" %.2f", *v) : std::string(" n/a");
      }
    line += "  | vs exact L2:";
    for (const auto& v : eoc(l2x, taus)) line += v ? fmt(" %.2f", *v) : std::string(" n/a");
    detail(line);
  }
  return {ok, "EOC in [1.7, 2.3] in L2 and H1 for all schemes (reference: same scheme at tau = 2^-11, same mesh)"};
}

// 4. Two-soliton error spot checks at tau = 2^-10.
Outcome two_soliton_errors() {
  const ProblemSpec& p = find_problem("two_soliton");
  const Discretization d = discretize(p, 40.0 / 51200.0);
  const double tau = pow2(-10);
  const Index n = std::llround(p.final_time / tau);
  EvolutionOptions o;
  o.observer_stride = 0;
  o.errors_every_sample = false;
  o.exact = exact_solution(p);
  struct Check {
    SchemeId id;
    const char* norm;
    double lo, hi;
  };
  bool ok = true;
  for (const Check& c : {Check{SchemeId::RE, "L1rho", 0.010, 0.042}, Check{SchemeId::CN, "H1", 0.040, 0.160},
                         Check{SchemeId::TwoStep, "L1rho", 0.07, 0.29}}) {
    const RunReport r = run_evolution(*d.ops, d.u0, c.id, tau, n, p.beta, o);
    const double v = !r.final_errors ? std::numeric_limits<double>::quiet_NaN()
                     : std::string(c.norm) == "H1" ? r.final_errors->h1
                                                    : r.final_errors->l1_density;
    const bool pass = v >= c.lo && v <= c.hi;
    detail(fmt("%-7s %-5s error %.4f  window [%.3f, %.3f]  %.1f s %s", to_string(c.id).c_str(), c.norm, v, c.lo, c.hi,
               r.total_seconds, pass ? "" : "<-"));
    ok = ok && pass;
  }
  return {ok, "RE L1rho, CN H1 and TWOSTEP L1rho inside their windows"};
}

// 5. Energy of the interpolated two-soliton datum.
Outcome two_soliton_energy() {
  const ProblemSpec& p = find_problem("two_soliton");
  const Discretization d = discretize(p, 40.0 / 51200.0);
  const double e = energy(d.ops->stiffness, d.ops->potential, *d.space, d.u0, p.beta, p.kinetic);
  detail(fmt("E[u_h(0)] = %.6f", e));
  return {std::abs(e + 48.0) <= 0.5, "initial energy -48 +- 0.5"};
}

// 6. Soliton mass and energy converge at second order in h.
Outcome soliton_observables() {
  const ProblemSpec& p = find_problem("single_soliton");
  std::vector<double> dm, de;
  for (int n : {1024, 2048, 4096}) {
    const Discretization d = discretize(p, 100.0 / n);
    dm.push_back(std::abs(mass(d.ops->mass, d.u0) - 4.0));
    de.push_back(std::abs(energy(d.ops->stiffness, d.ops->potential, *d.space, d.u0, p.beta, p.kinetic) + 1.0 / 3.0));
    detail(fmt("h = 100/%d  |M - 4| = %.3e  |E + 1/3| = %.3e", n, dm.back(), de.back()));
  }
  bool ok = true;
  for (std::size_t k = 0; k + 1 < dm.size(); ++k) {
    const double rm = dm[k] / dm[k + 1], re = de[k] / de[k + 1];
    detail(fmt("defect ratios on halving h: mass %.3f  energy %.3f", rm, re));
    ok = ok && rm >= 3.6 && rm <= 4.4 && re >= 3.6 && re <= 4.4;
  }
  return {ok, "mass -> 4 and energy -> -1/3 with defects quartering as h halves (ratio in [3.6, 4.4])"};
}

// 7. LCN errors as a function of the ratio h/tau.
Outcome lcn_ratio() {
  const ProblemSpec& p = find_problem("single_soliton");
  const ExactField exact = exact_field(p, p.final_time);
  int run = 0, best = 0;
  for (int k = 3; k <= 7; ++k) {
    const double tau = pow2(-k);
    double err[3];
    int idx = 0;
    for (double ratio : {1.0, 2.0, 4.0}) {
      FemSpace space(p.build_mesh(ratio * tau));
      const Operators ops = Operators::build(space, space.sample(p.potential.function()), p.kinetic);
      const ComplexVector u0 = interpolate_nodal(space.mesh(), exact_field(p, 0.0).value);
      EvolutionOptions o;
      o.observer_stride = 0;
      const RunReport r = run_evolution(ops, u0, SchemeId::LCN, tau, std::llround(p.final_time / tau), p.beta, o);
      err[idx++] = error_norms(space, r.final_state, exact).l2;
    }
    const bool dip = err[1] < err[0] && err[1] < err[2];
    run = dip ? run + 1 : 0;
    best = std::max(best, run);
    detail(fmt("tau = 2^-%d  L2: h/tau=1 %.3e  h/tau=2 %.3e  h/tau=4 %.3e %s", k, err[0], err[1], err[2],
               dip ? "(dip)" : ""));
  }
  detail(fmt("longest run of consecutive tau with the h/tau = 2 dip: %d", best));
  return {best >= 3, "h/tau = 2 error below h/tau = 1 and 4 for >= 3 consecutive tau"};
}

// 8. Energy behaviour on the 1D lattice problem.
Outcome stability_contrast() {
  const ProblemSpec& p = find_problem("lattice1d");
  const Discretization d = discretize(p, p.h_desk);
  const double e0 = energy(d.ops->stiffness, d.ops->potential, *d.space, d.u0, p.beta, p.kinetic);
  detail(fmt("%lld elements, E0 = %.6f", static_cast<long long>(d.space->num_elements()), e0));
  bool ok = true;
  for (int k = 8; k <= 12; ++k) {
    const double tau = pow2(-k);
    const Index n = std::llround(p.final_time / tau);
    std::string line = fmt("tau = 2^-%-2d", k);
    {
      EvolutionOptions o;
      o.energy_threshold = 10.0 * std::abs(e0);
      o.stop_at_threshold = true;
      double peak = e0;
      o.observer = [&](const ObservableSample& s, const StepperState&) { peak = std::max(peak, s.energy); };
      o.observer_stride = 1;
      const RunReport r = run_evolution(*d.ops, d.u0, SchemeId::TwoStep, tau, n, p.beta, o);
      const bool pass = r.crossing_time && *r.crossing_time < p.final_time;
      line += r.crossing_time ? fmt("  TWOSTEP crosses 10|E0| at t = %.4f", *r.crossing_time)
                              : fmt("  TWOSTEP max E/|E0| = %.3f, no crossing", peak / std::abs(e0));
      ok = ok && pass;
    }
    for (SchemeId id : {SchemeId::RE, SchemeId::CN}) {
      EvolutionOptions o;
      o.observer_stride = 1;
      const RunReport r = run_evolution(*d.ops, d.u0, id, tau, n, p.beta, o);
      double drift = r.failed ? std::numeric_limits<double>::infinity() : 0.0;
      for (const auto& s : r.samples) drift = std::max(drift, std::abs(s.energy - e0) / std::abs(e0));
      line += fmt("  %s drift %.2e", to_string(id).c_str(), drift);
      ok = ok && drift <= 1e-6;
    }
    detail(line);
  }
  return {ok, "TWOSTEP energy exceeds 10|E0| before T = 5 for every tau; RE and CN drift <= 1e-6"};
}

// 9. Split-step Fourier checks.
Outcome spectral_checks() {
  bool ok = true;
  {
    const PeriodicGrid g(-kPi, kPi, 64);
    const int m = 5;
    const double a = 1.3, beta = -2.0, tau = 0.1;
    ComplexVector u(g.n);
    for (Index j = 0; j < g.n; ++j) u(j) = a * std::polar(1.0, m * g.x(j));
    const ComplexVector w = sp2_step(u, tau, beta, std::vector<double>(64, 0.0), g);
    const Complex phase = std::polar(1.0, -(m * m + beta * a * a) * tau);
    const double err = (w - phase * u).cwiseAbs().maxCoeff();
    detail(fmt("plane wave one-step error %.2e", err));
    ok = ok && err <= 1e-13;
  }
  const ProblemSpec& p = find_problem("two_soliton");
  const PeriodicGrid g(p.x_range.lo, p.x_range.hi, 2048);
  const std::vector<double> v(2048, 0.0);
  ComplexVector u0(g.n);
  for (Index j = 0; j < g.n; ++j) u0(j) = exact_two_soliton(g.x(j), 0.0);
  {
    // single soliton on the periodic extension of its interval
    const ProblemSpec& q = find_problem("single_soliton");
    const PeriodicGrid gs(q.x_range.lo, q.x_range.hi, 2048);
    ComplexVector s0(gs.n);
    for (Index j = 0; j < gs.n; ++j) s0(j) = exact_single_soliton(gs.x(j), 0.0);
    auto final = [&](int k) {
      return run_sp2(gs, s0, v, q.beta, q.kinetic, pow2(-k), std::llround(1.0 / pow2(-k)), 0).final_state;
    };
    const ComplexVector ref = final(14);
    std::vector<double> errs, taus;
    for (int k = 4; k <= 8; ++k) {
      errs.push_back(std::sqrt(gs.dx()) * (final(k) - ref).norm());
      taus.push_back(pow2(-k));
    }
    std::string line = "single soliton, T = 1, EOC (tau = 2^-4..2^-8 vs 2^-14):";
    for (const auto& e : eoc(errs, taus)) {
      line += e ? fmt(" %.3f", *e) : std::string(" n/a");
      ok = ok && e && *e >= 1.8 && *e <= 2.2;
    }
    detail(line);
  }
  {
    Sp2 s(g, v, p.beta, p.kinetic);
    ComplexVector u = u0;
    double worst = 0.0;
    double m = s.mass(u);
    for (int n = 0; n < 1024; ++n) {
      s.step(u, pow2(-8));
      const double mn = s.mass(u);
      worst = std::max(worst, std::abs(mn - m) / m);
      m = mn;
    }
    detail(fmt("max relative mass change per step over 1024 steps: %.2e", worst));
    ok = ok && worst <= 1e-12;
  }
  {
    std::vector<double> times;
    bool shape = true;
    for (int k = 8; k <= 12; ++k) {
      const double tau = pow2(-k);
      const Sp2Report r = run_sp2(g, u0, v, p.beta, p.kinetic, tau, std::llround(100.0 / tau), 0, 0.0, true);
      const double t = r.crossing_time ? *r.crossing_time : std::numeric_limits<double>::infinity();
      detail(fmt("tau = 2^-%-2d  E > 0 first at t = %.4f  (%.1f s)", k, t, r.seconds));
      if (!times.empty()) shape = shape && t > times.back() && t < 2.0 * times.back();
      times.push_back(t);
    }
    detail(fmt("crossing times increase and grow by less than 2x per halving: %s", shape ? "yes" : "no"));
    ok = ok && shape && std::isfinite(times.back());
  }
  return {ok, "plane wave exact, second order, mass per step <= 1e-12, sublinear growth of blow-up time"};
}

// 10. Ground states with analytic eigenvalues.
Outcome ground_state_oracle() {
  bool ok = true;
  {
    const FemSpace s(build_interval_mesh(-12.0, 12.0, 2400));
    const GroundStateResult r = ground_state(s, s.sample([](const Point& x) { return 0.5 * x.x * x.x; }), 0.0, 0.0, 0.5);
    const double rel = std::abs(r.eigenvalue - 0.5) / 0.5;
    detail(fmt("harmonic: lambda = %.8f, relative error %.2e, %d iterations", r.eigenvalue, rel, r.iterations));
    ok = ok && rel <= 0.01;
  }
  {
    const Index n = 100;
    const double h = 1.0 / static_cast<double>(n);
    const FemSpace s(build_interval_mesh(0.0, 1.0, n));
    const GroundStateResult r = ground_state(s, s.constant(0.0), 0.0, 0.0, 0.5);
    // lowest P1 eigenvalue of the Dirichlet box
    const double th = kPi * h;
    const double discrete = 0.5 * 6.0 / (h * h) * (1.0 - std::cos(th)) / (2.0 + std::cos(th));
    const double exact = kPi * kPi / 2.0;
    detail(fmt("box: lambda = %.8f, pi^2/2 = %.8f, P1 eigenvalue %.8f", r.eigenvalue, exact, discrete));
    ok = ok && std::abs(r.eigenvalue - discrete) <= 1e-6 * discrete &&
         std::abs(r.eigenvalue - exact) <= 1.01 * std::abs(discrete - exact) + 1e-6 * exact;
  }
  return {ok, "harmonic eigenvalue 0.5 within 1%, box mode pi^2/2 within the P1 discretization error"};
}

// 11. Cost of the nonlinear schemes relative to the linear ones.
Outcome cpu_ratio() {
  const ProblemSpec& p = find_problem("lattice1d");
  const Discretization d = discretize(p, 32.0 / 6400.0);
  detail(fmt("%lld unknowns, 1024 steps at tau = 2^-12", static_cast<long long>(d.space->num_nodes())));
  std::vector<double> secs;
  for (SchemeId id : kAllSchemes) {
    double best = std::numeric_limits<double>::infinity();
    Index newton = 0;
    for (int rep = 0; rep < 5; ++rep) {
      EvolutionOptions o;
      o.observer_stride = 0;
      const RunReport r = run_evolution(*d.ops, d.u0, id, pow2(-12), 1024, p.beta, o);
      best = std::min(best, r.failed ? std::numeric_limits<double>::infinity() : r.stepping_seconds);
      newton = r.stats.newton_iterations;
    }
    secs.push_back(best);
    detail(fmt("%-7s %.3f s%s", to_string(id).c_str(), best,
               is_nonlinear(id) ? fmt(" (%lld Newton iterations)", static_cast<long long>(newton)).c_str() : ""));
  }
  const double linear = std::max({secs[2], secs[3], secs[4]});
  const double ratio = std::min(secs[0], secs[1]) / linear;
  detail(fmt("min(IM, CN) / max(RE, LCN, TWOSTEP) = %.2f", ratio));
  return {ratio >= 4.0, "IM and CN each at least 4x slower than every linear scheme"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "conservation", conservation},
      {2, "linear coincidence", linear_coincidence},
      {3, "convergence order", convergence_order},
      {4, "two-soliton errors", two_soliton_errors},
      {5, "two-soliton energy", two_soliton_energy},
      {6, "soliton observables", soliton_observables},
      {7, "LCN ratio anomaly", lcn_ratio},
      {8, "stability contrast", stability_contrast},
      {9, "split-step Fourier", spectral_checks},
      {10, "ground-state oracle", ground_state_oracle},
      {11, "CPU ratio", cpu_ratio},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    std::printf("C%d %s\n", c.id, c.name);
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s C%d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str(), s);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
