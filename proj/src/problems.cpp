#include "gpe/problems.hpp"

#include <cmath>
#include <numbers>

namespace gpe {

namespace {

constexpr double kPi = std::numbers::pi;

struct TwoSolitonParts {
  Complex num, dnum;
  double den, dden;
};

TwoSolitonParts two_soliton_parts(double x, double t) {
  const Complex p4 = std::polar(1.0, 4.0 * t);
  const Complex p16 = std::polar(1.0, 16.0 * t);
  const double em4 = std::exp(-4.0 * x), ep4 = std::exp(4.0 * x);
  const double em2 = std::exp(-2.0 * x), ep2 = std::exp(2.0 * x);
  const double em6 = std::exp(-6.0 * x), ep6 = std::exp(6.0 * x);
  TwoSolitonParts p;
  p.num = 8.0 * p4 * (9.0 * em4 + 16.0 * ep4) - 32.0 * p16 * (4.0 * em2 + 9.0 * ep2);
  p.dnum = 8.0 * p4 * (-36.0 * em4 + 64.0 * ep4) - 32.0 * p16 * (-8.0 * em2 + 18.0 * ep2);
  p.den = -128.0 * std::cos(12.0 * t) + 4.0 * em6 + 16.0 * ep6 + 81.0 * em2 + 64.0 * ep2;
  p.dden = -24.0 * em6 + 96.0 * ep6 - 162.0 * em2 + 128.0 * ep2;
  return p;
}

double frame(double s) {
  const double d = std::abs(s) - 4.5;
  return d >= 0.0 ? std::pow(d, 5) : 0.0;
}

}  // namespace

Complex exact_single_soliton(double x, double t) {
  return std::sqrt(2.0) * std::polar(1.0, 0.5 * x + 0.75 * t) / std::cosh(x - t);
}

Complex exact_single_soliton_dx(double x, double t) {
  return exact_single_soliton(x, t) * (Complex(0.0, 0.5) - std::tanh(x - t));
}

Complex exact_two_soliton(double x, double t) {
  const auto p = two_soliton_parts(x, t);
  return p.num / p.den;
}

Complex exact_two_soliton_dx(double x, double t) {
  const auto p = two_soliton_parts(x, t);
  return (p.dnum * p.den - p.num * p.dden) / (p.den * p.den);
}

double PotentialSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::invalid_argument("potential '" + name + "' needs parameter '" + key + "'");
  return it->second;
}

ScalarFunction PotentialSpec::function() const { return potential_catalog(name, params); }

ScalarFunction potential_catalog(const std::string& name, const std::map<std::string, double>& params) {
  const PotentialSpec spec{name, params};
  if (name == "zero") return [](const Point&) { return 0.0; };
  if (name == "quadratic") {
    const double ax = spec.param("ax");
    const double ay = params.count("ay") ? spec.param("ay") : 0.0;
    return [ax, ay](const Point& p) { return ax * p.x * p.x + ay * p.y * p.y; };
  }
  if (name == "lattice1d") {
    const double g = spec.param("gamma");
    return [g](const Point& p) {
      const double s = std::sin(p.x * kPi / 4.0);
      return (g * p.x) * (g * p.x) + 500.0 * s * s;
    };
  }
  if (name == "lattice2d") {
    const double gx = spec.param("gamma_x");
    const double gy = spec.param("gamma_y");
    return [gx, gy](const Point& p) {
      const double sx = std::sin(kPi * p.x / 2.0), sy = std::sin(kPi * p.y / 2.0);
      const double lattice = 787.0 * (sx * sx + sy * sy);
      const double trap = 0.5 * ((gx * p.x) * (gx * p.x) + (gy * p.y) * (gy * p.y));
      return lattice + trap + 1000.0 * (frame(p.x) + frame(p.y));
    };
  }
  if (name == "mott") {
    const double a = spec.param("harmonic");
    const double b = spec.param("lattice");
    return [a, b](const Point& p) {
      const double sx = std::sin(2.0 * kPi * p.x), sy = std::sin(2.0 * kPi * p.y);
      return a * (p.x * p.x + p.y * p.y) + b * (sx * sx + sy * sy);
    };
  }
  throw std::invalid_argument("unknown potential '" + name + "'");
}

Index ProblemSpec::cells_for(double h, const Interval& range) const {
  if (!(h > 0.0)) throw std::invalid_argument("mesh size must be positive");
  return std::max<Index>(1, static_cast<Index>(std::llround(range.length() / h)));
}

Mesh ProblemSpec::build_mesh(double h, bool desk_domain) const {
  Interval xr = x_range, yr = y_range;
  if (desk_domain && desk_range) xr = yr = *desk_range;
  if (dim == 1) return build_interval_mesh(xr.lo, xr.hi, cells_for(h, xr));
  return build_rect_mesh(xr, yr, cells_for(h, xr), cells_for(h, yr));
}

const std::vector<ProblemSpec>& problem_catalog() {
  static const std::vector<ProblemSpec> catalog = [] {
    std::vector<ProblemSpec> c;

    ProblemSpec single;
    single.name = "single_soliton";
    single.dim = 1;
    single.x_range = {-30.0, 70.0};
    single.beta = -1.0;
    single.kinetic = 1.0;
    single.final_time = 10.0;
    single.exact = "single_soliton";
    single.h_paper = 100.0 / 8192.0;
    single.h_desk = 100.0 / 4096.0;
    single.tau_paper = std::ldexp(1.0, -8);
    c.push_back(single);

    ProblemSpec two;
    two.name = "two_soliton";
    two.dim = 1;
    two.x_range = {-20.0, 20.0};
    two.beta = -2.0;
    two.kinetic = 1.0;
    two.final_time = 2.0;
    two.exact = "two_soliton";
    two.h_paper = 40.0 / 51200.0;
    two.h_desk = 40.0 / 12800.0;
    two.tau_paper = std::ldexp(1.0, -10);
    c.push_back(two);

    ProblemSpec lat;
    lat.name = "lattice1d";
    lat.dim = 1;
    lat.x_range = {-16.0, 16.0};
    lat.beta = 1000.0;
    lat.kinetic = 0.5;
    lat.potential = {"lattice1d", {{"gamma", 0.5}}};
    lat.initial = InitialKind::GroundState;
    lat.ground = GroundStateSpec{{"lattice1d", {{"gamma", 1.0}}}, 1000.0, 0.0, 0.01};
    lat.final_time = 5.0;
    lat.h_paper = 24.0 / 51200.0;
    lat.h_desk = 24.0 / 800.0;
    lat.tau_paper = std::ldexp(1.0, -12);
    c.push_back(lat);

    ProblemSpec lat2;
    lat2.name = "lattice2d";
    lat2.dim = 2;
    lat2.x_range = lat2.y_range = {-6.0, 6.0};
    lat2.beta = 2300.0;
    lat2.kinetic = 0.5;
    lat2.potential = {"lattice2d", {{"gamma_x", 4.0}, {"gamma_y", 8.0}}};
    lat2.initial = InitialKind::GroundState;
    lat2.ground = GroundStateSpec{{"lattice2d", {{"gamma_x", 1.0}, {"gamma_y", 1.0}}}, 2300.0, 0.0, 0.01};
    lat2.final_time = 1.0;
    lat2.h_paper = 0.06;
    lat2.h_desk = 0.06;
    lat2.tau_paper = std::ldexp(1.0, -8);
    c.push_back(lat2);

    ProblemSpec rot;
    rot.name = "rotating";
    rot.dim = 2;
    rot.x_range = rot.y_range = {-6.0, 6.0};
    rot.beta = 100.0;
    rot.kinetic = 0.5;
    rot.potential = {"quadratic", {{"ax", 0.45}, {"ay", 0.55}}};
    rot.initial = InitialKind::GroundState;
    rot.ground = GroundStateSpec{{"quadratic", {{"ax", 0.5}, {"ay", 0.5}}}, 100.0, 0.8, 0.01};
    rot.final_time = 10.0;
    rot.h_paper = 12.0 / 64.0;
    rot.h_desk = 12.0 / 64.0;
    rot.tau_paper = 10.0 / 256.0;
    c.push_back(rot);

    ProblemSpec mott;
    mott.name = "mott";
    mott.dim = 2;
    mott.x_range = mott.y_range = {-20.0, 20.0};
    mott.beta = 1000.0;
    mott.kinetic = 0.5;
    mott.potential = {"quadratic", {{"ax", 2.0}, {"ay", 2.0}}};
    mott.initial = InitialKind::GroundState;
    mott.ground = GroundStateSpec{{"mott", {{"harmonic", 2.0}, {"lattice", 2000.0}}}, 1000.0, 0.0, 0.01};
    mott.final_time = 0.515;
    mott.h_paper = 0.01;
    mott.h_desk = 0.05;
    mott.tau_paper = 0.515 / 2048.0;
    mott.desk_range = Interval{-10.0, 10.0};
    c.push_back(mott);
    return c;
  }();
  return catalog;
}

const ProblemSpec& find_problem(const std::string& name) {
  for (const auto& p : problem_catalog())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

ExactField exact_field(const ProblemSpec& problem, double t) {
  if (!problem.exact) throw std::invalid_argument("problem '" + problem.name + "' has no closed-form solution");
  ExactField f;
  if (*problem.exact == "single_soliton") {
    f.value = [t](const Point& p) { return exact_single_soliton(p.x, t); };
    f.gradient = [t](const Point& p) { return std::array<Complex, 2>{exact_single_soliton_dx(p.x, t), Complex(0.0)}; };
  } else if (*problem.exact == "two_soliton") {
    f.value = [t](const Point& p) { return exact_two_soliton(p.x, t); };
    f.gradient = [t](const Point& p) { return std::array<Complex, 2>{exact_two_soliton_dx(p.x, t), Complex(0.0)}; };
  } else {
    throw std::invalid_argument("unknown exact solution '" + *problem.exact + "'");
  }
  return f;
}

ComplexVector initial_state(const ProblemSpec& problem, const FemSpace& space, const GroundStateOptions& opts,
                            GroundStateResult* ground_report) {
  if (problem.initial == InitialKind::ClosedForm) {
    const ExactField f = exact_field(problem, 0.0);
    return interpolate_nodal(space.mesh(), f.value);
  }
  if (!problem.ground) throw std::invalid_argument("problem '" + problem.name + "' lacks a ground-state recipe");
  const GroundStateSpec& g = *problem.ground;
  GroundStateOptions o = opts;
  o.tau = g.gf_tau;
  GroundStateResult r =
      ground_state(space, space.sample(g.potential.function()), g.beta, g.omega, problem.kinetic, o);
  ComplexVector u = r.state;
  if (ground_report) *ground_report = std::move(r);
  return u;
}

int count_vortices(const Mesh& mesh, const ComplexVector& u, double relative_threshold) {
  if (mesh.dim() != 2) throw std::invalid_argument("count_vortices: requires a 2D mesh");
  const Index nx = mesh.cells_x(), ny = mesh.cells_y();
  double umax = 0.0;
  for (Index i = 0; i < u.size(); ++i) umax = std::max(umax, std::abs(u(i)));
  if (umax == 0.0) return 0;
  auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  auto wrap = [](double d) { return std::remainder(d, 2.0 * kPi); };
  int count = 0;
  for (Index j = 1; j + 1 < ny; ++j)
    for (Index i = 1; i + 1 < nx; ++i) {
      const Index c[4] = {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
      double smallest = umax;
      double winding = 0.0;
      for (int k = 0; k < 4; ++k) {
        smallest = std::min(smallest, std::abs(u(c[k])));
        winding += wrap(std::arg(u(c[(k + 1) % 4])) - std::arg(u(c[k])));
      }
      if (smallest < relative_threshold * umax && std::abs(std::lround(winding / (2.0 * kPi))) > 0) ++count;
    }
  return count;
}

}  // namespace gpe
