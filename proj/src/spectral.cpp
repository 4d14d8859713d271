#include "gpe/spectral.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace gpe {

namespace {
// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

PeriodicGrid::PeriodicGrid(double a_, double b_, Index n_) : a(a_), b(b_), n(n_) {
  if (!(b > a)) throw std::invalid_argument("PeriodicGrid: empty interval");
  if (n < 4) throw std::invalid_argument("PeriodicGrid: need at least 4 points");
}

double PeriodicGrid::k(Index j) const {
  const Index m = j < n / 2 ? j : j - n;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / (b - a);
}

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) xs[static_cast<std::size_t>(j)] = x(j);
  return xs;
}

struct Sp2::Plans {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Sp2::Sp2(const PeriodicGrid& grid, std::vector<double> potential, double beta, double kinetic)
    : grid_(grid), v_(std::move(potential)), beta_(beta), kinetic_(kinetic), plans_(std::make_unique<Plans>()) {
  if (static_cast<Index>(v_.size()) != grid_.n) throw std::invalid_argument("Sp2: potential size mismatch");
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int n = static_cast<int>(grid_.n);
  plans_->buf = fftw_alloc_complex(static_cast<std::size_t>(n));
  plans_->fwd = fftw_plan_dft_1d(n, plans_->buf, plans_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_1d(n, plans_->buf, plans_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Sp2::~Sp2() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
  fftw_free(plans_->buf);
}

void Sp2::forward() { fftw_execute(plans_->fwd); }
void Sp2::backward() { fftw_execute(plans_->bwd); }

void Sp2::step(ComplexVector& u, double tau) {
  const Index n = grid_.n;
  if (u.size() != n) throw std::invalid_argument("Sp2::step: size mismatch");
  auto* buf = reinterpret_cast<Complex*>(plans_->buf);
  auto kinetic_half = [&] {
    for (Index j = 0; j < n; ++j) buf[j] = u(j);
    forward();
    for (Index j = 0; j < n; ++j) {
      const double k = grid_.k(j);
      buf[j] *= std::polar(1.0 / static_cast<double>(n), -kinetic_ * k * k * tau / 2.0);
    }
    backward();
    for (Index j = 0; j < n; ++j) u(j) = buf[j];
  };
  kinetic_half();
  for (Index j = 0; j < n; ++j)
    u(j) *= std::polar(1.0, -(v_[static_cast<std::size_t>(j)] + beta_ * std::norm(u(j))) * tau);
  kinetic_half();
}

double Sp2::mass(const ComplexVector& u) const { return grid_.dx() * u.squaredNorm(); }

double Sp2::energy(const ComplexVector& u) {
  const Index n = grid_.n;
  if (u.size() != n) throw std::invalid_argument("Sp2::energy: size mismatch");
  auto* buf = reinterpret_cast<Complex*>(plans_->buf);
  for (Index j = 0; j < n; ++j) buf[j] = u(j);
  forward();
  double kin = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double k = grid_.k(j);
    kin += k * k * std::norm(buf[j]);
  }
  const double dx = grid_.dx();
  kin *= dx / static_cast<double>(n);
  double pot = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double r = std::norm(u(j));
    pot += v_[static_cast<std::size_t>(j)] * r + 0.5 * beta_ * r * r;
  }
  return kinetic_ * kin + dx * pot;
}

ComplexVector sp2_step(const ComplexVector& u, double tau, double beta, const std::vector<double>& v,
                       const PeriodicGrid& grid, double kinetic) {
  Sp2 s(grid, v, beta, kinetic);
  ComplexVector out = u;
  s.step(out, tau);
  return out;
}

double sp2_energy(const ComplexVector& u, const PeriodicGrid& grid, double beta, const std::vector<double>& v,
                  double kinetic) {
  Sp2 s(grid, v, beta, kinetic);
  return s.energy(u);
}

double sp2_mass(const ComplexVector& u, const PeriodicGrid& grid) { return grid.dx() * u.squaredNorm(); }

Sp2Report run_sp2(const PeriodicGrid& grid, const ComplexVector& u0, const std::vector<double>& v, double beta,
                  double kinetic, double tau, Index n_steps, Index stride, std::optional<double> energy_threshold,
                  bool stop_at_threshold) {
  const auto start = std::chrono::steady_clock::now();
  Sp2 s(grid, v, beta, kinetic);
  Sp2Report rep;
  ComplexVector u = u0;
  double t = 0.0;
  const double e0 = s.energy(u);
  rep.samples.push_back({0.0, s.mass(u), e0});
  if (energy_threshold && e0 > *energy_threshold) rep.crossing_time = 0.0;
  for (Index n = 1; n <= n_steps && !(stop_at_threshold && rep.crossing_time); ++n) {
    s.step(u, tau);
    t = static_cast<double>(n) * tau;
    const bool sample = n == n_steps || (stride > 0 && n % stride == 0);
    if (!sample && !(energy_threshold && !rep.crossing_time)) continue;
    const double e = s.energy(u);
    if (!std::isfinite(e)) {
      rep.blow_up = true;
      rep.samples.push_back({t, s.mass(u), e});
      break;
    }
    if (energy_threshold && !rep.crossing_time && e > *energy_threshold) rep.crossing_time = t;
    if (sample) rep.samples.push_back({t, s.mass(u), e});
  }
  rep.final_state = std::move(u);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace gpe
