#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gpe/sparse.hpp"

namespace gpe {

/// Uniform periodic grid on [a, b) with N points.
struct PeriodicGrid {
  double a = 0.0;
  double b = 1.0;
  Index n = 0;

  PeriodicGrid(double a, double b, Index n);

  double dx() const { return (b - a) / static_cast<double>(n); }
  double x(Index j) const { return a + static_cast<double>(j) * dx(); }
  /// Discrete wavenumber of FFT index j.
  double k(Index j) const;
  std::vector<double> points() const;
};

/// Strang splitting for i u_t = -c u_xx + V u + beta |u|^2 u with periodic
/// boundary conditions. Owns its transform plans and work buffers, so one
/// instance must not be stepped from two threads at once.
class Sp2 {
 public:
  Sp2(const PeriodicGrid& grid, std::vector<double> potential, double beta, double kinetic = 1.0);
  ~Sp2();
  Sp2(const Sp2&) = delete;
  Sp2& operator=(const Sp2&) = delete;

  void step(ComplexVector& u, double tau);
  double energy(const ComplexVector& u);
  double mass(const ComplexVector& u) const;

  const PeriodicGrid& grid() const { return grid_; }

 private:
  void forward();
  void backward();

  struct Plans;
  PeriodicGrid grid_;
  std::vector<double> v_;
  double beta_;
  double kinetic_;
  std::unique_ptr<Plans> plans_;
};

ComplexVector sp2_step(const ComplexVector& u, double tau, double beta, const std::vector<double>& v,
                       const PeriodicGrid& grid, double kinetic = 1.0);
double sp2_energy(const ComplexVector& u, const PeriodicGrid& grid, double beta, const std::vector<double>& v,
                  double kinetic = 1.0);
double sp2_mass(const ComplexVector& u, const PeriodicGrid& grid);

struct Sp2Sample {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
};

struct Sp2Report {
  std::vector<Sp2Sample> samples;
  ComplexVector final_state;
  std::optional<double> crossing_time;  // first t with E > threshold
  bool blow_up = false;
  double seconds = 0.0;
};

Sp2Report run_sp2(const PeriodicGrid& grid, const ComplexVector& u0, const std::vector<double>& v, double beta,
                  double kinetic, double tau, Index n_steps, Index stride = 1,
                  std::optional<double> energy_threshold = std::nullopt, bool stop_at_threshold = false);

}  // namespace gpe
