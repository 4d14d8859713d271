#include <cmath>
#include <numbers>
#include <random>

#include <stdexcept>

#include <Eigen/LU>

#include "doctest.h"
#include "gpe/fem.hpp"

using namespace gpe;

namespace {

ComplexVector random_state(const FemSpace& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector u(s.num_nodes());
  for (Index i = 0; i < u.size(); ++i) u(i) = Complex(g(rng), g(rng));
  for (Index i : s.mesh().boundary_nodes()) u(i) = 0.0;
  return u;
}

}  // namespace

TEST_SUITE("fem") {
  TEST_CASE("1D element matrices") {
    const FemSpace s(build_interval_mesh(0.0, 2.0, 4));
    const double h = 0.5;
    const Eigen::MatrixXd m = assemble_mass(s).to_dense();
    const Eigen::MatrixXd a = assemble_stiffness(s).to_dense();
    CHECK(m(0, 0) == doctest::Approx(h / 3.0));
    CHECK(m(1, 1) == doctest::Approx(2.0 * h / 3.0));
    CHECK(m(1, 2) == doctest::Approx(h / 6.0));
    CHECK(a(0, 0) == doctest::Approx(1.0 / h));
    CHECK(a(1, 1) == doctest::Approx(2.0 / h));
    CHECK(a(1, 2) == doctest::Approx(-1.0 / h));
    CHECK(m(0, 2) == 0.0);
  }

  TEST_CASE("mass sums to the domain measure and stiffness kills constants") {
    for (int dim : {1, 2}) {
      const FemSpace s = dim == 1 ? FemSpace(build_interval_mesh(-1.0, 3.0, 17))
                                  : FemSpace(build_rect_mesh({-1.0, 2.0}, {0.0, 2.0}, 7, 5));
      const double measure = dim == 1 ? 4.0 : 6.0;
      const Eigen::MatrixXd m = assemble_mass(s).to_dense();
      const Eigen::MatrixXd a = assemble_stiffness(s).to_dense();
      CHECK(m.sum() == doctest::Approx(measure).epsilon(1e-13));
      CHECK((a * Eigen::VectorXd::Ones(s.num_nodes())).norm() < 1e-12);
      CHECK((m - m.transpose()).norm() < 1e-15);
      CHECK((a - a.transpose()).norm() < 1e-14);
    }
  }

  TEST_CASE("stiffness form of a linear function") {
    // <A u, u> = int |grad u|^2 = |grad u|^2 * area for u = 2x - 3y
    const FemSpace s(build_rect_mesh({0.0, 1.0}, {0.0, 2.0}, 5, 4));
    const ComplexVector u = interpolate_nodal(s.mesh(), [](const Point& p) { return Complex(2.0 * p.x - 3.0 * p.y); }, false);
    CHECK(real_form(assemble_stiffness(s), u) == doctest::Approx(13.0 * 2.0).epsilon(1e-12));
  }

  TEST_CASE("weighted mass with a constant weight") {
    const FemSpace s(build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, 4, 4));
    const Eigen::MatrixXd m = assemble_mass(s).to_dense();
    const Eigen::MatrixXd w = assemble_weighted_mass(s, s.constant(2.5)).to_dense();
    CHECK((w - 2.5 * m).norm() < 1e-14);
    CHECK_THROWS_AS(assemble_weighted_mass(s, WeightField(3, 6)), std::invalid_argument);
  }

  TEST_CASE("weighted mass reproduces int V u v for quadratic V") {
    // x^2 weight: <M_V 1, 1> = int_0^1 x^2 = 1/3 in 1D
    const FemSpace s(build_interval_mesh(0.0, 1.0, 8));
    const RealMatrix mv = assemble_weighted_mass(s, s.sample([](const Point& p) { return p.x * p.x; }));
    const ComplexVector one = ComplexVector::Ones(s.num_nodes());
    CHECK(real_form(mv, one) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }

  TEST_CASE("sampled density is exact for P1 functions") {
    const FemSpace s(build_interval_mesh(0.0, 1.0, 3));
    const ComplexVector u = interpolate_nodal(s.mesh(), [](const Point& p) { return Complex(p.x, 1.0 - p.x); }, false);
    const QuadDensity rho = sample_density(s, u);
    for (Index e = 0; e < s.num_elements(); ++e)
      for (int q = 0; q < s.points_per_element(); ++q) {
        const double x = s.quad_point(e, q).x;
        CHECK(rho(e, q) == doctest::Approx(x * x + (1 - x) * (1 - x)).epsilon(1e-14));
      }
  }

  TEST_CASE("angular momentum is Hermitian with eigenfunction (x+iy) f(r)") {
    const FemSpace s(build_rect_mesh({-6.0, 6.0}, {-6.0, 6.0}, 60, 60));
    const ComplexMatrix l = assemble_angular_momentum(s);
    const Eigen::MatrixXcd d = l.to_dense();
    CHECK((d - d.adjoint()).norm() < 1e-13);
    const ComplexVector u = interpolate_nodal(s.mesh(), [](const Point& p) {
      return Complex(p.x, p.y) * std::exp(-(p.x * p.x + p.y * p.y) / 2.0);
    });
    const double quotient = form(l, u).real() / real_form(assemble_mass(s), u);
    CHECK(quotient == doctest::Approx(1.0).epsilon(2e-2));
    const ComplexVector radial = interpolate_nodal(s.mesh(), [](const Point& p) {
      return Complex(std::exp(-(p.x * p.x + p.y * p.y) / 2.0));
    });
    CHECK(std::abs(form(l, radial)) < 1e-10);
    CHECK_THROWS_AS(assemble_angular_momentum(FemSpace(build_interval_mesh(0, 1, 4))), std::invalid_argument);
  }

  TEST_CASE("interpolation zeroes boundary nodes on request") {
    const Mesh m = build_interval_mesh(0.0, 1.0, 4);
    const ComplexVector u = interpolate_nodal(m, [](const Point&) { return Complex(1.0); });
    CHECK(u(0) == 0.0);
    CHECK(u(4) == 0.0);
    CHECK(u(2) == 1.0);
  }

  TEST_CASE("nonlinear residual vanishes on the linear propagator when beta = 0") {
    const FemSpace s(build_interval_mesh(-5.0, 5.0, 40));
    const RealMatrix m = assemble_mass(s);
    const RealMatrix a = assemble_stiffness(s);
    const StepMatrices ops{&m, &a};
    const double tau = 0.1;
    const ComplexVector u = random_state(s, 1);
    Eigen::MatrixXcd lhs = Complex(0, 1.0 / tau) * m.to_dense().cast<Complex>() - 0.5 * a.to_dense().cast<Complex>();
    ComplexVector rhs = Complex(0, 1.0 / tau) * (m.to_dense().cast<Complex>() * u) + 0.5 * (a.to_dense().cast<Complex>() * u);
    for (Index i : s.mesh().boundary_nodes()) {
      lhs.row(i).setZero();
      lhs(i, i) = 1.0;
      rhs(i) = 0.0;
    }
    const ComplexVector w = lhs.partialPivLu().solve(rhs);
    for (auto form : {NonlinearForm::ImplicitMidpoint, NonlinearForm::CrankNicolson})
      CHECK(assemble_nonlinear_residual(s, ops, form, u, w, 0.0, tau).norm() < 1e-10 * rhs.norm());
  }

  TEST_CASE("Newton Jacobian matches finite differences") {
    for (int dim : {1, 2}) {
      const FemSpace s = dim == 1 ? FemSpace(build_interval_mesh(-3.0, 3.0, 12))
                                  : FemSpace(build_rect_mesh({-1.0, 1.0}, {-1.0, 1.0}, 4, 4));
      const RealMatrix m = assemble_mass(s);
      RealMatrix h = assemble_stiffness(s);
      const ComplexVector u = random_state(s, 2);
      const ComplexVector w = random_state(s, 3);
      const StepMatrices ops{&m, &h};
      for (auto form : {NonlinearForm::ImplicitMidpoint, NonlinearForm::CrankNicolson}) {
        const double beta = -1.7, tau = 0.05;
        Eigen::MatrixXd jac = assemble_newton_jacobian(s, ops, form, u, w, beta, tau).to_dense();
        const RealVector x0 = to_interleaved(w);
        const double eps = 1e-6;
        Eigen::MatrixXd fd(x0.size(), x0.size());
        for (Index k = 0; k < x0.size(); ++k) {
          RealVector xp = x0, xm = x0;
          xp(k) += eps;
          xm(k) -= eps;
          fd.col(k) = (to_interleaved(assemble_nonlinear_residual(s, ops, form, u, from_interleaved(xp), beta, tau)) -
                       to_interleaved(assemble_nonlinear_residual(s, ops, form, u, from_interleaved(xm), beta, tau))) /
                      (2 * eps);
        }
        // interior columns only; boundary rows are the identity in both
        const std::vector<bool>& bd = s.boundary();
        for (Index i = 0; i < s.num_nodes(); ++i)
          if (bd[static_cast<std::size_t>(i)])
            for (int r = 0; r < 2; ++r) {
              fd.col(2 * i + r).setZero();
              jac.col(2 * i + r).setZero();
              fd(2 * i + r, 2 * i + r) = jac(2 * i + r, 2 * i + r) = 1.0;
            }
        CHECK((jac - fd).norm() <= 1e-6 * fd.norm());
      }
    }
  }

  TEST_CASE("interleaving round trip") {
    const ComplexVector z = ComplexVector::Random(7);
    CHECK((from_interleaved(to_interleaved(z)) - z).norm() == 0.0);
    CHECK(to_interleaved(z)(3) == z(1).imag());
  }
}
