#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "gpe/mesh.hpp"

using namespace gpe;

TEST_SUITE("mesh") {
  TEST_CASE("interval mesh counts and boundary") {
    const Mesh m = build_interval_mesh(-30.0, 70.0, 4096);
    CHECK(m.dim() == 1);
    CHECK(m.num_nodes() == 4097);
    CHECK(m.num_elements() == 4096);
    CHECK(m.boundary_nodes() == std::vector<Index>{0, 4096});
    CHECK(m.h() == doctest::Approx(100.0 / 4096).epsilon(1e-14));
    CHECK(m.node(0).x == -30.0);
    CHECK(m.node(4096).x == 70.0);
    double total = 0.0;
    for (Index e = 0; e < m.num_elements(); ++e) total += m.element_measure(e);
    CHECK(total == doctest::Approx(100.0).epsilon(1e-13));
  }

  TEST_CASE("single element interval") {
    const Mesh m = build_interval_mesh(0.0, 1.0, 1);
    CHECK(m.num_nodes() == 2);
    CHECK(m.boundary_nodes().size() == 2);
  }

  TEST_CASE("rectangle mesh counts, orientation and boundary") {
    const Mesh m = build_rect_mesh({-6.0, 6.0}, {-6.0, 6.0}, 200, 200);
    CHECK(m.num_nodes() == 201 * 201);
    CHECK(m.num_elements() == 2 * 200 * 200);
    CHECK(m.boundary_nodes().size() == 4 * 200);
    CHECK(m.h() == doctest::Approx(std::sqrt(2.0) * 0.06).epsilon(1e-12));
    double area = 0.0;
    for (Index e = 0; e < m.num_elements(); ++e) {
      const auto v = m.element(e);
      const Point &a = m.node(v[0]), &b = m.node(v[1]), &c = m.node(v[2]);
      const double signed_area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
      CHECK(signed_area > 0.0);
      area += m.element_measure(e);
    }
    CHECK(area == doctest::Approx(144.0).epsilon(1e-10));
  }

  TEST_CASE("lexicographic ordering with x fastest") {
    const Mesh m = build_rect_mesh({0.0, 2.0}, {0.0, 1.0}, 2, 1);
    CHECK(m.node(1).x == doctest::Approx(1.0));
    CHECK(m.node(1).y == doctest::Approx(0.0));
    CHECK(m.node(3).x == doctest::Approx(0.0));
    CHECK(m.node(3).y == doctest::Approx(1.0));
    // interior nodes: none, every node of a 2x1 grid touches the boundary
    CHECK(m.boundary_nodes().size() == 6);
  }

  TEST_CASE("boundary mask agrees with boundary list") {
    const Mesh m = build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, 4, 3);
    const auto mask = boundary_mask(m);
    Index count = 0;
    for (Index i = 0; i < m.num_nodes(); ++i) {
      const Point& p = m.node(i);
      const bool edge = p.x == 0.0 || p.y == 0.0 || std::abs(p.x - 1.0) < 1e-14 || std::abs(p.y - 1.0) < 1e-14;
      CHECK(mask[static_cast<std::size_t>(i)] == edge);
      count += edge;
    }
    CHECK(count == static_cast<Index>(m.boundary_nodes().size()));
  }

  TEST_CASE("fingerprint is deterministic and resolution sensitive") {
    CHECK(build_interval_mesh(0, 1, 10).fingerprint() == build_interval_mesh(0, 1, 10).fingerprint());
    CHECK(build_interval_mesh(0, 1, 10).fingerprint() != build_interval_mesh(0, 1, 11).fingerprint());
    CHECK(build_rect_mesh({0, 1}, {0, 1}, 3, 3).fingerprint() != build_rect_mesh({0, 1}, {0, 2}, 3, 3).fingerprint());
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(build_interval_mesh(1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_interval_mesh(0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_rect_mesh({0, 1}, {1, 1}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_rect_mesh({0, 1}, {0, 1}, 0, 2), std::invalid_argument);
  }
}
