#include "gpe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gpe {

const QuadRule& gauss3_interval() {
  static const QuadRule rule = [] {
    const double d = 0.5 * std::sqrt(3.0 / 5.0);
    QuadRule r;
    r.dim = 1;
    r.xi = {0.5 - d, 0.5, 0.5 + d};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

const QuadRule& dunavant6_triangle() {
  static const QuadRule rule = [] {
    constexpr double a = 0.445948490915964886318329253883;
    constexpr double b = 0.091576213509770743459571463402;
    constexpr double wa = 0.223381589678011465944691612547 / 2.0;
    constexpr double wb = 0.109951743655321867388641720787 / 2.0;
    QuadRule r;
    r.dim = 2;
    r.xi = {a, 1.0 - 2.0 * a, a, b, 1.0 - 2.0 * b, b};
    r.eta = {a, a, 1.0 - 2.0 * a, b, b, 1.0 - 2.0 * b};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

const QuadRule& default_rule(int dim) {
  if (dim == 1) return gauss3_interval();
  if (dim == 2) return dunavant6_triangle();
  throw std::invalid_argument("default_rule: only dim 1 and 2 are supported");
}

}  // namespace gpe
