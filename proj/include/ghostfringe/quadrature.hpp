#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace ghostfringe {

// sin(x)/x with the removable singularity handled.
inline double sinc(double x) {
  if (std::abs(x) < 1e-6) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n, nodes by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

// Average of f over [center - width/2, center + width/2] (top-hat mean).
template <typename F>
double aperture_average(F&& f, double center, double width, const QuadratureRule& rule) {
  if (width <= 0.0) return f(center);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(center + 0.5 * width * rule.nodes[i]);
  }
  return acc / 2.0;
}

}  // namespace ghostfringe
