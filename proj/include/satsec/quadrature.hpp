#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "satsec/errors.hpp"

namespace satsec {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-Gauss difference estimate, summed over panels
};

struct QuadratureTolerance {
  double abs = 1e-10;
  double rel = 0.0;
};

/// Adaptive Gauss-Kronrod over [a, b], split at the given interior break points.
/// Throws NumericalError unless the summed error estimate is within
/// max(tol.abs, tol.rel * |value|), or within 64 ulps of the integrand mass.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, QuadratureTolerance tol,
                           std::initializer_list<double> breaks = {},
                           const char* what = "quadrature") {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  std::vector<double> nodes{a};
  // breaks hugging an endpoint only produce slivers the rule cannot resolve relatively
  const double margin = 1e-6 * (b - a);
  for (double x : breaks)
    if (x > a + margin && x < b - margin) nodes.push_back(x);
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());

  // boost refines panels against a tolerance relative to the panel estimate
  const double panel_tol = std::max(tol.rel > 0.0 ? std::min(tol.rel, 1e-6) : tol.abs, 1e-15);
  QuadratureResult out;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i + 1] <= nodes[i]) continue;
    double err = 0.0;
    double l1 = 0.0;
    out.value += Rule::integrate(f, nodes[i], nodes[i + 1], 20, panel_tol, &err, &l1);
    out.error += err;
    mass += l1;
  }
  const double accept = std::max({tol.abs, tol.rel * std::abs(out.value), 64 * 2.2e-16 * mass});
  if (!std::isfinite(out.value) || out.error > accept)
    throw NumericalError(std::string(what) + " did not converge", out.error);
  return out;
}

}  // namespace satsec
