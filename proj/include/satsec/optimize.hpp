#pragma once

#include <cmath>
#include <functional>

namespace satsec {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
template <class F>
ScalarOptimum golden_section_max(F&& f, double lo, double hi, double x_tol = 1e-10, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? ScalarOptimum{c, fc, evals} : ScalarOptimum{d, fd, evals};
}

}  // namespace satsec
