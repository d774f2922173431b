#pragma once

#include <functional>

namespace sod {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

// Bounded derivative-free scalar minimization (Brent: golden-section steps
// with parabolic interpolation where it helps). x_tol is absolute.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              double x_tol = 1e-8, int max_iter = 200);

// Composite Simpson quadrature with `intervals` slices (rounded up to even).
double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         int intervals = 128);

}  // namespace sod
