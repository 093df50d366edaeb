#pragma once

#include <functional>

namespace matrange {

struct Minimum1D {
  double argmin = 0.0;
  double value = 0.0;
};

// Minimizes a convex function on [lo, inf): the upper end starts at `hi` and is
// doubled until f increases, then golden-section search to `tol` in the argument
// and one Newton step from central differences (kept only if it improves f).
Minimum1D minimize_convex(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10);

}  // namespace matrange
