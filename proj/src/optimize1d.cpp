#include "matrange/optimize1d.hpp"

#include <cmath>

#include "matrange/error.hpp"

namespace matrange {

Minimum1D minimize_convex(const std::function<double(double)>& f, double lo, double hi, double tol) {
  require(hi > lo, ErrorKind::precondition, "minimize_convex needs hi > lo");
  // Grow the bracket until f turns upward.
  double mid = lo + 0.5 * (hi - lo);
  for (int k = 0; k < 200 && f(hi) < f(mid); ++k) {
    mid = hi;
    hi = lo + 2.0 * (hi - lo);
  }
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  Minimum1D best{fc <= fd ? c : d, std::min(fc, fd)};
  const double flo = f(lo);
  if (flo <= best.value) best = {lo, flo};

  const double t = best.argmin;
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  if (t - h > lo) {
    const double fp = f(t + h), fm = f(t - h);
    const double d1 = (fp - fm) / (2 * h), d2 = (fp - 2 * best.value + fm) / (h * h);
    if (d2 > 0) {
      const double tn = t - d1 / d2;
      if (tn > lo) {
        const double fn = f(tn);
        if (fn < best.value) best = {tn, fn};
      }
    }
  }
  return best;
}

}  // namespace matrange
