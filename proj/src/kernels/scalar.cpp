#include <algorithm>
#include <limits>

#include "matrange/kernels.hpp"

namespace matrange::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y) {
  std::fill(y, y + rows, std::complex<double>(0.0, 0.0));
  for (std::size_t j = 0; j < cols; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    const std::complex<double>* col = a + j * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      const double ar = col[i].real(), ai = col[i].imag();
      y[i] += std::complex<double>(ar * xr - ai * xi, ai * xr + ar * xi);
    }
  }
}

double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < npts; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = soa[k * stride + p] - q[k];
      acc += diff * diff;
    }
    best = std::min(best, acc);
  }
  return best;
}

double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < npts; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += soa[k * stride + p] * dir[k];
    best = std::max(best, acc);
  }
  return best;
}

}  // namespace matrange::kernels::scalar
