#include <algorithm>
#include <limits>

#include "matrange/error.hpp"
#include "matrange/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define MATRANGE_HAVE_AVX2 1
#endif

namespace matrange::kernels::avx2 {

#if defined(MATRANGE_HAVE_AVX2)

bool compiled() { return true; }

namespace {
double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
double hmin(__m256d v) {
  __m128d lo = _mm_min_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
double hmax(__m256d v) {
  __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}
}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y) {
  std::fill(y, y + rows, std::complex<double>(0.0, 0.0));
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t pairs = rows / 2;
  for (std::size_t j = 0; j < cols; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    const __m256d vr = _mm256_set1_pd(xr);
    const __m256d vi = _mm256_set1_pd(xi);
    const double* col = reinterpret_cast<const double*>(a + j * rows);
    for (std::size_t p = 0; p < pairs; ++p) {
      const __m256d av = _mm256_loadu_pd(col + 4 * p);
      const __m256d sw = _mm256_permute_pd(av, 0x5);
      // even lanes: ar*xr - ai*xi, odd lanes: ai*xr + ar*xi
      const __m256d prod = _mm256_fmaddsub_pd(av, vr, _mm256_mul_pd(sw, vi));
      _mm256_storeu_pd(yd + 4 * p, _mm256_add_pd(_mm256_loadu_pd(yd + 4 * p), prod));
    }
    if (rows & 1) {
      const std::size_t i = rows - 1;
      const double ar = col[2 * i], ai = col[2 * i + 1];
      yd[2 * i] += ar * xr - ai * xi;
      yd[2 * i + 1] += ai * xr + ar * xi;
    }
  }
}

double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q) {
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t p = 0;
  for (; p + 4 <= npts; p += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d diff =
          _mm256_sub_pd(_mm256_loadu_pd(soa + k * stride + p), _mm256_set1_pd(q[k]));
      acc = _mm256_fmadd_pd(diff, diff, acc);
    }
    best = _mm256_min_pd(best, acc);
  }
  double out = hmin(best);
  for (; p < npts; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = soa[k * stride + p] - q[k];
      acc += diff * diff;
    }
    out = std::min(out, acc);
  }
  return out;
}

double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir) {
  __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t p = 0;
  for (; p + 4 <= npts; p += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(soa + k * stride + p), _mm256_set1_pd(dir[k]), acc);
    best = _mm256_max_pd(best, acc);
  }
  double out = hmax(best);
  for (; p < npts; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc += soa[k * stride + p] * dir[k];
    out = std::max(out, acc);
  }
  return out;
}

#else

bool compiled() { return false; }

namespace {
[[noreturn]] void missing() { fail(ErrorKind::precondition, "AVX2 kernels not compiled in"); }
}  // namespace

double dot(const double*, const double*, std::size_t) { missing(); }
void cgemv(const std::complex<double>*, std::size_t, std::size_t, const std::complex<double>*,
           std::complex<double>*) {
  missing();
}
double min_sq_dist(const double*, std::size_t, std::size_t, std::size_t, const double*) {
  missing();
}
double max_dot(const double*, std::size_t, std::size_t, std::size_t, const double*) { missing(); }

#endif

}  // namespace matrange::kernels::avx2
