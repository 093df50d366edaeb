#pragma once

// Hot inner loops with a portable scalar reference and an AVX2/FMA variant.
// The variant is chosen once at startup from CPUID; MATRANGE_SIMD=scalar forces
// the reference path. Results agree up to floating-point reassociation.

#include <complex>
#include <cstddef>

namespace matrange::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
bool isa_available(Isa isa);
// Overrides the dispatcher (used by the equivalence tests). Throws if unavailable.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

double dot(const double* a, const double* b, std::size_t n);

// y = A x with A column-major, rows x cols.
void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y);

// Point clouds in structure-of-arrays layout: coordinate k of point p lives at
// soa[k * stride + p].
double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q);
double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y);
double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q);
double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir);
}  // namespace scalar

namespace avx2 {
bool compiled();
double dot(const double* a, const double* b, std::size_t n);
void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y);
double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q);
double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir);
}  // namespace avx2

}  // namespace matrange::kernels
