#include <atomic>
#include <cstdlib>
#include <string>

#include "matrange/error.hpp"
#include "matrange/kernels.hpp"

namespace matrange::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const char* env = std::getenv("MATRANGE_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return Isa::scalar;
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool ok = avx2::compiled() && cpu_has_avx2();
  return ok;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) fail(ErrorKind::precondition, "requested ISA not available");
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
  return active_isa() == Isa::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

void cgemv(const std::complex<double>* a, std::size_t rows, std::size_t cols,
           const std::complex<double>* x, std::complex<double>* y) {
  if (active_isa() == Isa::avx2)
    avx2::cgemv(a, rows, cols, x, y);
  else
    scalar::cgemv(a, rows, cols, x, y);
}

double min_sq_dist(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
                   const double* q) {
  return active_isa() == Isa::avx2 ? avx2::min_sq_dist(soa, npts, dim, stride, q)
                                   : scalar::min_sq_dist(soa, npts, dim, stride, q);
}

double max_dot(const double* soa, std::size_t npts, std::size_t dim, std::size_t stride,
               const double* dir) {
  return active_isa() == Isa::avx2 ? avx2::max_dot(soa, npts, dim, stride, dir)
                                   : scalar::max_dot(soa, npts, dim, stride, dir);
}

}  // namespace matrange::kernels
