#include "matrange/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "matrange/error.hpp"

namespace matrange {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

double rotation(std::uint64_t seed, int coord) {
  if (seed == 0) return 0.0;
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(coord + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

RMat sphere_directions(int dim, int K, std::uint64_t seed) {
  require(dim >= 1 && K >= 1, ErrorKind::precondition, "sphere grid needs dim >= 1, K >= 1");
  RMat out(K, dim);
  const double pi = std::numbers::pi;
  if (dim == 1) {
    for (int k = 0; k < K; ++k) out(k, 0) = (k % 2 == 0) ? 1.0 : -1.0;
    return out;
  }
  if (dim == 2) {
    const double shift = 2.0 * pi * rotation(seed, 0) / K;
    for (int k = 0; k < K; ++k) {
      const double a = 2.0 * pi * k / K + shift;
      out(k, 0) = std::cos(a);
      out(k, 1) = std::sin(a);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    const double shift = 2.0 * pi * rotation(seed, 0);
    for (int k = 0; k < K; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / K;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * k + shift;
      out(k, 0) = r * std::cos(a);
      out(k, 1) = r * std::sin(a);
      out(k, 2) = z;
    }
    return out;
  }
  const int pairs = (dim + 1) / 2;
  require(2 * pairs <= static_cast<int>(std::size(kPrimes)), ErrorKind::precondition,
          "sphere grid dimension too large");
  for (int k = 0; k < K; ++k) {
    RVec g(2 * pairs);
    for (int p = 0; p < pairs; ++p) {
      const auto idx = static_cast<std::uint64_t>(k + 1);
      double u1 = frac(radical_inverse(idx, kPrimes[2 * p]) + rotation(seed, 2 * p));
      const double u2 = frac(radical_inverse(idx, kPrimes[2 * p + 1]) + rotation(seed, 2 * p + 1));
      u1 = std::max(u1, 1e-300);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      g(2 * p) = rad * std::cos(2.0 * pi * u2);
      g(2 * p + 1) = rad * std::sin(2.0 * pi * u2);
    }
    RVec v = g.head(dim);
    const double nv = v.norm();
    if (nv < 1e-12) {
      v.setZero();
      v(0) = 1.0;
    } else {
      v /= nv;
    }
    out.row(k) = v.transpose();
  }
  return out;
}

RMat orthant_directions(int dim, int K) {
  require(dim >= 1 && K >= 1, ErrorKind::precondition, "orthant grid needs dim >= 1, K >= 1");
  RMat out(K, dim);
  if (dim == 1) {
    out.setOnes();
    return out;
  }
  if (dim == 2) {
    for (int k = 0; k < K; ++k) {
      const double a = (K == 1) ? std::numbers::pi / 4 : 0.5 * std::numbers::pi * k / (K - 1);
      out(k, 0) = std::cos(a);
      out(k, 1) = std::sin(a);
    }
    return out;
  }
  const RMat full = sphere_directions(dim, K);
  for (int k = 0; k < K; ++k) out.row(k) = full.row(k).cwiseAbs();
  return out;
}

std::vector<CMat> hermitian_basis(int n) {
  std::vector<CMat> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    CMat E = CMat::Zero(n, n);
    E(i, i) = 1.0;
    basis.push_back(E);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      CMat R = CMat::Zero(n, n), I = CMat::Zero(n, n);
      R(i, j) = R(j, i) = s;
      I(i, j) = cplx(0.0, -s);
      I(j, i) = cplx(0.0, s);
      basis.push_back(R);
      basis.push_back(I);
    }
  return basis;
}

std::vector<MatrixTuple> hermitian_directions(int d, int n, int K, std::uint64_t seed) {
  const auto basis = hermitian_basis(n);
  const int per = static_cast<int>(basis.size());
  const RMat dirs = sphere_directions(d * per, K, seed);
  std::vector<MatrixTuple> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    MatrixTuple B;
    B.selfadjoint = true;
    for (int i = 0; i < d; ++i) {
      CMat M = CMat::Zero(n, n);
      for (int b = 0; b < per; ++b) M += dirs(k, i * per + b) * basis[static_cast<std::size_t>(b)];
      B.mats.push_back(std::move(M));
    }
    out.push_back(std::move(B));
  }
  return out;
}

double circle_covering_radius(const RMat& dirs) {
  std::vector<double> ang;
  for (Eigen::Index k = 0; k < dirs.rows(); ++k) ang.push_back(std::atan2(dirs(k, 1), dirs(k, 0)));
  std::sort(ang.begin(), ang.end());
  double gap = 0.0;
  for (std::size_t k = 0; k + 1 < ang.size(); ++k) gap = std::max(gap, ang[k + 1] - ang[k]);
  gap = std::max(gap, ang.front() + 2.0 * std::numbers::pi - ang.back());
  return 2.0 * std::sin(gap / 4.0);
}

}  // namespace matrange
