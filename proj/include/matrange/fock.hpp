#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "matrange/linalg.hpp"

namespace matrange {

// Words over {0..d-1} of length 0..m in graded lexicographic order: all words of
// length k precede those of length k+1, and within a length the first letter is
// most significant. Index 0 is the vacuum. Indices are computed arithmetically,
// so the basis itself is cheap even when the dimension is astronomically large.
class FockBasis {
 public:
  FockBasis(int d, int m);

  int d() const { return d_; }
  int degree() const { return m_; }
  std::uint64_t dim() const { return offsets_.back(); }
  std::uint64_t offset(int len) const { return offsets_[static_cast<std::size_t>(len)]; }
  int length(std::uint64_t idx) const;

  std::uint64_t index(const std::vector<int>& word) const;
  std::vector<int> word(std::uint64_t idx) const;
  // e_i (x) w; the caller checks length(w) < degree().
  std::uint64_t prepend(int i, std::uint64_t idx) const;
  // (first letter, index of the remaining word) for a nonempty word.
  std::pair<int, std::uint64_t> split_first(std::uint64_t idx) const;

 private:
  int d_, m_;
  std::vector<std::uint64_t> offsets_;  // size m+2
  std::vector<std::uint64_t> powers_;   // d^k, k = 0..m
};

// Sparse vector on a FockBasis. Ordered so sums are reproducible.
using FockVector = std::map<std::uint64_t, cplx>;

FockVector vacuum_vector();
// l_i and its adjoint, compressed to degree <= m (top-degree words map to 0).
FockVector apply_creation(const FockBasis& B, int i, const FockVector& v);
FockVector apply_annihilation(const FockBasis& B, int i, const FockVector& v);
FockVector apply_semicircular(const FockBasis& B, int i, const FockVector& v);
cplx fock_inner(const FockVector& a, const FockVector& b);  // <a, b>, linear in a
double fock_norm(const FockVector& v);
// Dense copy; requires dim() <= kMaxSparseFockDim.
CVec to_dense(const FockBasis& B, const FockVector& v);

inline constexpr std::uint64_t kMaxSparseFockDim = 100000;
inline constexpr std::uint64_t kMaxDenseFockDim = 4096;

struct TruncatedShift {
  int index = 0;  // zero-based variable index
  Eigen::SparseMatrix<double> matrix;
};

std::vector<TruncatedShift> creation_ops(int d, int m);
// s_i = l_i + l_i^* as sparse matrices.
std::vector<Eigen::SparseMatrix<double>> semicircular_sparse(int d, int m);
// Dense selfadjoint tuple s^(m); dimension capped at kMaxDenseFockDim.
MatrixTuple semicircular_truncation(int d, int m);

// (Omega, Omega) entry.
cplx vacuum_state(const CMat& a);
// <s_{w_1} ... s_{w_k} Omega, Omega>, exact (truncation degree k).
double vacuum_moment(int d, const std::vector<int>& word);

// x_N = N^{-1/2} sum_{k=1}^N e_1^{(x) k}; requires degree >= N+1.
FockVector approx_eigvec(int N, const FockBasis& B);

// || (sum_i conj(s_i) (x) s_i)(x_N (x) x_N) ||, a certified lower bound for
// || sum_i conj(s_i) (x) s_i ||. Computed from the Gram matrix of s_i x_N, which
// is exact once m >= N+1.
double dfrak_violation(int d, int N, int m);
double dfrak_closed_form(int d, int N);

// Top eigenvalue of the compression of (d+1)I - P_Omega + sum_i (l_i + l_i^*)
// to degree <= m; a lower bound for || sum_i s_i^2 ||.
double square_sum_lower_bound(int d, int m);

// || sum_i X_i (x) s_i^(m) || for a selfadjoint tuple (Lanczos on the sparse
// model). Nondecreasing in m and a lower bound for the semicircular norm.
double fock_pencil_norm(const MatrixTuple& X, int m);

}  // namespace matrange
