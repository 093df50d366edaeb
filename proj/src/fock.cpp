#include "matrange/fock.hpp"

#include <cmath>
#include <limits>

#include "matrange/error.hpp"
#include "matrange/lanczos.hpp"

namespace matrange {

FockBasis::FockBasis(int d, int m) : d_(d), m_(m) {
  require(d >= 1 && m >= 0, ErrorKind::precondition, "Fock basis needs d >= 1 and m >= 0");
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 4;
  offsets_.assign(1, 0);
  std::uint64_t p = 1;
  for (int k = 0; k <= m; ++k) {
    powers_.push_back(p);
    require(offsets_.back() <= cap - p, ErrorKind::precondition, "Fock dimension overflows 64 bits");
    offsets_.push_back(offsets_.back() + p);
    if (k < m) {
      require(p <= cap / static_cast<std::uint64_t>(d), ErrorKind::precondition,
              "Fock dimension overflows 64 bits");
      p *= static_cast<std::uint64_t>(d);
    }
  }
}

int FockBasis::length(std::uint64_t idx) const {
  require(idx < dim(), ErrorKind::dimension, "Fock index out of range");
  int k = 0;
  while (offsets_[static_cast<std::size_t>(k) + 1] <= idx) ++k;
  return k;
}

std::uint64_t FockBasis::index(const std::vector<int>& word) const {
  const int L = static_cast<int>(word.size());
  require(L <= m_, ErrorKind::dimension, "word longer than the truncation degree");
  std::uint64_t r = 0;
  for (int letter : word) {
    require(letter >= 0 && letter < d_, ErrorKind::dimension, "letter out of range");
    r = r * static_cast<std::uint64_t>(d_) + static_cast<std::uint64_t>(letter);
  }
  return offset(L) + r;
}

std::vector<int> FockBasis::word(std::uint64_t idx) const {
  const int L = length(idx);
  std::uint64_t r = idx - offset(L);
  std::vector<int> w(static_cast<std::size_t>(L));
  for (int k = L - 1; k >= 0; --k) {
    w[static_cast<std::size_t>(k)] = static_cast<int>(r % static_cast<std::uint64_t>(d_));
    r /= static_cast<std::uint64_t>(d_);
  }
  return w;
}

std::uint64_t FockBasis::prepend(int i, std::uint64_t idx) const {
  const int L = length(idx);
  return offset(L + 1) + static_cast<std::uint64_t>(i) * powers_[static_cast<std::size_t>(L)] +
         (idx - offset(L));
}

std::pair<int, std::uint64_t> FockBasis::split_first(std::uint64_t idx) const {
  const int L = length(idx);
  const std::uint64_t r = idx - offset(L);
  const std::uint64_t p = powers_[static_cast<std::size_t>(L - 1)];
  return {static_cast<int>(r / p), offset(L - 1) + r % p};
}

FockVector vacuum_vector() { return FockVector{{0, cplx(1.0, 0.0)}}; }

FockVector apply_creation(const FockBasis& B, int i, const FockVector& v) {
  require(i >= 0 && i < B.d(), ErrorKind::dimension, "shift index out of range");
  FockVector out;
  for (const auto& [idx, c] : v)
    if (B.length(idx) < B.degree()) out[B.prepend(i, idx)] += c;
  return out;
}

FockVector apply_annihilation(const FockBasis& B, int i, const FockVector& v) {
  require(i >= 0 && i < B.d(), ErrorKind::dimension, "shift index out of range");
  FockVector out;
  for (const auto& [idx, c] : v) {
    if (idx == 0) continue;
    const auto [first, rest] = B.split_first(idx);
    if (first == i) out[rest] += c;
  }
  return out;
}

FockVector apply_semicircular(const FockBasis& B, int i, const FockVector& v) {
  FockVector out = apply_creation(B, i, v);
  for (const auto& [idx, c] : apply_annihilation(B, i, v)) out[idx] += c;
  return out;
}

cplx fock_inner(const FockVector& a, const FockVector& b) {
  cplx s = 0.0;
  for (const auto& [idx, c] : a) {
    const auto it = b.find(idx);
    if (it != b.end()) s += c * std::conj(it->second);
  }
  return s;
}

double fock_norm(const FockVector& v) {
  double s = 0.0;
  for (const auto& kv : v) s += std::norm(kv.second);
  return std::sqrt(s);
}

CVec to_dense(const FockBasis& B, const FockVector& v) {
  require(B.dim() <= kMaxSparseFockDim, ErrorKind::precondition, "Fock dimension too large for a dense vector");
  CVec out = CVec::Zero(static_cast<Eigen::Index>(B.dim()));
  for (const auto& [idx, c] : v) out(static_cast<Eigen::Index>(idx)) = c;
  return out;
}

std::vector<TruncatedShift> creation_ops(int d, int m) {
  require(d >= 1 && m >= 1, ErrorKind::precondition, "creation_ops needs d >= 1 and m >= 1");
  const FockBasis B(d, m);
  require(B.dim() <= kMaxSparseFockDim, ErrorKind::precondition, "Fock dimension cap exceeded");
  const auto D = static_cast<Eigen::Index>(B.dim());
  const std::uint64_t below_top = B.offset(m);
  std::vector<TruncatedShift> out;
  for (int i = 0; i < d; ++i) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(below_top);
    for (std::uint64_t w = 0; w < below_top; ++w)
      t.emplace_back(static_cast<Eigen::Index>(B.prepend(i, w)), static_cast<Eigen::Index>(w), 1.0);
    TruncatedShift s;
    s.index = i;
    s.matrix.resize(D, D);
    s.matrix.setFromTriplets(t.begin(), t.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Eigen::SparseMatrix<double>> semicircular_sparse(int d, int m) {
  std::vector<Eigen::SparseMatrix<double>> out;
  for (auto& l : creation_ops(d, m)) {
    Eigen::SparseMatrix<double> t = l.matrix.transpose();
    out.push_back(l.matrix + t);
  }
  return out;
}

MatrixTuple semicircular_truncation(int d, int m) {
  const FockBasis B(d, m);
  require(B.dim() <= kMaxDenseFockDim, ErrorKind::precondition, "Fock dimension too large for a dense tuple");
  std::vector<CMat> mats;
  for (const auto& s : semicircular_sparse(d, m)) mats.push_back(CMat(RMat(s).cast<cplx>()));
  return MatrixTuple{std::move(mats), true};
}

cplx vacuum_state(const CMat& a) {
  require(a.rows() >= 1 && a.rows() == a.cols(), ErrorKind::dimension, "vacuum_state needs a square matrix");
  return a(0, 0);
}

double vacuum_moment(int d, const std::vector<int>& word) {
  const FockBasis B(d, std::max<int>(1, static_cast<int>(word.size())));
  FockVector v = vacuum_vector();
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_semicircular(B, *it, v);
  return fock_inner(v, vacuum_vector()).real();
}

FockVector approx_eigvec(int N, const FockBasis& B) {
  require(N >= 1, ErrorKind::precondition, "approx_eigvec needs N >= 1");
  require(B.degree() >= N + 1, ErrorKind::precondition, "truncation degree must be at least N+1");
  FockVector x;
  std::vector<int> w;
  const double c = 1.0 / std::sqrt(static_cast<double>(N));
  for (int k = 1; k <= N; ++k) {
    w.push_back(0);
    x[B.index(w)] = c;
  }
  return x;
}

double dfrak_violation(int d, int N, int m) {
  require(m >= N + 1, ErrorKind::precondition, "dfrak_violation needs m >= N+1");
  const FockBasis B(d, m);
  const FockVector x = approx_eigvec(N, B);
  std::vector<FockVector> v;
  for (int i = 0; i < d; ++i) v.push_back(apply_semicircular(B, i, x));
  // s_i is real, so ||sum_i (s_i x) (x) (s_i x)||^2 = sum_{ij} |<s_i x, s_j x>|^2.
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s += std::norm(fock_inner(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]));
  return std::sqrt(s);
}

double dfrak_closed_form(int d, int N) {
  const double a = 4.0 - 4.0 / N;
  return std::sqrt(a * a + (d - 1));
}

double square_sum_lower_bound(int d, int m) {
  const auto ops = creation_ops(d, m);
  const auto D = ops.front().matrix.rows();
  Eigen::SparseMatrix<cplx> T(D, D);
  T.setIdentity();
  T *= cplx(d + 1.0);
  for (const auto& l : ops) {
    Eigen::SparseMatrix<cplx> L = l.matrix.cast<cplx>();
    Eigen::SparseMatrix<cplx> Lt = L.adjoint();
    T += L + Lt;
  }
  T.coeffRef(0, 0) -= 1.0;
  LinearOperator op = [&T](const CVec& in, CVec& out) { out.noalias() = T * in; };
  // The top eigenvector is positive (Perron); a positive start avoids slow restarts.
  const CVec start = CVec::Ones(D).normalized();
  return lanczos_largest(op, D, &start).value;
}

double fock_pencil_norm(const MatrixTuple& X, int m) {
  require(X.selfadjoint, ErrorKind::precondition, "fock_pencil_norm needs a selfadjoint tuple");
  require(X.d() >= 1, ErrorKind::dimension, "empty tuple");
  const FockBasis B(X.d(), m);
  require(B.dim() * static_cast<std::uint64_t>(X.n()) <= 4 * kMaxSparseFockDim, ErrorKind::precondition,
          "Fock pencil model too large");
  std::vector<Eigen::SparseMatrix<cplx>> S;
  for (const auto& s : semicircular_sparse(X.d(), m)) S.push_back(s.cast<cplx>());
  const Eigen::Index D = static_cast<Eigen::Index>(B.dim()), n = X.n();
  // v[a*D + w] <-> V(w, a); (X_i (x) s_i) v <-> s_i V X_i^T.
  std::vector<CMat> Xt;
  for (int i = 0; i < X.d(); ++i) Xt.push_back(X[i].transpose());
  LinearOperator op = [&](const CVec& in, CVec& out) {
    out.setZero(in.size());
    Eigen::Map<const CMat> V(in.data(), D, n);
    Eigen::Map<CMat> O(out.data(), D, n);
    CMat SV(D, n);
    for (std::size_t i = 0; i < S.size(); ++i) {
      SV.noalias() = S[i] * V;
      O.noalias() += SV * Xt[i];
    }
  };
  // (-1)^{length} conjugates s_i^(m) to -s_i^(m), so the spectrum is symmetric
  // and the top eigenvalue is the norm. The Rayleigh quotient is a lower bound
  // whatever the residual, so a loose residual tolerance suffices.
  LanczosOptions opt;
  opt.tol = 1e-7;
  opt.krylov_dim = D * n > 100000 ? 32 : 64;
  return lanczos_largest(op, D * n, nullptr, opt).value;
}

}  // namespace matrange
