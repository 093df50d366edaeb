#include <cmath>

#include "matrange/error.hpp"
#include "matrange/ranges.hpp"

namespace matrange {

namespace {

using sdp::LmiConstraint;
using sdp::SdpProblem;
using sdp::SparseHermitian;

bool all_diagonal(const MatrixTuple& A) {
  for (const auto& M : A.mats) {
    CMat off = M;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

// Adds the n x n matrix M at block (br, bc) of an LMI coefficient, mirrored.
void add_block(SparseHermitian& S, int br, int bc, int n, const CMat& M) {
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const cplx v = M(p, q);
      if (v == cplx(0.0, 0.0)) continue;
      if (br == bc) {
        // Diagonal block of a Hermitian coefficient: M itself is Hermitian, so
        // add entries one by one without mirroring.
        S.entries.push_back({br * n + p, bc * n + q, v});
      } else {
        S.add(br * n + p, bc * n + q, v);
      }
    }
}

// Distance LMI [[t I_n, R], [R^*, t I_dn]] >= 0 with R = [R_1 .. R_d]. The
// caller supplies the constant R_i^0 and per-variable R_i contributions.
struct DistanceLmi {
  LmiConstraint lmi;
  int n, d;
  DistanceLmi(int n_, int d_, int num_vars) : n(n_), d(d_) {
    lmi.constant = CMat::Zero(n * (d + 1), n * (d + 1));
    lmi.coefficients.resize(static_cast<std::size_t>(num_vars));
    for (int r = 0; r < n * (d + 1); ++r) lmi.coefficients[0].add_diagonal(r, 1.0);
  }
  void constant_R(int i, const CMat& R) {
    lmi.constant.block(0, n * (i + 1), n, n) += R;
    lmi.constant.block(n * (i + 1), 0, n, n) += R.adjoint();
  }
  void var_R(int var, int i, const CMat& R) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (R(p, q) != cplx(0.0, 0.0)) lmi.coefficients[static_cast<std::size_t>(var)].add(p, n * (i + 1) + q, R(p, q));
  }
};

struct ChoiVar {
  int j, k;  // block (j, k); j == k for diagonal coordinates
  CMat M;    // value of C_jk for a unit step (C_kj = M^*)
};

MembershipResult finish(const SdpProblem& p, const sdp::SdpSolution& s, const MatrixTuple& X,
                        const std::function<CMat(const RVec&)>& choi_of, const MatrixTuple& A,
                        const MembershipOptions& opt) {
  (void)p;
  MembershipResult out;
  if (s.status != sdp::Status::optimal) {
    out.verdict = Verdict::numerical_failure;
    out.message = std::string("solver: ") + sdp::to_string(s.status) + " " + s.message;
    return out;
  }
  out.distance = std::max(0.0, s.objective);
  out.distance_lower = std::max(0.0, s.dual_objective);
  out.choi = choi_of(s.y);
  out.image = choi_apply(out.choi, A.n(), A);
  const int n = X.n();
  const double unital = (choi_apply(out.choi, A.n(), CMat::Identity(A.n(), A.n())) - CMat::Identity(n, n))
                            .cwiseAbs()
                            .maxCoeff();
  const double neg = std::max(0.0, -lambda_min(hermitian_part(out.choi)));
  const double dist = tuple_distance(out.image, X);
  out.witness_residual = std::max({unital, neg, dist});
  const double scale = 1.0 + row_norm(X);
  out.verdict = (out.distance <= opt.tol * scale && out.witness_residual <= 10 * opt.tol * scale)
                    ? Verdict::inside
                    : Verdict::outside;
  return out;
}

MembershipResult membership_choi(const MatrixTuple& A, const MatrixTuple& X, const MembershipOptions& opt,
                                 double solver_tol) {
  const int N = A.n(), n = X.n(), d = A.d();
  const auto herm = sdp::hermitian_coordinates(n);
  std::vector<ChoiVar> vars;
  for (int j = 0; j + 1 < N; ++j)
    for (const auto& b : herm) vars.push_back({j, j, b.dense(n)});
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          CMat E = CMat::Zero(n, n);
          E(p, q) = 1.0;
          vars.push_back({j, k, E});
          vars.push_back({j, k, cplx(0.0, 1.0) * E});
        }
  const int nv = 1 + static_cast<int>(vars.size());
  require(nv <= kMaxMembershipVars, ErrorKind::precondition, "membership: SDP variable cap exceeded");

  SdpProblem p;
  p.num_vars = nv;
  p.objective = RVec::Zero(nv);
  p.objective(0) = 1.0;

  LmiConstraint choi;
  choi.constant = CMat::Zero(N * n, N * n);
  choi.constant.block((N - 1) * n, (N - 1) * n, n, n) = CMat::Identity(n, n);
  choi.coefficients.resize(static_cast<std::size_t>(nv));
  DistanceLmi dist(n, d, nv);
  const int last = N - 1;
  for (int i = 0; i < d; ++i) dist.constant_R(i, A[i](last, last) * CMat::Identity(n, n) - X[i]);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto& cv = vars[v];
    const int var = static_cast<int>(v) + 1;
    auto& coef = choi.coefficients[static_cast<std::size_t>(var)];
    if (cv.j == cv.k) {
      add_block(coef, cv.j, cv.j, n, cv.M);
      add_block(coef, last, last, n, -cv.M);
      for (int i = 0; i < d; ++i) dist.var_R(var, i, (A[i](cv.j, cv.j) - A[i](last, last)) * cv.M);
    } else {
      add_block(coef, cv.j, cv.k, n, cv.M);
      for (int i = 0; i < d; ++i)
        dist.var_R(var, i, A[i](cv.j, cv.k) * cv.M + A[i](cv.k, cv.j) * CMat(cv.M.adjoint()));
    }
  }
  p.lmis = {choi, dist.lmi};
  sdp::SolverOptions so;
  so.tol = solver_tol;
  const auto s = sdp::solve_sdp(p, so);
  auto choi_of = [&](const RVec& y) {
    CMat C = sdp::lmi_value(choi, y);
    return hermitian_part(C);
  };
  return finish(p, s, X, choi_of, A, opt);
}

MembershipResult membership_povm(const MatrixTuple& A, const MatrixTuple& X, const MembershipOptions& opt,
                                 double solver_tol) {
  const int N = A.n(), n = X.n(), d = A.d();
  // Distinct joint eigenvalues and the diagonal positions carrying them.
  std::vector<RVec> atoms;
  std::vector<int> atom_of(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    RVec x(d);
    for (int i = 0; i < d; ++i) x(i) = A[i](j, j).real();
    int found = -1;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if ((atoms[a] - x).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())) found = static_cast<int>(a);
    if (found < 0) {
      found = static_cast<int>(atoms.size());
      atoms.push_back(x);
    }
    atom_of[static_cast<std::size_t>(j)] = found;
  }
  const int K = static_cast<int>(atoms.size());
  const auto herm = sdp::hermitian_coordinates(n);
  const int per = static_cast<int>(herm.size());
  const int nv = 1 + per * (K - 1);
  require(nv <= kMaxMembershipVars, ErrorKind::precondition, "membership: SDP variable cap exceeded");

  SdpProblem p;
  p.num_vars = nv;
  p.objective = RVec::Zero(nv);
  p.objective(0) = 1.0;
  std::vector<LmiConstraint> blocks(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    blocks[static_cast<std::size_t>(k)].constant = (k == K - 1) ? CMat(CMat::Identity(n, n)) : CMat(CMat::Zero(n, n));
    blocks[static_cast<std::size_t>(k)].coefficients.resize(static_cast<std::size_t>(nv));
  }
  DistanceLmi dist(n, d, nv);
  const RVec& xl = atoms.back();
  for (int i = 0; i < d; ++i) dist.constant_R(i, xl(i) * CMat::Identity(n, n) - X[i]);
  for (int k = 0; k + 1 < K; ++k)
    for (int b = 0; b < per; ++b) {
      const int var = 1 + k * per + b;
      const auto& B = herm[static_cast<std::size_t>(b)];
      blocks[static_cast<std::size_t>(k)].coefficients[static_cast<std::size_t>(var)] = B;
      sdp::place(blocks.back().coefficients[static_cast<std::size_t>(var)], B, 0, -1.0);
      const CMat Bd = B.dense(n);
      for (int i = 0; i < d; ++i) dist.var_R(var, i, (atoms[static_cast<std::size_t>(k)](i) - xl(i)) * Bd);
    }
  p.lmis = blocks;
  p.lmis.push_back(dist.lmi);
  sdp::SolverOptions so;
  so.tol = solver_tol;
  const auto s = sdp::solve_sdp(p, so);

  std::vector<int> mult(static_cast<std::size_t>(K), 0);
  for (int a : atom_of) ++mult[static_cast<std::size_t>(a)];
  auto choi_of = [&](const RVec& y) {
    CMat C = CMat::Zero(N * n, N * n);
    for (int j = 0; j < N; ++j) {
      const int a = atom_of[static_cast<std::size_t>(j)];
      const CMat P = sdp::lmi_value(blocks[static_cast<std::size_t>(a)], y);
      C.block(j * n, j * n, n, n) = hermitian_part(P) / static_cast<double>(mult[static_cast<std::size_t>(a)]);
    }
    return C;
  };
  return finish(p, s, X, choi_of, A, opt);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::inside: return "inside";
    case Verdict::outside: return "outside";
    case Verdict::numerical_failure: return "numerical-failure";
  }
  return "?";
}

MembershipResult membership(const MatrixTuple& A, const MatrixTuple& X, const MembershipOptions& opt) {
  require(A.d() == X.d(), ErrorKind::dimension, "membership: d mismatch");
  require(A.d() >= 1 && A.n() >= 1 && X.n() >= 1, ErrorKind::dimension, "empty tuple");
  require(A.n() * X.n() <= kMaxMembershipSize, ErrorKind::precondition, "membership: N*n above cap");
  const bool povm = opt.use_povm_when_diagonal && all_diagonal(A);
  auto run = [&](double st) { return povm ? membership_povm(A, X, opt, st) : membership_choi(A, X, opt, st); };
  const double st = std::clamp(0.1 * opt.tol, 1e-10, 1e-6);
  MembershipResult r = run(st);
  // Degenerate Choi problems can stall just short of a tight solver tolerance.
  if (r.verdict == Verdict::numerical_failure && st < 1e-6) {
    const std::string first = r.message;
    r = run(std::min(10 * st, 1e-6));
    r.message = (r.verdict == Verdict::numerical_failure ? first + "; retry: " + r.message
                                                         : "solver tolerance relaxed after: " + first);
  }
  if (r.verdict == Verdict::outside && opt.build_pencil && A.selfadjoint && X.selfadjoint) {
    const auto ew = effros_winkler_pencil(A, X, 1.0, opt.tol);
    if (ew.separated) r.pencil = ew.pencil;
  }
  return r;
}

}  // namespace matrange
