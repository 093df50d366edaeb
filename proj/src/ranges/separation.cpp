#include <cmath>

#include <Eigen/QR>

#include "matrange/ensembles.hpp"
#include "matrange/error.hpp"
#include "matrange/ranges.hpp"
#include "matrange/sphere.hpp"

namespace matrange {

namespace {

using sdp::LmiConstraint;
using sdp::SdpProblem;

CMat inverse_sqrt(const CMat& H) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(H));
  RVec ev = es.eigenvalues();
  for (int k = 0; k < ev.size(); ++k) ev(k) = 1.0 / std::sqrt(ev(k));
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

MatrixTuple fatten(const MatrixTuple& xi, double eps) {
  const int d = xi.d();
  MatrixTuple out;
  for (int i = 0; i < d; ++i)
    for (double sgn : {1.0, -1.0}) {
      MatrixTuple shifted = xi;
      shifted.mats[static_cast<std::size_t>(i)] += sgn * (eps / 2) * CMat::Identity(xi.n(), xi.n());
      out = out.mats.empty() ? shifted : direct_sum(out, shifted);
    }
  return out;
}

}  // namespace

EffrosWinkler effros_winkler_pencil(const MatrixTuple& xi, const MatrixTuple& X, double c, double tol) {
  require(xi.selfadjoint && X.selfadjoint, ErrorKind::precondition, "separation needs selfadjoint tuples");
  require(xi.d() == X.d(), ErrorKind::dimension, "separation: d mismatch");
  const int N = xi.n(), n = X.n(), d = xi.d();
  require(N * n <= kMaxMembershipSize, ErrorKind::precondition, "separation: N*n above cap");
  const auto herm = sdp::hermitian_coordinates(n);
  const int per = static_cast<int>(herm.size());
  const int nv = per * (d + 1);
  require(nv <= kMaxMembershipVars, ErrorKind::precondition, "separation: SDP variable cap exceeded");

  SdpProblem p;
  p.num_vars = nv;
  p.objective = RVec::Zero(nv);
  LmiConstraint pos, h0, trace;
  pos.constant = CMat::Zero(N * n, N * n);
  h0.constant = CMat::Zero(n, n);
  trace.constant = CMat::Ones(1, 1);
  for (auto* l : {&pos, &h0, &trace}) l->coefficients.resize(static_cast<std::size_t>(nv));
  std::vector<LmiConstraint> box(static_cast<std::size_t>(d));
  for (auto& b : box) {
    b.constant = CMat::Identity(2 * n, 2 * n);
    b.coefficients.resize(static_cast<std::size_t>(nv));
  }
  std::vector<CMat> mats(static_cast<std::size_t>(d + 1));
  mats[0] = CMat::Identity(N, N);
  for (int i = 0; i < d; ++i) mats[static_cast<std::size_t>(i + 1)] = c * CMat(xi[i].transpose());
  for (int g = 0; g <= d; ++g)
    for (int b = 0; b < per; ++b) {
      const int var = g * per + b;
      const auto& B = herm[static_cast<std::size_t>(b)];
      const CMat Bd = B.dense(n);
      pos.coefficients[static_cast<std::size_t>(var)] =
          sdp::SparseHermitian::from_dense(kron(mats[static_cast<std::size_t>(g)], Bd));
      if (g == 0) {
        p.objective(var) = Bd.trace().real();
        h0.coefficients[static_cast<std::size_t>(var)] = B;
        trace.coefficients[static_cast<std::size_t>(var)].add_diagonal(0, -Bd.trace().real());
      } else {
        p.objective(var) = (Bd * X[g - 1]).trace().real();
        auto& bc = box[static_cast<std::size_t>(g - 1)].coefficients[static_cast<std::size_t>(var)];
        sdp::place(bc, B, 0, -1.0);
        sdp::place(bc, B, n, 1.0);
      }
    }
  p.lmis = {pos, h0, trace};
  for (auto& b : box) p.lmis.push_back(b);

  sdp::SolverOptions so;
  so.tol = std::clamp(tol, 1e-10, 1e-6);
  const auto s = sdp::solve_sdp(p, so);
  EffrosWinkler out;
  if (s.status != sdp::Status::optimal) return out;
  out.value = s.objective;
  if (!(out.value < -std::max(10 * so.tol, 1e-9))) return out;

  const CMat H0 = sdp::assemble(herm, s.y, 0, n) + (std::abs(out.value) / (2.0 * n)) * CMat::Identity(n, n);
  const CMat G = inverse_sqrt(H0);
  out.pencil.a0 = CMat::Identity(n, n);
  for (int i = 0; i < d; ++i) {
    const CMat Hi = sdp::assemble(herm, s.y, (i + 1) * per, n);
    out.pencil.a.push_back(CMat(hermitian_part(G * Hi * G).conjugate()));
  }
  out.separated = lambda_min(hermitian_part(evaluate(out.pencil, X))) < 0.0;
  return out;
}

double separation_delta(double eps, double R, double r) {
  require(eps > 0 && R > 0 && r > 0, ErrorKind::precondition, "separation constants must be positive");
  return eps / (2 * R * (2 * R + 1) * (1 + 1 / r));
}

std::vector<MatrixTuple> sample_range_members(const MatrixTuple& xi, int n, int count, std::uint64_t seed) {
  const int N = xi.n();
  std::vector<MatrixTuple> out;
  RngStream rng(seed, 0x5a11);
  const int kmin = (n + N - 1) / N;
  for (int s = 0; s < count; ++s) {
    const int k = kmin + s % std::max(1, n - kmin + 1);
    MatrixTuple amp;
    for (const auto& M : xi.mats) amp.mats.push_back(kron(M, CMat::Identity(k, k)));
    amp.selfadjoint = xi.selfadjoint;
    CMat Gm(N * k, n);
    for (int a = 0; a < Gm.rows(); ++a)
      for (int b = 0; b < n; ++b) Gm(a, b) = cplx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<CMat> qr(Gm);
    const CMat V = qr.householderQ() * CMat::Identity(N * k, n);
    out.push_back(compress(amp, V));
  }
  return out;
}

SeparationResult separating_pencil(const MatrixTuple& xi, const MatrixTuple& A, double eps, double R, double r,
                                   const SeparationOptions& opt) {
  require(xi.selfadjoint && A.selfadjoint, ErrorKind::precondition, "separation needs selfadjoint tuples");
  require(xi.d() == A.d(), ErrorKind::dimension, "separation: d mismatch");
  require(eps > 0 && R > 0, ErrorKind::precondition, "separation: eps and R must be positive");
  require(row_norm(xi) <= R * (1 + 1e-9), ErrorKind::precondition, "separation: ||xi||_row exceeds R");

  MembershipOptions mo;
  mo.tol = std::max(opt.tol, 1e-9);
  const auto m = membership(xi, A, mo);
  require(m.verdict != Verdict::numerical_failure, ErrorKind::numerical, "separation: membership SDP failed");
  require(m.verdict == Verdict::outside, ErrorKind::precondition, "separation: A lies in W_n(xi)");
  require(m.distance_lower > eps, ErrorKind::precondition,
          "separation: distance to W_n(xi) not certified above eps");

  const int d = xi.d();
  bool fattened = opt.force_fattening || !(r > 0);
  if (!fattened) {
    // Necessary condition at level 1: the support function stays above r.
    const RMat dirs = sphere_directions(d, 64, opt.seed);
    for (int k = 0; k < dirs.rows() && !fattened; ++k)
      if (support_level1(xi, dirs.row(k).transpose()) < r * (1 - 1e-9)) fattened = true;
  }

  SeparationResult out;
  out.fattened = fattened;
  out.generator = xi;
  double e = eps, RR = R, rr = r;
  if (fattened) {
    MembershipOptions z;
    z.tol = 1e-8;
    const auto zero = membership(xi, zero_tuple(d, 1), z);
    require(zero.verdict == Verdict::inside, ErrorKind::precondition,
            "separation: fattening needs 0 in the level-1 range of xi");
    out.generator = fatten(xi, eps);
    e = eps / 2;
    RR = R + eps / 2;
    rr = eps / (2 * d);
  }
  RR = std::max(RR, 1.0);
  e = std::min(e, 0.99 * RR);
  out.eps = e;
  out.R = RR;
  out.r = rr;
  out.delta = separation_delta(e, RR, rr);

  const auto ew = effros_winkler_pencil(out.generator, A, 1 + e / RR, opt.tol);
  require(ew.separated, ErrorKind::numerical, "separation: no separating pencil found");
  out.monic = ew.pencil;

  const int n = A.n();
  const double shift = 2 * RR * (1 + 1 / rr);
  const double scale = (2 * RR + 1) * (1 + 1 / rr);
  out.pencil.a0 = (ew.pencil.a0 - shift * CMat::Identity(n, n)) / scale;
  for (const auto& ai : ew.pencil.a) out.pencil.a.push_back(ai / scale);

  out.value_at_A = pencil_value_norm(out.pencil, A);
  out.certified_margin = out.value_at_A - pencil_value_norm(out.pencil, out.generator);
  double worst = 0.0;
  for (const auto& X : sample_range_members(out.generator, n, opt.samples, opt.seed))
    worst = std::max(worst, pencil_value_norm(out.pencil, X));
  out.sampled_margin = out.value_at_A - worst;

  PencilNormOptions no = opt.norm;
  no.refine_above = std::min(no.refine_above, 1.0 - op_norm(out.pencil.a0));
  out.norm = pencil_norm(out.pencil, no);
  return out;
}

}  // namespace matrange
