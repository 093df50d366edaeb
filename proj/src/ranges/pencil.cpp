#include <cmath>

#include "matrange/ensembles.hpp"
#include "matrange/error.hpp"
#include "matrange/free_norms.hpp"
#include "matrange/ranges.hpp"

namespace matrange {

bool LinearPencil::monic(double tol) const {
  return (a0 - CMat::Identity(a0.rows(), a0.cols())).cwiseAbs().maxCoeff() <= tol;
}

CMat evaluate(const LinearPencil& p, const MatrixTuple& X) {
  require(p.d() == X.d(), ErrorKind::dimension, "pencil and tuple have different d");
  const int k = X.n();
  CMat M = kron(p.a0, CMat::Identity(k, k));
  for (int i = 0; i < p.d(); ++i) M += kron(p.a[static_cast<std::size_t>(i)], X[i]);
  return M;
}

double pencil_value_norm(const LinearPencil& p, const MatrixTuple& X) {
  const CMat M = evaluate(p, X);
  if (is_hermitian(M, 1e-10)) {
    const auto s = hermitian_spectrum(hermitian_part(M));
    return std::max(std::abs(s.front()), std::abs(s.back()));
  }
  return op_norm(M);
}

namespace {

MatrixTuple project_row_ball(MatrixTuple X) {
  const double r = std::sqrt(std::max(0.0, lambda_max(sum_squares(X))));
  return r > 1.0 ? scaled(X, 1.0 / r) : X;
}

struct Ascent {
  double value;
  MatrixTuple X;
};

// Alternating eigenvector ascent: pick the extreme eigenvector v of p(X), move
// X along the gradient of |<p(X) v, v>| and project back to the row ball.
Ascent ascend(const LinearPencil& p, MatrixTuple X, int iterations) {
  const int n = p.size(), k = X.n();
  double best = pencil_value_norm(p, X);
  double step = 0.5;
  for (int it = 0; it < iterations && step > 1e-6; ++it) {
    const CMat M = hermitian_part(evaluate(p, X));
    const EigenPair top = top_eigenpair(M), bot = bottom_eigenpair(M);
    const bool use_top = std::abs(top.value) >= std::abs(bot.value);
    const CVec& v = use_top ? top.vector : bot.vector;
    const double sign = use_top ? (top.value >= 0 ? 1.0 : -1.0) : (bot.value >= 0 ? 1.0 : -1.0);
    // v[a*k + b] = V(a, b); <(a_i (x) X_i) v, v> = tr(X_i conj(V^* a_i V)).
    const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> V(v.data(), n, k);
    MatrixTuple G = X;
    for (int i = 0; i < p.d(); ++i) {
      const CMat W = V.adjoint() * p.a[static_cast<std::size_t>(i)] * V;
      G.mats[static_cast<std::size_t>(i)] = sign * hermitian_part(W.conjugate());
    }
    const double gn = hs_norm(G);
    if (gn == 0.0) break;
    const MatrixTuple Y = project_row_ball(add(X, scaled(G, step / gn)));
    const double val = pencil_value_norm(p, Y);
    if (val > best) {
      best = val;
      X = Y;
      step = std::min(1.0, step * 1.5);
    } else {
      step *= 0.5;
    }
  }
  return {best, X};
}

}  // namespace

PencilNorm pencil_norm(const LinearPencil& p, const PencilNormOptions& opt) {
  require(p.d() >= 1, ErrorKind::dimension, "pencil needs at least one variable");
  for (const auto& a : p.a)
    require(a.rows() == p.size() && a.cols() == p.size(), ErrorKind::dimension, "pencil coefficient size");
  PencilNorm out;

  const MatrixTuple coeffs{p.a, true};
  const double row = std::sqrt(std::max(0.0, lambda_max(sum_squares(coeffs))));
  double lin = row;
  if (row > opt.refine_above) lin = std::min(lin, 0.5 * lehner_semicircular(coeffs).certified_upper);
  out.upper = op_norm(p.a0) + lin;

  // Levels 1, 2 and the pencil size cover the extremal points found in practice.
  std::vector<int> levels = {1, 2};
  if (p.size() > 2) levels.push_back(p.size());
  RngStream rng(opt.seed, 0x9e11);
  out.lower = -1.0;
  for (int s = 0; s < opt.starts; ++s) {
    const int k = levels[static_cast<std::size_t>(s) % levels.size()];
    std::vector<CMat> mats;
    for (int i = 0; i < p.d(); ++i) {
      CMat M(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) M(a, b) = cplx(rng.normal(), rng.normal());
      mats.push_back(hermitian_part(M));
    }
    MatrixTuple X{mats, true};
    const double r = std::sqrt(lambda_max(sum_squares(X)));
    X = scaled(X, 1.0 / r);
    const auto res = ascend(p, X, opt.iterations);
    if (res.value > out.lower) {
      out.lower = res.value;
      out.argmax = res.X;
    }
  }
  return out;
}

}  // namespace matrange
