#include "matrange/limits.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "matrange/error.hpp"
#include "matrange/free_norms.hpp"
#include "matrange/sphere.hpp"

namespace matrange {

namespace {

// Fixed t in (0, 1): maximize a.x subject to sum sqrt(t^2 + x_i^2) <= 1 + (d-1) t.
// Stationarity gives x_i = t a_i / sqrt(lam^2 - a_i^2) with lam > max a_i fixed by
// the constraint; u = sqrt(lam^2 - amax^2) is found by a bracketed root search.
RVec inner_maximizer(const RVec& a, double t) {
  const int d = static_cast<int>(a.size());
  const double amax = a.maxCoeff();
  const double c = 1.0 + (d - 1) * t;
  auto lam_of = [&](double u) { return std::sqrt(amax * amax + u * u); };
  auto phi = [&](double u) {
    const double lam = lam_of(u);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double r = (a(i) == amax) ? u : std::sqrt((lam - a(i)) * (lam + a(i)));
      s += lam / r;
    }
    return t * s - c;
  };
  double lo = amax, hi = amax;
  while (phi(lo) <= 0 && lo > 1e-300) lo *= 0.5;
  while (phi(hi) >= 0 && hi < 1e300) hi *= 2;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(phi, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double u = 0.5 * (r.first + r.second);
  const double lam = lam_of(u);
  RVec x(d);
  for (int i = 0; i < d; ++i) {
    const double r2 = (a(i) == amax) ? u : std::sqrt((lam - a(i)) * (lam + a(i)));
    x(i) = t * a(i) / r2;
  }
  return x;
}

}  // namespace

double wigner_limit_support(int d, const RVec& theta) {
  require(theta.size() == d, ErrorKind::dimension, "direction has wrong dimension");
  require(std::abs(theta.norm() - 1.0) <= 1e-9, ErrorKind::precondition, "direction must be a unit vector");
  return 2.0;
}

bool haar_E_membership(const RVec& x, double tol) {
  require(x.size() >= 1, ErrorKind::dimension, "empty point");
  return lehner_scalar_haar(x.cwiseAbs()) <= 1.0 + tol;
}

double haar_E_radius(const RVec& dir) {
  const double f = lehner_scalar_haar(dir.cwiseAbs());
  require(f > 0, ErrorKind::precondition, "zero direction");
  return 1.0 / f;
}

QSupport haar_Q_support(const CVec& w) {
  const int d = static_cast<int>(w.size());
  require(d >= 1, ErrorKind::dimension, "empty direction");
  const RVec a = w.cwiseAbs();
  QSupport out;
  out.maximizer = RVec::Zero(d);
  const double amax = a.maxCoeff();
  if (amax == 0.0) return out;
  int imax = 0;
  a.maxCoeff(&imax);
  if (d == 1) {
    out.value = amax;
    out.maximizer(0) = 1.0;
    return out;
  }
  auto neg_value = [&](double t) { return -a.dot(inner_maximizer(a, t)); };
  const auto best = boost::math::tools::brent_find_minima(neg_value, 1e-12, 1.0 - 1e-12, 50);
  // t -> 0 recovers the vertex e_imax of E, worth amax.
  if (-best.second > amax) {
    out.value = -best.second;
    out.t = best.first;
    out.maximizer = inner_maximizer(a, best.first);
  } else {
    out.value = amax;
    out.maximizer(imax) = 1.0;
  }
  return out;
}

double haar_Q_support_value(const CVec& w) { return haar_Q_support(w).value; }

bool haar_limit_membership(const CVec& w, double tol) { return haar_Q_support_value(w) <= 1.0 + tol; }

double haar_limit_support(const RVec& theta) {
  require(theta.size() % 2 == 0 && theta.size() >= 2, ErrorKind::dimension, "direction must be interleaved Re/Im");
  const int d = static_cast<int>(theta.size() / 2);
  RVec m(d);
  for (int i = 0; i < d; ++i) m(i) = std::hypot(theta(2 * i), theta(2 * i + 1));
  return lehner_scalar_haar(m);
}

RVec haar_limit_support_point(const RVec& theta) {
  require(theta.size() % 2 == 0 && theta.size() >= 2, ErrorKind::dimension, "direction must be interleaved Re/Im");
  const int d = static_cast<int>(theta.size() / 2);
  RVec m(d);
  for (int i = 0; i < d; ++i) m(i) = std::hypot(theta(2 * i), theta(2 * i + 1));
  const double t = d == 1 ? 0.0 : lehner_scalar_haar_min(m).argmin;
  RVec w = RVec::Zero(theta.size());
  for (int i = 0; i < d; ++i) {
    const double r = std::hypot(t, m(i));
    if (r == 0.0) continue;
    w(2 * i) = theta(2 * i) / r;
    w(2 * i + 1) = theta(2 * i + 1) / r;
  }
  return w;
}

const char* to_string(LimitKind k) { return k == LimitKind::wigner ? "wigner" : "haar"; }

LimitKind parse_limit_kind(const std::string& s) {
  if (s == "wigner" || s == "gue") return LimitKind::wigner;
  if (s == "haar" || s == "haar-unitary") return LimitKind::haar;
  throw Error(ErrorKind::precondition, "unknown limit kind '" + s + "'");
}

RMat limit_boundary_cloud(LimitKind kind, int d, int K) {
  require(d >= 1 && K >= 1, ErrorKind::precondition, "limit_boundary_cloud: d, K >= 1");
  if (kind == LimitKind::wigner) return 2.0 * sphere_directions(d, K);
  require(d <= 3, ErrorKind::precondition, "haar limit cloud needs d <= 3");
  RMat pts = sphere_directions(2 * d, K);
  for (int k = 0; k < K; ++k) {
    CVec w(d);
    for (int i = 0; i < d; ++i) w(i) = cplx(pts(k, 2 * i), pts(k, 2 * i + 1));
    pts.row(k) /= haar_Q_support_value(w);
  }
  return pts;
}

}  // namespace matrange
