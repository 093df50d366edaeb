#pragma once

#include <string>

#include "matrange/linalg.hpp"

namespace matrange {

// Level-1 limit bodies: 2 * closed unit ball for free semicirculars, and
// Q' (polar of Q = {z : (|z_1|, .., |z_d|) in E}) for free Haar unitaries, with
// E = {x : inf_{t>0} sum_i sqrt(t^2 + x_i^2) - (d-1) t <= 1}.

// Support function of 2 B_d at a unit direction (always 2).
double wigner_limit_support(int d, const RVec& theta);

// x in E (coordinates enter through |x_i|).
bool haar_E_membership(const RVec& x, double tol = 1e-12);
// rho with rho * dir on the boundary of E. The defining function is positively
// homogeneous, so rho = 1 / f(dir).
double haar_E_radius(const RVec& dir);

struct QSupport {
  double value = 0.0;  // sup over z in Q of Re sum w_i z_i
  RVec maximizer;      // x on the boundary of E (moduli of the optimal z)
  double t = 0.0;      // optimal slack variable of the inner infimum
};
// Exact via the joint convexity of (x, t) -> sum sqrt(t^2 + x_i^2) - (d-1) t:
// for fixed t the inner maximization has a one-parameter KKT solution, and the
// value is concave in t.
QSupport haar_Q_support(const CVec& w);
double haar_Q_support_value(const CVec& w);
// w in W_1(u) = Q'.
bool haar_limit_membership(const CVec& w, double tol = 1e-9);
// Support function of Q' at a real direction of R^{2d} (interleaved Re/Im);
// equals inf_t sum sqrt(t^2 + |theta_i|^2) - (d-1) t.
double haar_limit_support(const RVec& theta);
// The point of Q' where that support is attained (interleaved Re/Im): the
// gradient of the support function, w_j = theta_j / sqrt(t*^2 + |theta_j|^2) at
// the optimal t* of the scalar Haar formula.
RVec haar_limit_support_point(const RVec& theta);

enum class LimitKind { wigner, haar };
const char* to_string(LimitKind k);
LimitKind parse_limit_kind(const std::string& s);

// K boundary points (rows) of the limit body: 2 * sphere points for wigner (R^d),
// radial boundary points w / h_Q(w) of Q' for haar (R^{2d}, interleaved Re/Im).
RMat limit_boundary_cloud(LimitKind kind, int d, int K);

}  // namespace matrange
