#ifndef NLCH_SRC_KRYLOV_HPP
#define NLCH_SRC_KRYLOV_HPP

#include <cmath>

#include "nlch/grid.hpp"

namespace nlch::detail {

// Preconditioned BiCGStab for a matrix-free nonsymmetric operator.
// Returns true when the relative residual target is met.
template <class Op, class Pre>
bool bicgstab(const Op& apply, const Pre& precond, const Vec& rhs, Vec& x,
              double tol, int max_iter) {
  const double rhs_norm = std::sqrt(rhs.square().sum());
  x.setZero(rhs.size());
  if (rhs_norm == 0.0) return true;
  Vec r = rhs;
  const Vec r0 = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Vec v = Vec::Zero(rhs.size());
  Vec p = Vec::Zero(rhs.size());
  for (int it = 0; it < max_iter; ++it) {
    const double rho_new = (r0 * r).sum();
    if (rho_new == 0.0) return false;
    if (it == 0)
      p = r;
    else
      p = r + (rho_new / rho) * (alpha / omega) * (p - omega * v);
    rho = rho_new;
    const Vec ph = precond(p);
    v = apply(ph);
    const double r0v = (r0 * v).sum();
    if (r0v == 0.0) return false;
    alpha = rho / r0v;
    const Vec s = r - alpha * v;
    if (std::sqrt(s.square().sum()) <= tol * rhs_norm) {
      x += alpha * ph;
      return true;
    }
    const Vec sh = precond(s);
    const Vec t = apply(sh);
    const double tt = (t * t).sum();
    if (tt == 0.0) return false;
    omega = (t * s).sum() / tt;
    x += alpha * ph + omega * sh;
    r = s - omega * t;
    if (std::sqrt(r.square().sum()) <= tol * rhs_norm) return true;
    if (omega == 0.0) return false;
  }
  return false;
}

}  // namespace nlch::detail

#endif
