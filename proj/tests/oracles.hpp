// Test-side oracles, independent of the library implementation paths they
// check: adaptive Simpson quadrature, brute-force extremum scans and a
// reference constant-coefficient chemical potential.
#ifndef NLCH_TESTS_ORACLES_HPP
#define NLCH_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>

#include "nlch/grid.hpp"
#include "nlch/model.hpp"

namespace oracle {

// Discrete free energy of phi + eps * dir, re-evaluated independently in
// extended precision. Double-precision summation of the energy caps
// centered differences at a cancellation floor of ~|E| * 1e-16 / eps, which
// buries the eps^2 truncation term for small eps; long double pushes that
// floor three orders of magnitude down.
inline long double energy_extended(const nlch::ModelParams& p,
                                   const nlch::Field& phi,
                                   const nlch::Field& dir, long double eps) {
  const nlch::Grid& g = phi.grid;
  auto coeff = [](const nlch::CoefficientFn& c, long double s) {
    const auto& k = c.coefficients();
    long double v = 0.0L;
    for (std::size_t i = k.size(); i-- > 0;) v = v * s + (long double)k[i];
    return v;
  };
  auto psi = [&](long double s) {
    return 0.5L * (long double)p.theta *
               ((1.0L + s) * std::log(1.0L + s) + (1.0L - s) * std::log(1.0L - s)) -
           0.5L * (long double)p.theta0 * s * s;
  };
  auto at = [&](Eigen::Index i, Eigen::Index j) {
    const Eigen::Index c = i + g.nx * j;
    return (long double)phi.values[c] + eps * (long double)dir.values[c];
  };
  const long double vol = g.cell_volume();
  long double E = 0.0L;
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i) {
      const long double gx = (at(i + 1, j) - at(i, j)) / (long double)g.hx;
      E += 0.5L * coeff(p.coeff_a, 0.5L * (at(i, j) + at(i + 1, j))) * gx * gx * vol;
    }
  if (g.dim == 2)
    for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
      for (Eigen::Index i = 0; i < g.nx; ++i) {
        const long double gy = (at(i, j + 1) - at(i, j)) / (long double)g.hy;
        E += 0.5L * coeff(p.coeff_a, 0.5L * (at(i, j) + at(i, j + 1))) * gy * gy * vol;
      }
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i < g.nx; ++i) E += psi(at(i, j)) * vol;
  return E;
}

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int depth = 0, double tol = 1e-13) {
  const double m = 0.5 * (a + b);
  const double coarse = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
  const double left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
  const double right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
  const double fine = left + right;
  if (depth > 40 || std::abs(fine - coarse) < 15.0 * tol) return fine;
  return simpson(f, a, m, depth + 1, 0.5 * tol) +
         simpson(f, m, b, depth + 1, 0.5 * tol);
}

// Argmax of f on (lo,hi) by dense scan plus golden-section refinement.
inline double argmax(const std::function<double(double)>& f, double lo,
                     double hi) {
  double best = lo, best_val = -1e300;
  const int n = 20000;
  for (int i = 1; i < n; ++i) {
    const double s = lo + (hi - lo) * i / n;
    const double v = f(s);
    if (v > best_val) {
      best_val = v;
      best = s;
    }
  }
  double a = std::max(lo, best - (hi - lo) / n);
  double b = std::min(hi, best + (hi - lo) / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (f(c) > f(d))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return 0.5 * (a + b);
}

// Root of a monotone increasing function by bisection.
inline double bisect_increasing(const std::function<double(double)>& f,
                                double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    (f(m) < 0.0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

// Least-squares slope of log(err) against log(h) over a refinement ladder.
inline double convergence_slope(const std::vector<double>& h,
                                const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

}  // namespace oracle

#endif
