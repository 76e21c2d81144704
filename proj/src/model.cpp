#include "nlch/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace nlch {

namespace {

double horner(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

std::vector<double> poly_deriv(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

// Real roots of a polynomial (coeffs constant-first, degree <= 3) via the
// companion matrix.
std::vector<double> real_roots(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const std::size_t deg = c.size() - 1;
  std::vector<double> roots;
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
  for (std::size_t i = 0; i < deg; ++i)
    companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z.real())))
      roots.push_back(z.real());
  }
  return roots;
}

}  // namespace

CoefficientFn CoefficientFn::validate(CoeffKind kind,
                                      const std::vector<double>& coefficients) {
  if (coefficients.empty())
    throw InvalidSpec("coefficient function needs at least one coefficient");
  for (double c : coefficients)
    if (!std::isfinite(c))
      throw InvalidSpec("coefficient function has non-finite coefficient");
  if (kind == CoeffKind::Constant && coefficients.size() != 1)
    throw InvalidSpec("constant coefficient takes exactly one value");
  if (coefficients.size() > 5)
    throw InvalidSpec("coefficient polynomial degree exceeds 4");

  CoefficientFn fn;
  fn.kind_ = kind;
  fn.coeffs_ = coefficients;

  // Candidate extrema: endpoints plus real critical points in (-1,1).
  std::vector<double> candidates{-1.0, 1.0};
  for (double r : real_roots(poly_deriv(fn.coeffs_)))
    if (r > -1.0 && r < 1.0) candidates.push_back(r);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double s : candidates) {
    const double v = horner(fn.coeffs_, s);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  fn.min_ = lo;
  fn.max_ = hi;
  if (!(lo > 0.0))
    throw NonPositiveCoefficient("coefficient function not strictly positive on [-1,1]");
  return fn;
}

double CoefficientFn::operator()(double s) const { return horner(coeffs_, s); }
double CoefficientFn::deriv(double s) const {
  return horner(poly_deriv(coeffs_), s);
}
double CoefficientFn::deriv2(double s) const {
  return horner(poly_deriv(poly_deriv(coeffs_)), s);
}

ModelParams ModelParams::make(double theta, double theta0, CoefficientFn a,
                              CoefficientFn b, double clamp_delta) {
  if (!(theta > 0.0) || !(theta0 > 0.0))
    throw InvalidSpec("theta and theta0 must be positive");
  if (!(theta < theta0)) throw InvalidSpec("theta < theta0 required");
  if (!(clamp_delta > 0.0) || !(clamp_delta < 1e-3))
    throw InvalidSpec("clamp_delta must lie in (0, 1e-3)");
  ModelParams p;
  p.theta = theta;
  p.theta0 = theta0;
  p.coeff_a = std::move(a);
  p.coeff_b = std::move(b);
  p.clamp_delta = clamp_delta;
  return p;
}

double potential_eval(const ModelParams& params, double s, int order) {
  if (!(std::abs(s) < 1.0)) throw OutOfDomain("potential argument |s| >= 1");
  const double th = params.theta, th0 = params.theta0;
  switch (order) {
    case 0:
      return 0.5 * th * ((1.0 + s) * std::log1p(s) + (1.0 - s) * std::log1p(-s)) -
             0.5 * th0 * s * s;
    case 1:
      return 0.5 * th * (std::log1p(s) - std::log1p(-s)) - th0 * s;
    case 2:
      return th / (1.0 - s * s) - th0;
    default:
      throw InvalidSpec("potential order must be 0, 1 or 2");
  }
}

double convex_part_eval(const ModelParams& params, double s, int order) {
  if (!(std::abs(s) < 1.0)) throw OutOfDomain("potential argument |s| >= 1");
  switch (order) {
    case 1:
      return 0.5 * params.theta * (std::log1p(s) - std::log1p(-s));
    case 2:
      return params.theta / (1.0 - s * s);
    default:
      throw InvalidSpec("convex part order must be 1 or 2");
  }
}

SafeguardedValue safeguarded_eval(const ModelParams& params, double s,
                                  int order) {
  const double lo = -1.0 + params.clamp_delta;
  const double hi = 1.0 - params.clamp_delta;
  const double sc = std::clamp(s, lo, hi);
  return {potential_eval(params, sc, order), sc != s};
}

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
constexpr double kGaussX[5] = {0.1488743389816312, 0.4333953941292472,
                               0.6794095682990244, 0.8650633666889845,
                               0.9739065285171717};
constexpr double kGaussW[5] = {0.2955242247147529, 0.2692667193099963,
                               0.2190863625159820, 0.1494513491505806,
                               0.0666713443086881};

double gauss_segment(const CoefficientFn& a, double lo, double hi) {
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i)
    sum += kGaussW[i] *
           (std::sqrt(a(c + r * kGaussX[i])) + std::sqrt(a(c - r * kGaussX[i])));
  return r * sum;
}

}  // namespace

double a_transform(const ModelParams& params, double s) {
  if (!(std::abs(s) <= 1.0)) throw OutOfDomain("A-transform argument |s| > 1");
  if (s == 0.0) return 0.0;
  // Composite Gauss, doubling segments until two levels agree to 1e-13.
  const auto& a = params.coeff_a;
  double prev = gauss_segment(a, 0.0, s);
  for (int n = 2; n <= 4096; n *= 2) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      sum += gauss_segment(a, s * k / n, s * (k + 1) / n);
    if (std::abs(sum - prev) < 1e-13) return sum;
    prev = sum;
  }
  return prev;
}

double a_transform_inv(const ModelParams& params, double y) {
  const double lo_val = a_transform(params, -1.0);
  const double hi_val = a_transform(params, 1.0);
  if (y < lo_val - 1e-12 || y > hi_val + 1e-12)
    throw OutOfDomain("A-transform inverse argument outside range");
  double lo = -1.0, hi = 1.0;
  double s = std::clamp(y, -1.0, 1.0);  // decent start: A(s) ~ s
  for (int it = 0; it < 200; ++it) {
    const double f = a_transform(params, s) - y;
    if (std::abs(f) < 1e-13) break;
    (f > 0.0 ? hi : lo) = s;
    const double step = f / std::sqrt(params.coeff_a(s));
    double next = s - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-15) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

MatanoPoints matano_points(const ModelParams& params) {
  if (!(params.theta < params.theta0))
    throw DegeneratePotential("theta >= theta0: Psi' is monotone");
  const double s_star = std::sqrt(1.0 - params.theta / params.theta0);
  // max of Psi' over (-1,0) is attained at -s_star.
  const double target = potential_eval(params, -s_star, 1);
  // Psi' is increasing on (s_star,1) from Psi'(s_star) < target to +inf;
  // bisect for Psi'(beta0) = target.
  double lo = s_star, hi = 1.0 - 1e-16;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (potential_eval(params, mid, 1) < target ? lo : hi) = mid;
    if (hi - lo < 1e-13) break;
  }
  const double beta0 = 0.5 * (lo + hi);
  return {s_star, -beta0, beta0};
}

MatanoBounds matano_bounds(const ModelParams& params, double m) {
  if (!(std::abs(m) < 1.0)) throw OutOfDomain("mass |m| >= 1");
  const MatanoPoints pts = matano_points(params);
  if (m <= pts.alpha0 || m >= pts.beta0) return {m, m};
  return {pts.alpha0, pts.beta0};
}

}  // namespace nlch
