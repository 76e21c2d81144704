#ifndef NLCH_MODEL_HPP
#define NLCH_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "nlch/errors.hpp"

namespace nlch {

enum class CoeffKind { Constant, Polynomial };

/// Strictly positive coefficient function on [-1,1] (the nonlinear
/// diffusion a or the mobility b). Constants and polynomials up to
/// degree 4, with certified min/max bounds on [-1,1].
class CoefficientFn {
 public:
  /// Validates and certifies bounds by exact critical-point enumeration.
  /// Throws NonPositiveCoefficient if min over [-1,1] is <= 0,
  /// InvalidSpec on bad degree or non-finite coefficients.
  static CoefficientFn validate(CoeffKind kind,
                                const std::vector<double>& coefficients);

  static CoefficientFn constant(double value) {
    return validate(CoeffKind::Constant, {value});
  }

  double operator()(double s) const;
  double deriv(double s) const;
  double deriv2(double s) const;

  CoeffKind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double min_on_interval() const { return min_; }
  double max_on_interval() const { return max_; }
  bool is_constant_one() const {
    return coeffs_.size() == 1 && coeffs_[0] == 1.0;
  }

 private:
  CoefficientFn() = default;
  CoeffKind kind_ = CoeffKind::Constant;
  std::vector<double> coeffs_{1.0};  // constant term first
  double min_ = 1.0;
  double max_ = 1.0;
};

/// Physical model: temperatures theta < theta0 of the logarithmic
/// potential, diffusion a, mobility b, and the clamp distance used when
/// evaluating the potential near the pure states +-1.
struct ModelParams {
  double theta = 1.0;
  double theta0 = 2.0;
  CoefficientFn coeff_a = CoefficientFn::constant(1.0);
  CoefficientFn coeff_b = CoefficientFn::constant(1.0);
  double clamp_delta = 1e-9;

  static ModelParams make(double theta, double theta0, CoefficientFn a,
                          CoefficientFn b, double clamp_delta = 1e-9);
};

/// Psi(s) = (theta/2)[(1+s)log(1+s)+(1-s)log(1-s)] - (theta0/2) s^2
/// order 0 -> Psi, 1 -> Psi', 2 -> Psi''. Throws OutOfDomain for |s| >= 1.
double potential_eval(const ModelParams& params, double s, int order);

/// Logarithmic convex part F with F'' = theta/(1-s^2); order in {1,2}.
double convex_part_eval(const ModelParams& params, double s, int order);

struct SafeguardedValue {
  double value;
  bool clamped;
};

/// potential_eval at s clamped into [-1+clamp_delta, 1-clamp_delta].
/// Never throws; accepts any finite s (Newton iterates may overshoot).
SafeguardedValue safeguarded_eval(const ModelParams& params, double s,
                                  int order);

/// A(s) = int_0^s sqrt(a(tau)) dtau, adaptive Gauss quadrature to 1e-12.
double a_transform(const ModelParams& params, double s);

/// Inverse of the strictly increasing A, safeguarded Newton to 1e-12.
double a_transform_inv(const ModelParams& params, double y);

struct MatanoPoints {
  double s_star;  // positive root of Psi''
  double alpha0;  // Psi'(alpha0) = min over (0,1) of Psi'
  double beta0;   // Psi'(beta0)  = max over (-1,0) of Psi'
};

/// Extrema of Psi' used by the minimizer bounds. Throws
/// DegeneratePotential if theta >= theta0.
MatanoPoints matano_points(const ModelParams& params);

struct MatanoBounds {
  double lower;
  double upper;
};

/// Interval [a,b] containing m that confines local energy minimizers:
/// (m,m) when m <= alpha0 or m >= beta0, else (alpha0, beta0).
MatanoBounds matano_bounds(const ModelParams& params, double m);

}  // namespace nlch

#endif
