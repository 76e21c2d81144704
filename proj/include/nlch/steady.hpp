#ifndef NLCH_STEADY_HPP
#define NLCH_STEADY_HPP

#include <vector>

#include "nlch/stepper.hpp"

namespace nlch {

/// A solved member of S_m: mu_h(u) is constant up to residual_norm and
/// lambda is the Lagrange multiplier of the mass constraint.
struct StationaryState {
  Field u;
  double m = 0.0;
  double lambda = 0.0;
  double residual_norm = 0.0;
  double separation = 0.0;  // 1 - linf(u)
  double energy = 0.0;
};

struct StationaryResidual {
  Field r;       // mu_h(u) - mean(mu_h(u))
  double norm;   // L2 norm of r
  double lambda; // mean(mu_h(u))
};

StationaryResidual stationary_residual(const ModelParams& params,
                                       const Field& u);

/// Descent to equilibrium (phase 1) followed by a projected Newton polish
/// of [mu_h(u) = lambda, mean(u) = m] (phase 2).
StationaryState steady_solve(const ModelParams& params,
                             const EllipticWorkspace& workspace,
                             const Field& u_init, double m,
                             const StepConfig& cfg, double tol = 1e-10,
                             double t_max = 1e6);

struct MatanoReport {
  double lower = 0.0;
  double upper = 0.0;
  double tol = 0.0;
  double max_violation = 0.0;
  bool within_bounds = false;
};

/// Checks lower - tol <= u <= upper + tol against the minimizer bounds for
/// the state's mass; informative for non-minimizing critical points.
MatanoReport verify_matano(const ModelParams& params,
                           const StationaryState& state);

/// Discrete H^2 surrogate: value, gradient and Laplacian parts in L2.
double h2_surrogate_norm(const Field& v);

struct StabilityReport {
  double eta = 0.0;
  double eps = 0.0;
  double sup_distance = 0.0;
  double final_distance = 0.0;
  double exit_time = -1.0;  // first time distance exceeded eps; -1 if never
  bool stayed_within = false;
  std::vector<std::pair<double, double>> samples;  // (t, distance)
};

/// Perturbs a stationary state by a mean-zero field of H^2-surrogate size
/// eta, evolves to time T and tracks the distance to the state. Stops
/// early once the distance exceeds eps.
StabilityReport stability_probe(const ModelParams& params,
                                const EllipticWorkspace& workspace,
                                const StationaryState& state, double eta,
                                double T, double eps, const StepConfig& cfg,
                                std::uint64_t seed);

}  // namespace nlch

#endif
