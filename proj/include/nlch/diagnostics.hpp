#ifndef NLCH_DIAGNOSTICS_HPP
#define NLCH_DIAGNOSTICS_HPP

#include <vector>

#include "nlch/steady.hpp"

namespace nlch {

/// Per-step observables of a run.
struct TimeSeriesRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;
  double separation = 0.0;      // 1 - max(|min|, |max|)
  double mu_mean = 0.0;
  double mu_fluct_l2 = 0.0;     // l2 of mu - mean(mu)
  double rate_hminus1 = 0.0;    // H^-1 norm of (phi - phi_prev)/dt
  int newton_iters = 0;
};

TimeSeriesRecord record_observables(const ModelParams& params,
                                    const EllipticWorkspace& workspace,
                                    double t, double dt, const Field& phi,
                                    const Field& phi_prev,
                                    int newton_iters = 0);

struct LojasiewiczFit {
  double theta_hat = 0.0;
  double c_hat = 0.0;
  double r_squared = 0.0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;      // one past the last index used
  double max_below_line = 0.0;     // worst one-sided log residual in the tail
};

/// Fits log(mu_fluct_l2) = (1 - theta) log(E - E_inf) - log C on the tail
/// of the series (last 20% of usable records, at least 20). Throws
/// InsufficientData when the tail is too short.
LojasiewiczFit lojasiewicz_fit(const std::vector<TimeSeriesRecord>& series,
                               double E_inf);

struct ContinuousDependenceReport {
  std::vector<double> times;
  std::vector<double> ratios;  // weighted H^-1 distance over initial distance
  double initial_distance = 0.0;
  double max_ratio = 0.0;
};

/// Evolves both initial data with identical configs and reports the growth
/// of the weighted H^-1 distance (weight q = first solution).
ContinuousDependenceReport continuous_dependence(
    const ModelParams& params, const EllipticWorkspace& workspace,
    const Field& phi1_0, const Field& phi2_0, double T, const StepConfig& cfg,
    int samples = 8);

struct MeanMuReport {
  double fprime_l1 = 0.0;   // L1 norm of F'(phi)
  double mu_mean_abs = 0.0;
  double grad_mu_l2 = 0.0;
  double ratio = 0.0;       // |mean mu| / (1 + l2 of grad mu)
};

MeanMuReport mean_mu_control(const ModelParams& params, const Field& phi,
                             const Field& mu);

}  // namespace nlch

#endif
