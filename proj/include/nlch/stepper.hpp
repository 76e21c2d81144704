#ifndef NLCH_STEPPER_HPP
#define NLCH_STEPPER_HPP

#include <functional>

#include "nlch/elliptic.hpp"
#include "nlch/energy.hpp"

namespace nlch {

struct StepConfig {
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double energy_slack = 1e-10;
  double shrink = 0.5;
  double grow = 1.2;
  double barrier_margin = 1e-8;
  double equilibrium_threshold = 1e-8;
  int equilibrium_consecutive = 5;

  void validate() const;
};

struct StepOutcome {
  bool accepted = false;
  double dt_used = 0.0;
  int newton_iters = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double dissipation_estimate = 0.0;
  double mass_drift = 0.0;
  long clamp_events = 0;
};

/// One implicit Euler step of phi_t = div(b(phi^n) grad mu(phi^{n+1})),
/// damped Newton with matrix-free Krylov inner solves. Mass is preserved
/// exactly (constraint projection onto the mass shell). Throws
/// NewtonDiverged / BarrierViolation on failure.
std::pair<Field, StepOutcome> step_fixed(const ModelParams& params,
                                         const EllipticWorkspace& workspace,
                                         const Field& phi_n, double dt,
                                         const StepConfig& cfg);

/// Called after every accepted step; must not mutate the fields.
using Observer = std::function<void(double t, const Field& phi,
                                    const Field& mu, const StepOutcome&)>;

struct Trajectory {
  Field phi;
  double t = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  bool reached_equilibrium = false;
  double min_separation = 1.0;  // min over run of 1 - linf(phi)
};

/// Adaptive advance to t_end: a step is accepted only if Newton converged
/// and energy did not increase beyond the slack; dt shrinks on rejection
/// and grows on acceptance. Stops early once the H^-1 rate norm stays
/// under the equilibrium threshold for the configured number of steps.
Trajectory advance_adaptive(const ModelParams& params,
                            const EllipticWorkspace& workspace,
                            const Field& phi0, double t_end,
                            const StepConfig& cfg,
                            const Observer& observer = {});

}  // namespace nlch

#endif
