#include "nlch/stepper.hpp"

#include <cmath>

#include "krylov.hpp"

namespace nlch {

using detail::bicgstab;

void StepConfig::validate() const {
  if (!(0.0 < dt_min && dt_min <= dt_init && dt_init <= dt_max))
    throw InvalidSpec("require 0 < dt_min <= dt_init <= dt_max");
  if (!(shrink > 0.0 && shrink < 1.0) || !(grow > 1.0))
    throw InvalidSpec("require shrink in (0,1) and grow > 1");
  if (!(barrier_margin > 0.0 && barrier_margin < 1.0))
    throw InvalidSpec("require barrier_margin in (0,1)");
}

std::pair<Field, StepOutcome> step_fixed(const ModelParams& params,
                                         const EllipticWorkspace& workspace,
                                         const Field& phi_n, double dt,
                                         const StepConfig& cfg) {
  check_same_grid(workspace.grid(), phi_n.grid);
  if (!(dt > 0.0)) throw InvalidSpec("step_fixed needs dt > 0");
  const Grid& g = phi_n.grid;
  const double m0 = mean(phi_n);
  const double bound = 1.0 - cfg.barrier_margin;
  if (linf_norm(phi_n) >= 1.0)
    throw BarrierViolation("initial state touches the pure states");

  // Mobility lagged at phi^n: the update is a divergence of known-coefficient
  // fluxes, so mass is conserved exactly.
  const FaceField bf = coefficient_faces(params.coeff_b, phi_n);

  const double s_mean = std::clamp(m0, -bound, bound);
  const double a_ref = params.coeff_a(s_mean);
  const double b_ref = params.coeff_b(s_mean);
  double c1 = dt * b_ref * (params.theta / (1.0 - s_mean * s_mean) - params.theta0);
  const double c2 = dt * b_ref * a_ref;
  // Keep the spectral preconditioner safely positive definite.
  if (c1 < 0.0 && 1.0 - c1 * c1 / (4.0 * c2) < 0.5) c1 = 0.0;
  auto precond = [&](const Vec& v) {
    Field f(g, v);
    return Field(workspace.apply_spectral_inverse(f, 1.0, c1, c2)).values.eval();
  };

  auto residual = [&](const Field& phi) {
    const Field mu = chemical_potential(params, phi);
    Field r = phi;
    r.values -= phi_n.values;
    r.values += dt * apply_weighted_laplacian(bf, mu).values;
    return r;
  };

  Field phi = phi_n;
  // Pull any cell sitting exactly on the barrier into the admissible band.
  phi.values = phi.values.min(bound).max(-bound);
  phi.values += m0 - phi.values.mean();

  const double scale = std::max(1.0, l2_norm(phi_n));
  Field r = residual(phi);
  double rn = l2_norm(r);
  int iters = 0;
  bool barrier_blocked = false;

  while (rn > cfg.newton_tol * scale) {
    if (iters >= cfg.newton_max_iter) {
      if (barrier_blocked)
        throw BarrierViolation("Newton iterates pinned at the barrier");
      throw NewtonDiverged("Newton did not reach tolerance");
    }
    ++iters;

    auto jacobian = [&](const Vec& v) {
      Field vf(g, v);
      const Field tangent = chemical_potential_tangent(params, phi, vf);
      Vec out = v + dt * apply_weighted_laplacian(bf, tangent).values;
      return out;
    };
    // Modified Picard fallback: convexified tangent (a frozen, F'' instead
    // of Psi'') keeps the operator positive when full Newton stalls.
    auto picard = [&](const Vec& v) {
      Field vf(g, v);
      const FaceField af = coefficient_faces(params.coeff_a, phi);
      Field tangent = apply_weighted_laplacian(af, vf);
      for (Eigen::Index c = 0; c < g.cells(); ++c)
        tangent.values[c] += safeguarded_eval(params, phi.values[c], 2).value +
                             params.theta0 * vf.values[c];
      Vec out = v + dt * apply_weighted_laplacian(bf, tangent).values;
      return out;
    };

    Vec rhs = -r.values;
    Vec delta;
    bool solved = bicgstab(jacobian, precond, rhs, delta, 1e-8,
                           workspace.max_iterations());
    if (!solved)
      solved = bicgstab(picard, precond, rhs, delta, 1e-6,
                        workspace.max_iterations());
    if (!solved) throw NewtonDiverged("inner Krylov solve failed");

    // Line search: stay inside the barrier and decrease the residual.
    bool accepted_direction = false;
    for (int attempt = 0; attempt < 2 && !accepted_direction; ++attempt) {
      double alpha = 1.0;
      for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
        Field trial = phi;
        trial.values += alpha * delta;
        trial.values += m0 - trial.values.mean();
        if (linf_norm(trial) > bound) {
          barrier_blocked = true;
          continue;
        }
        const Field rt = residual(trial);
        const double rtn = l2_norm(rt);
        if (rtn < rn) {
          phi = std::move(trial);
          r = rt;
          rn = rtn;
          accepted_direction = true;
          barrier_blocked = false;
          break;
        }
      }
      if (!accepted_direction && attempt == 0) {
        // retry along the Picard direction
        if (!bicgstab(picard, precond, rhs, delta, 1e-6,
                      workspace.max_iterations()))
          break;
      }
    }
    if (!accepted_direction) {
      if (barrier_blocked)
        throw BarrierViolation("line search blocked by the barrier");
      throw NewtonDiverged("line search failed to reduce residual");
    }
  }

  StepOutcome out;
  out.accepted = true;
  out.dt_used = dt;
  out.newton_iters = iters;
  out.mass_drift = std::abs(mean(phi) - m0);
  const EnergyBreakdown eb_before = discrete_energy(params, phi_n);
  const EnergyBreakdown eb_after = discrete_energy(params, phi);
  out.energy_before = eb_before.total;
  out.energy_after = eb_after.total;
  out.clamp_events = eb_after.clamped_cells;

  const Field mu = chemical_potential(params, phi);
  const FaceField dmu = gradient_faces(mu);
  double diss = (bf.x * dmu.x.square()).sum();
  if (g.dim == 2) diss += (bf.y * dmu.y.square()).sum();
  out.dissipation_estimate = diss * g.cell_volume();
  return {std::move(phi), out};
}

Trajectory advance_adaptive(const ModelParams& params,
                            const EllipticWorkspace& workspace,
                            const Field& phi0, double t_end,
                            const StepConfig& cfg, const Observer& observer) {
  cfg.validate();
  check_same_grid(workspace.grid(), phi0.grid);
  if (linf_norm(phi0) >= 1.0)
    throw BarrierViolation("initial state touches the pure states");
  const double m0 = mean(phi0);
  if (!(std::abs(m0) < 1.0)) throw InvalidSpec("initial mass must lie in (-1,1)");

  Trajectory traj;
  traj.phi = phi0;
  traj.min_separation = 1.0 - linf_norm(phi0);
  double dt = cfg.dt_init;
  int quiet_steps = 0;

  while (traj.t < t_end) {
    const double dt_step = std::min(dt, t_end - traj.t);
    bool ok = true;
    Field phi_new;
    StepOutcome outcome;
    try {
      std::tie(phi_new, outcome) = step_fixed(params, workspace, traj.phi, dt_step, cfg);
      const double allowed =
          outcome.energy_before +
          cfg.energy_slack * (1.0 + std::abs(outcome.energy_before));
      if (outcome.energy_after > allowed) ok = false;
    } catch (const NewtonDiverged&) {
      ok = false;
    } catch (const BarrierViolation&) {
      ok = false;
    }

    if (!ok) {
      ++traj.rejected_steps;
      dt *= cfg.shrink;
      if (dt < cfg.dt_min) throw DtUnderflow("time step fell below dt_min");
      continue;
    }

    outcome.accepted = true;
    Field rate(phi_new.grid);
    rate.values = (phi_new.values - traj.phi.values) / dt_step;
    rate.values -= rate.values.mean();

    traj.phi = std::move(phi_new);
    // Exact mass projection: the continuous flow conserves the mean, the
    // discrete iterate is re-centered to the initial mass.
    traj.phi.values += m0 - traj.phi.values.mean();
    traj.t += dt_step;
    ++traj.accepted_steps;
    traj.min_separation = std::min(traj.min_separation, 1.0 - linf_norm(traj.phi));
    dt = std::min(dt * cfg.grow, cfg.dt_max);

    if (observer) {
      const Field mu = chemical_potential(params, traj.phi);
      observer(traj.t, traj.phi, mu, outcome);
    }

    const double rate_norm = workspace.hminus1_norm(rate);
    quiet_steps = rate_norm < cfg.equilibrium_threshold ? quiet_steps + 1 : 0;
    if (quiet_steps >= cfg.equilibrium_consecutive) {
      traj.reached_equilibrium = true;
      break;
    }
  }
  return traj;
}

}  // namespace nlch
