#include "nlch/steady.hpp"

#include <cmath>

#include "krylov.hpp"
#include "nlch/random.hpp"

namespace nlch {

StationaryResidual stationary_residual(const ModelParams& params,
                                       const Field& u) {
  if (linf_norm(u) >= 1.0)
    throw BarrierViolation("stationary residual needs linf(u) < 1");
  Field mu = chemical_potential(params, u);
  const double lambda = mean(mu);
  mu.values -= lambda;
  const double norm = l2_norm(mu);
  return {std::move(mu), norm, lambda};
}


StationaryState steady_solve(const ModelParams& params,
                             const EllipticWorkspace& workspace,
                             const Field& u_init, double m,
                             const StepConfig& cfg, double tol, double t_max) {
  check_same_grid(workspace.grid(), u_init.grid);
  if (std::abs(mean(u_init) - m) > 1e-10)
    throw InvalidSpec("steady_solve: mean(u_init) must equal m");

  // Phase 1: descend the flow until the equilibrium criterion fires.
  const Trajectory traj = advance_adaptive(params, workspace, u_init, t_max, cfg);
  Field u = traj.phi;
  const double phase1_energy = discrete_energy(params, u).total;

  // Phase 2: projected Newton on [mu_h(u) - lambda = 0, mean(u) = m].
  const Grid& g = u.grid;
  const double bound = 1.0 - cfg.barrier_margin;
  StationaryResidual res = stationary_residual(params, u);
  const double a_ref = params.coeff_a(std::clamp(m, -bound, bound));
  auto precond = [&](const Vec& v) {
    Field f(g, Vec(v - v.mean()));
    Field z = workspace.apply_spectral_inverse(f, params.theta, a_ref, 0.0);
    z.values -= z.values.mean();
    return z.values.eval();
  };
  auto hessian = [&](const Vec& v) {
    Field f(g, Vec(v - v.mean()));
    Field hv = chemical_potential_tangent(params, u, f);
    hv.values -= hv.values.mean();
    return hv.values.eval();
  };

  for (int iter = 0; iter < 60 && res.norm > tol; ++iter) {
    Vec rhs = -res.r.values;
    rhs -= rhs.mean();
    Vec delta;
    if (!detail::bicgstab(hessian, precond, rhs, delta, 1e-10,
                          workspace.max_iterations()))
      throw NoConvergence("stationary polish: inner solve failed");
    delta -= delta.mean();

    bool improved = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      Field trial = u;
      trial.values += alpha * delta;
      trial.values += m - trial.values.mean();
      if (linf_norm(trial) > bound) continue;
      StationaryResidual rt = stationary_residual(params, trial);
      if (rt.norm < res.norm) {
        u = std::move(trial);
        res = std::move(rt);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (res.norm > tol)
    throw NoConvergence("stationary polish did not reach tolerance");

  StationaryState state;
  state.m = m;
  state.lambda = res.lambda;
  state.residual_norm = res.norm;
  state.separation = 1.0 - linf_norm(u);
  state.energy = discrete_energy(params, u).total;
  state.u = std::move(u);
  if (state.energy > phase1_energy + 1e-8 * (1.0 + std::abs(phase1_energy)))
    throw NoConvergence("stationary polish increased the energy");
  return state;
}

MatanoReport verify_matano(const ModelParams& params,
                           const StationaryState& state) {
  const MatanoBounds b = matano_bounds(params, state.m);
  const Grid& g = state.u.grid;
  MatanoReport rep;
  rep.lower = b.lower;
  rep.upper = b.upper;
  rep.tol = 1e-6 + g.hx * g.hx + (g.dim == 2 ? g.hy * g.hy : 0.0);
  double viol = 0.0;
  for (Eigen::Index c = 0; c < g.cells(); ++c) {
    const double v = state.u.values[c];
    viol = std::max(viol, std::max(b.lower - v, v - b.upper));
  }
  rep.max_violation = std::max(viol, 0.0);
  rep.within_bounds = viol <= rep.tol;
  return rep;
}

double h2_surrogate_norm(const Field& v) {
  const double l2 = l2_norm(v);
  const FaceField dv = gradient_faces(v);
  const double grad_sq = face_inner(dv, dv);
  const double lap = l2_norm(divergence_cells(dv));
  return std::sqrt(l2 * l2 + grad_sq + lap * lap);
}

StabilityReport stability_probe(const ModelParams& params,
                                const EllipticWorkspace& workspace,
                                const StationaryState& state, double eta,
                                double T, double eps, const StepConfig& cfg,
                                std::uint64_t seed) {
  if (state.residual_norm > 1e-10)
    throw InvalidSpec("stability_probe needs a polished stationary state");
  if (eta < 0.0) throw InvalidSpec("eta must be nonnegative");

  const Grid& g = state.u.grid;
  Field phi = state.u;
  if (eta > 0.0) {
    Field pert = noise_field(g, 1.0, seed);
    const double size = h2_surrogate_norm(pert);
    pert.values *= eta / size;
    phi.values += pert.values;
    if (linf_norm(phi) >= 1.0)
      throw BarrierViolation("perturbation pushes the state out of (-1,1)");
  }

  StabilityReport rep;
  rep.eta = eta;
  rep.eps = eps;
  auto distance = [&](const Field& f) {
    Field d = f;
    d.values -= state.u.values;
    return h2_surrogate_norm(d);
  };
  double d0 = distance(phi);
  rep.sup_distance = d0;
  rep.samples.emplace_back(0.0, d0);

  // Chunked advance so the probe can stop as soon as the tube is left.
  const int chunks = 50;
  double t = 0.0;
  for (int k = 1; k <= chunks; ++k) {
    const double t_target = T * k / chunks;
    StepConfig c = cfg;
    c.equilibrium_threshold = 0.0;  // run the full chunk
    Trajectory traj = advance_adaptive(params, workspace, phi, t_target - t, c,
                                       [&](double tc, const Field& f, const Field&,
                                           const StepOutcome&) {
                                         rep.sup_distance = std::max(
                                             rep.sup_distance, distance(f));
                                         (void)tc;
                                       });
    phi = traj.phi;
    t = t_target;
    const double d = distance(phi);
    rep.samples.emplace_back(t, d);
    if (rep.sup_distance > eps && rep.exit_time < 0.0) rep.exit_time = t;
    if (rep.exit_time >= 0.0) break;
  }
  rep.final_distance = distance(phi);
  rep.stayed_within = rep.sup_distance <= eps;
  return rep;
}

}  // namespace nlch
