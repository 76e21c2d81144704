#include "nlch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlch {

TimeSeriesRecord record_observables(const ModelParams& params,
                                    const EllipticWorkspace& workspace,
                                    double t, double dt, const Field& phi,
                                    const Field& phi_prev, int newton_iters) {
  check_same_grid(phi.grid, phi_prev.grid);
  TimeSeriesRecord rec;
  rec.t = t;
  rec.dt = dt;
  rec.mass = mean(phi);
  rec.energy = discrete_energy(params, phi).total;
  Field mu = chemical_potential(params, phi);
  rec.dissipation = dissipation(params, phi, mu);
  rec.min_phi = phi.values.minCoeff();
  rec.max_phi = phi.values.maxCoeff();
  rec.separation = 1.0 - std::max(std::abs(rec.min_phi), std::abs(rec.max_phi));
  rec.mu_mean = mean(mu);
  mu.values -= rec.mu_mean;
  rec.mu_fluct_l2 = l2_norm(mu);
  if (dt > 0.0) {
    Field rate(phi.grid);
    rate.values = (phi.values - phi_prev.values) / dt;
    rate.values -= rate.values.mean();  // mean-zero by conservation
    rec.rate_hminus1 = workspace.hminus1_norm(rate);
  }
  rec.newton_iters = newton_iters;
  return rec;
}

LojasiewiczFit lojasiewicz_fit(const std::vector<TimeSeriesRecord>& series,
                               double E_inf) {
  const double eps = std::numeric_limits<double>::epsilon();
  // The gap is a difference of two energies of size ~ the series scale, so
  // values below ~eps^(3/4) * scale are dominated by summation roundoff and
  // would wreck the log-log fit; only gaps above that floor are usable.
  double scale = std::abs(E_inf);
  for (const auto& rec : series) scale = std::max(scale, std::abs(rec.energy));
  const double floor =
      std::max(10.0 * eps * std::abs(E_inf), std::pow(eps, 0.75) * scale);

  std::vector<std::pair<double, double>> usable;  // (log(E - E_inf), log fluct)
  for (const auto& rec : series) {
    const double gap = rec.energy - E_inf;
    if (gap > floor && rec.mu_fluct_l2 > 0.0)
      usable.emplace_back(std::log(gap), std::log(rec.mu_fluct_l2));
  }
  const std::size_t tail = std::max<std::size_t>(20, usable.size() / 5);
  if (usable.size() < tail || tail < 20)
    throw InsufficientData("lojasiewicz_fit needs at least 20 usable tail records");
  const std::size_t begin = usable.size() - tail;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = begin; i < usable.size(); ++i) {
    sx += usable[i].first;
    sy += usable[i].second;
    sxx += usable[i].first * usable[i].first;
    sxy += usable[i].first * usable[i].second;
    syy += usable[i].second * usable[i].second;
  }
  const double n = double(tail);
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InsufficientData("degenerate energy gap in fit window");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  LojasiewiczFit fit;
  fit.theta_hat = 1.0 - slope;
  fit.c_hat = std::exp(-intercept);
  fit.window_begin = begin;
  fit.window_end = usable.size();
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0, worst = 0.0;
  for (std::size_t i = begin; i < usable.size(); ++i) {
    const double predicted = slope * usable[i].first + intercept;
    const double res = usable[i].second - predicted;
    ss_res += res * res;
    worst = std::max(worst, -res);  // point below the fitted line
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.max_below_line = worst;
  return fit;
}

ContinuousDependenceReport continuous_dependence(
    const ModelParams& params, const EllipticWorkspace& workspace,
    const Field& phi1_0, const Field& phi2_0, double T, const StepConfig& cfg,
    int samples) {
  check_same_grid(phi1_0.grid, phi2_0.grid);
  if (std::abs(mean(phi1_0) - mean(phi2_0)) > 1e-12)
    throw InvalidSpec("continuous_dependence: initial data must share the mass");

  auto weighted_distance = [&](const Field& a, const Field& b, const Field& q) {
    Field diff = a;
    diff.values -= b.values;
    diff.values -= diff.values.mean();
    if (l2_norm(diff) == 0.0) return 0.0;
    return workspace.weighted_hminus1_norm(q, diff, params.coeff_b);
  };

  ContinuousDependenceReport rep;
  rep.initial_distance = weighted_distance(phi1_0, phi2_0, phi1_0);

  Field phi1 = phi1_0, phi2 = phi2_0;
  StepConfig c = cfg;
  c.equilibrium_threshold = 0.0;  // compare at exact times
  double t = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double t_target = T * k / samples;
    phi1 = advance_adaptive(params, workspace, phi1, t_target - t, c).phi;
    phi2 = advance_adaptive(params, workspace, phi2, t_target - t, c).phi;
    t = t_target;
    const double dist = weighted_distance(phi1, phi2, phi1);
    const double ratio =
        rep.initial_distance > 0.0 ? dist / rep.initial_distance : 0.0;
    rep.times.push_back(t);
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

MeanMuReport mean_mu_control(const ModelParams& params, const Field& phi,
                             const Field& mu) {
  check_same_grid(phi.grid, mu.grid);
  MeanMuReport rep;
  double l1 = 0.0;
  for (Eigen::Index c = 0; c < phi.grid.cells(); ++c) {
    const double s = std::clamp(phi.values[c], -1.0 + params.clamp_delta,
                                1.0 - params.clamp_delta);
    l1 += std::abs(convex_part_eval(params, s, 1));
  }
  rep.fprime_l1 = l1 * phi.grid.cell_volume();
  rep.mu_mean_abs = std::abs(mean(mu));
  const FaceField dmu = gradient_faces(mu);
  rep.grad_mu_l2 = std::sqrt(face_inner(dmu, dmu));
  rep.ratio = rep.mu_mean_abs / (1.0 + rep.grad_mu_l2);
  return rep;
}

}  // namespace nlch
