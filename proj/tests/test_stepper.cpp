#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nlch/random.hpp"
#include "nlch/stepper.hpp"

using namespace nlch;

namespace {

ModelParams standard_params() {
  return ModelParams::make(1.0, 2.0, CoefficientFn::constant(1.0),
                           CoefficientFn::constant(1.0));
}

// Amplitude of the k-th cosine mode under the discrete cell-centered basis.
double mode_amplitude(const Field& phi, Eigen::Index k) {
  const Grid& g = phi.grid;
  double s = 0.0;
  for (Eigen::Index i = 0; i < g.nx; ++i)
    s += phi.values[i] * std::cos(std::numbers::pi * double(k) * (i + 0.5) /
                                  double(g.nx));
  return 2.0 * s / double(g.nx);
}

Field seeded_mode(const Grid& g, Eigen::Index k, double amp, double mean_val) {
  Field f(g, mean_val);
  for (Eigen::Index i = 0; i < g.nx; ++i)
    f.values[i] += amp * std::cos(std::numbers::pi * double(k) * (i + 0.5) /
                                  double(g.nx));
  return f;
}

}  // namespace

TEST_CASE("constant states are fixed points of the step") {
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(32, 1.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;

  const Field phi(g, 0.3);
  const auto [next, out] = step_fixed(p, ws, phi, 1e-3, cfg);
  CHECK(out.accepted);
  CHECK(out.newton_iters == 0);
  CHECK(linf_norm(Field(g, next.values - phi.values)) <= 1e-14);
  CHECK(out.energy_after == doctest::Approx(out.energy_before).epsilon(1e-14));
}

TEST_CASE("linearized decay rate matches the dispersion relation") {
  // a = b = 1, mean 0: sigma(k) = -lambda_k (lambda_k + Psi''(0)) with
  // Psi''(0) = theta - theta0 = -1. Mode 2 on [0,1] is deep in the stable
  // band: sigma ~ -4 pi^2 (4 pi^2 - 1).
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(128, 1.0);
  const EllipticWorkspace ws(g);
  const double lambda = ws.eigenvalue(2, 0);
  const double sigma_expected = -lambda * (lambda - 1.0);
  CHECK(sigma_expected == doctest::Approx(-4.0 * std::numbers::pi *
                                          std::numbers::pi *
                                          (4.0 * std::numbers::pi *
                                               std::numbers::pi -
                                           1.0))
                              .epsilon(1e-3));

  StepConfig cfg;
  const double dt = 1e-6;
  Field phi = seeded_mode(g, 2, 1e-4, 0.0);
  const double a0 = mode_amplitude(phi, 2);
  const int steps = 100;
  for (int s = 0; s < steps; ++s) phi = step_fixed(p, ws, phi, dt, cfg).first;
  const double a1 = mode_amplitude(phi, 2);
  const double sigma_measured = std::log(a1 / a0) / (steps * dt);
  CHECK(sigma_measured == doctest::Approx(sigma_expected).epsilon(0.02));
}

TEST_CASE("linearized growth rate in the unstable band") {
  // Mode 2 on [0,10]: kappa^2 ~ 0.3948 < 1, so sigma ~ +0.239.
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(128, 10.0);
  const EllipticWorkspace ws(g);
  const double lambda = ws.eigenvalue(2, 0);
  const double sigma_expected = -lambda * (lambda - 1.0);
  CHECK(sigma_expected == doctest::Approx(0.2389853).epsilon(1e-3));

  StepConfig cfg;
  const double dt = 1e-3;
  Field phi = seeded_mode(g, 2, 1e-4, 0.0);
  const double a0 = mode_amplitude(phi, 2);
  const int steps = 200;
  for (int s = 0; s < steps; ++s) phi = step_fixed(p, ws, phi, dt, cfg).first;
  const double a1 = mode_amplitude(phi, 2);
  const double sigma_measured = std::log(a1 / a0) / (steps * dt);
  CHECK(sigma_measured == doctest::Approx(sigma_expected).epsilon(0.02));
}

TEST_CASE("mass is conserved to roundoff") {
  ModelParams p = standard_params();
  p.coeff_a = CoefficientFn::validate(CoeffKind::Polynomial, {1.0, 0.0, 0.5});
  p.coeff_b = CoefficientFn::validate(CoeffKind::Polynomial, {1.0, 0.2, 0.3});
  const Grid g = Grid::make_1d(64, 4.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;
  cfg.dt_max = 0.05;

  Field phi = noise_field(g, 1e-2, 42);
  phi.values += 0.1;
  const double m0 = mean(phi);

  const Trajectory traj = advance_adaptive(p, ws, phi, 2.0, cfg);
  CHECK(std::abs(mean(traj.phi) - m0) <= 1e-12);
  CHECK(traj.accepted_steps > 0);
}

TEST_CASE("energy decreases monotonically along the adaptive flow") {
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(64, 4.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;
  cfg.dt_max = 0.05;

  Field phi = noise_field(g, 1e-2, 7);
  std::vector<double> energies{discrete_energy(p, phi).total};
  const auto observer = [&](double, const Field&, const Field&,
                            const StepOutcome& out) {
    energies.push_back(out.energy_after);
  };
  advance_adaptive(p, ws, phi, 1.0, cfg, observer);
  REQUIRE(energies.size() > 2);
  for (std::size_t i = 1; i < energies.size(); ++i)
    CHECK(energies[i] <=
          energies[i - 1] + 1e-10 * (1.0 + std::abs(energies[i - 1])));
}

TEST_CASE("separation from the pure states is maintained") {
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(64, 4.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;
  cfg.dt_max = 0.1;
  Field phi = noise_field(g, 1e-2, 13);
  const Trajectory traj = advance_adaptive(p, ws, phi, 3.0, cfg);
  CHECK(traj.min_separation > 0.0);
  CHECK(linf_norm(traj.phi) < 1.0);
}

TEST_CASE("the adaptive advance is bit-for-bit deterministic") {
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(48, 4.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;
  cfg.dt_max = 0.05;
  const Field phi0 = noise_field(g, 1e-2, 99);

  const Trajectory t1 = advance_adaptive(p, ws, phi0, 0.5, cfg);
  const Trajectory t2 = advance_adaptive(p, ws, phi0, 0.5, cfg);
  REQUIRE(t1.phi.values.size() == t2.phi.values.size());
  for (Eigen::Index c = 0; c < t1.phi.values.size(); ++c)
    CHECK(t1.phi.values[c] == t2.phi.values[c]);
  CHECK(t1.t == t2.t);
  CHECK(t1.accepted_steps == t2.accepted_steps);
}

TEST_CASE("dt underflow raises after repeated rejections") {
  const ModelParams p = standard_params();
  const Grid g = Grid::make_1d(32, 1.0);
  const EllipticWorkspace ws(g);
  StepConfig cfg;
  cfg.newton_max_iter = 0;  // Newton can never converge on a non-constant state
  cfg.dt_min = 1e-8;
  const Field phi = noise_field(g, 1e-2, 3);
  CHECK_THROWS_AS(advance_adaptive(p, ws, phi, 1.0, cfg), DtUnderflow);
}

TEST_CASE("step configuration validation") {
  StepConfig bad;
  bad.shrink = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidSpec);
  StepConfig bad2;
  bad2.dt_min = 1e-2;
  bad2.dt_max = 1e-4;
  CHECK_THROWS_AS(bad2.validate(), InvalidSpec);
  StepConfig ok;
  CHECK_NOTHROW(ok.validate());
}
