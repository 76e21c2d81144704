#include "nlch/energy.hpp"

#include <cmath>

#include "nlch/elliptic.hpp"

namespace nlch {

EnergyBreakdown discrete_energy(const ModelParams& params, const Field& phi) {
  const Grid& g = phi.grid;
  const auto& a = params.coeff_a;
  const double vol = g.cell_volume();
  EnergyBreakdown out;

  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i) {
      const double gx = (phi(i + 1, j) - phi(i, j)) / g.hx;
      out.gradient_part += 0.5 * a(0.5 * (phi(i, j) + phi(i + 1, j))) * gx * gx * vol;
    }
  if (g.dim == 2)
    for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
      for (Eigen::Index i = 0; i < g.nx; ++i) {
        const double gy = (phi(i, j + 1) - phi(i, j)) / g.hy;
        out.gradient_part += 0.5 * a(0.5 * (phi(i, j) + phi(i, j + 1))) * gy * gy * vol;
      }

  for (Eigen::Index c = 0; c < g.cells(); ++c) {
    const SafeguardedValue v = safeguarded_eval(params, phi.values[c], 0);
    out.potential_part += v.value * vol;
    if (v.clamped) ++out.clamped_cells;
  }
  out.total = out.gradient_part + out.potential_part;
  return out;
}

Field chemical_potential(const ModelParams& params, const Field& phi) {
  const Grid& g = phi.grid;
  const auto& a = params.coeff_a;
  Field mu(g, 0.0);

  auto face = [&](Eigen::Index cl, Eigen::Index cr, double h) {
    const double pl = phi.values[cl], pr = phi.values[cr];
    const double grad = (pr - pl) / h;
    const double mid = 0.5 * (pl + pr);
    const double flux = a(mid) * grad / h;
    const double aprime_term = 0.25 * a.deriv(mid) * grad * grad;
    mu.values[cl] += aprime_term - flux;
    mu.values[cr] += aprime_term + flux;
  };

  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i)
      face(i + g.nx * j, i + 1 + g.nx * j, g.hx);
  if (g.dim == 2)
    for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
      for (Eigen::Index i = 0; i < g.nx; ++i)
        face(i + g.nx * j, i + g.nx * (j + 1), g.hy);

  for (Eigen::Index c = 0; c < g.cells(); ++c)
    mu.values[c] += safeguarded_eval(params, phi.values[c], 1).value;
  return mu;
}

Field chemical_potential_tangent(const ModelParams& params, const Field& phi,
                                 const Field& v) {
  check_same_grid(phi.grid, v.grid);
  const Grid& g = phi.grid;
  const auto& a = params.coeff_a;
  Field out(g, 0.0);

  auto face = [&](Eigen::Index cl, Eigen::Index cr, double h) {
    const double grad = (phi.values[cr] - phi.values[cl]) / h;
    const double mid = 0.5 * (phi.values[cl] + phi.values[cr]);
    const double dgrad = (v.values[cr] - v.values[cl]) / h;
    const double dmid = 0.5 * (v.values[cl] + v.values[cr]);
    const double dflux = (a.deriv(mid) * dmid * grad + a(mid) * dgrad) / h;
    const double daprime =
        0.25 * (a.deriv2(mid) * dmid * grad * grad + 2.0 * a.deriv(mid) * grad * dgrad);
    out.values[cl] += daprime - dflux;
    out.values[cr] += daprime + dflux;
  };

  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i)
      face(i + g.nx * j, i + 1 + g.nx * j, g.hx);
  if (g.dim == 2)
    for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
      for (Eigen::Index i = 0; i < g.nx; ++i)
        face(i + g.nx * j, i + g.nx * (j + 1), g.hy);

  for (Eigen::Index c = 0; c < g.cells(); ++c)
    out.values[c] += safeguarded_eval(params, phi.values[c], 2).value * v.values[c];
  return out;
}

double dissipation(const ModelParams& params, const Field& phi,
                   const Field& mu) {
  check_same_grid(phi.grid, mu.grid);
  const FaceField bf = coefficient_faces(params.coeff_b, phi);
  const FaceField dmu = gradient_faces(mu);
  double s = (bf.x * dmu.x.square()).sum();
  if (phi.grid.dim == 2) s += (bf.y * dmu.y.square()).sum();
  return s * phi.grid.cell_volume();
}

double a_form_consistency(const ModelParams& params, const Field& phi) {
  const Grid& g = phi.grid;
  Field A(g);
  for (Eigen::Index c = 0; c < g.cells(); ++c)
    A.values[c] = a_transform(params, phi.values[c]);
  const Field lapA = divergence_cells(gradient_faces(A));
  Field mu_a(g);
  for (Eigen::Index c = 0; c < g.cells(); ++c)
    mu_a.values[c] = -std::sqrt(params.coeff_a(phi.values[c])) * lapA.values[c] +
                     safeguarded_eval(params, phi.values[c], 1).value;
  Field diff = mu_a;
  diff.values -= chemical_potential(params, phi).values;
  return l2_norm(diff);
}

}  // namespace nlch
