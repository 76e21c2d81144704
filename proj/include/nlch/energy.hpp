#ifndef NLCH_ENERGY_HPP
#define NLCH_ENERGY_HPP

#include "nlch/grid.hpp"
#include "nlch/model.hpp"

namespace nlch {

struct EnergyBreakdown {
  double gradient_part = 0.0;
  double potential_part = 0.0;
  double total = 0.0;
  long clamped_cells = 0;
};

/// E_h(phi) = sum_faces a((phiL+phiR)/2) (Dphi)^2/2 vol + sum_cells Psi(phi) vol.
/// Potential values are safeguarded near +-1; clamped cells are counted.
EnergyBreakdown discrete_energy(const ModelParams& params, const Field& phi);

/// Exact variational derivative of E_h: the flux-difference term
/// -div(a_f Dphi), the a' face term, and Psi'(phi).
Field chemical_potential(const ModelParams& params, const Field& phi);

/// Directional derivative of chemical_potential at phi in direction v.
Field chemical_potential_tangent(const ModelParams& params, const Field& phi,
                                 const Field& v);

/// D = sum_faces b(face-avg phi) (Dmu)^2 vol >= 0.
double dissipation(const ModelParams& params, const Field& phi,
                   const Field& mu);

/// L2 defect between the A-form potential -sqrt(a(phi)) Lap_h A(phi) + Psi'(phi)
/// and chemical_potential; O(h^2) for smooth resolved fields.
double a_form_consistency(const ModelParams& params, const Field& phi);

}  // namespace nlch

#endif
