#ifndef NLCH_GRID_HPP
#define NLCH_GRID_HPP

#include <Eigen/Dense>

#include "nlch/errors.hpp"

namespace nlch {

using Vec = Eigen::ArrayXd;

/// Uniform cell-centered grid on [0,Lx] (1D) or [0,Lx]x[0,Ly] (2D) with
/// homogeneous Neumann (zero-flux) boundaries. Cell (i,j) is stored at
/// index i + nx*j (x fastest).
struct Grid {
  int dim = 1;
  Eigen::Index nx = 4, ny = 1;
  double Lx = 1.0, Ly = 1.0;
  double hx = 0.25, hy = 1.0;

  static Grid make_1d(Eigen::Index nx, double Lx);
  static Grid make_2d(Eigen::Index nx, Eigen::Index ny, double Lx, double Ly);

  Eigen::Index cells() const { return nx * ny; }
  double cell_volume() const { return dim == 1 ? hx : hx * hy; }
  double volume() const { return dim == 1 ? Lx : Lx * Ly; }
  double x_center(Eigen::Index i) const { return (i + 0.5) * hx; }
  double y_center(Eigen::Index j) const { return (j + 0.5) * hy; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Cell-centered scalar field.
struct Field {
  Grid grid;
  Vec values;

  Field() = default;
  Field(const Grid& g, double fill = 0.0)
      : grid(g), values(Vec::Constant(g.cells(), fill)) {}
  Field(const Grid& g, Vec v) : grid(g), values(std::move(v)) {}

  double& operator()(Eigen::Index i, Eigen::Index j) {
    return values[i + grid.nx * j];
  }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return values[i + grid.nx * j];
  }
};

/// Interior-face values; boundary faces carry no storage, so zero flux
/// is structural. x-face between cells (i,j),(i+1,j) sits at index
/// i + (nx-1)*j; y-face between (i,j),(i,j+1) at i + nx*j.
struct FaceField {
  Grid grid;
  Vec x;  // (nx-1)*ny entries
  Vec y;  // nx*(ny-1) entries

  FaceField() = default;
  explicit FaceField(const Grid& g)
      : grid(g),
        x(Vec::Zero((g.nx - 1) * g.ny)),
        y(Vec::Zero(g.nx * (g.ny - 1))) {}
};

FaceField gradient_faces(const Field& field);
Field divergence_cells(const FaceField& faces);

/// Cell-centered |grad phi|^2 by averaging squared face gradients onto
/// cells (single face at the boundary).
Field grad_sq_cells(const Field& field);

double mean(const Field& field);
double l2_norm(const Field& field);
double linf_norm(const Field& field);
double inner(const Field& f, const Field& g);

/// Sum over interior faces of x.f * y.f * face volume (= cell volume).
double face_inner(const FaceField& f, const FaceField& g);

inline void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

}  // namespace nlch

#endif
