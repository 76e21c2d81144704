#include "nlch/grid.hpp"

#include <cmath>

namespace nlch {

Grid Grid::make_1d(Eigen::Index nx, double Lx) {
  if (nx < 4 || !(Lx > 0.0)) throw InvalidSpec("1D grid needs nx >= 4, Lx > 0");
  Grid g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.Lx = Lx;
  g.Ly = 1.0;
  g.hx = Lx / double(nx);
  g.hy = 1.0;
  return g;
}

Grid Grid::make_2d(Eigen::Index nx, Eigen::Index ny, double Lx, double Ly) {
  if (nx < 4 || ny < 4 || !(Lx > 0.0) || !(Ly > 0.0))
    throw InvalidSpec("2D grid needs nx, ny >= 4 and positive side lengths");
  Grid g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.Lx = Lx;
  g.Ly = Ly;
  g.hx = Lx / double(nx);
  g.hy = Ly / double(ny);
  return g;
}

FaceField gradient_faces(const Field& field) {
  const Grid& g = field.grid;
  FaceField out(g);
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i)
      out.x[i + (g.nx - 1) * j] = (field(i + 1, j) - field(i, j)) / g.hx;
  for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
    for (Eigen::Index i = 0; i < g.nx; ++i)
      out.y[i + g.nx * j] = (field(i, j + 1) - field(i, j)) / g.hy;
  return out;
}

Field divergence_cells(const FaceField& faces) {
  const Grid& g = faces.grid;
  Field out(g, 0.0);
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i < g.nx; ++i) {
      const double fe = (i + 1 < g.nx) ? faces.x[i + (g.nx - 1) * j] : 0.0;
      const double fw = (i > 0) ? faces.x[i - 1 + (g.nx - 1) * j] : 0.0;
      double d = (fe - fw) / g.hx;
      if (g.dim == 2) {
        const double fn = (j + 1 < g.ny) ? faces.y[i + g.nx * j] : 0.0;
        const double fs = (j > 0) ? faces.y[i + g.nx * (j - 1)] : 0.0;
        d += (fn - fs) / g.hy;
      }
      out(i, j) = d;
    }
  return out;
}

Field grad_sq_cells(const Field& field) {
  const Grid& g = field.grid;
  const FaceField df = gradient_faces(field);
  Field out(g, 0.0);
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i < g.nx; ++i) {
      double sx = 0.0;
      int cx = 0;
      if (i > 0) {
        const double v = df.x[i - 1 + (g.nx - 1) * j];
        sx += v * v;
        ++cx;
      }
      if (i + 1 < g.nx) {
        const double v = df.x[i + (g.nx - 1) * j];
        sx += v * v;
        ++cx;
      }
      double val = cx ? sx / cx : 0.0;
      if (g.dim == 2) {
        double sy = 0.0;
        int cy = 0;
        if (j > 0) {
          const double v = df.y[i + g.nx * (j - 1)];
          sy += v * v;
          ++cy;
        }
        if (j + 1 < g.ny) {
          const double v = df.y[i + g.nx * j];
          sy += v * v;
          ++cy;
        }
        val += cy ? sy / cy : 0.0;
      }
      out(i, j) = val;
    }
  return out;
}

double mean(const Field& field) { return field.values.mean(); }

double l2_norm(const Field& field) {
  return std::sqrt(field.values.square().sum() * field.grid.cell_volume());
}

double linf_norm(const Field& field) { return field.values.abs().maxCoeff(); }

double inner(const Field& f, const Field& g) {
  check_same_grid(f.grid, g.grid);
  return (f.values * g.values).sum() * f.grid.cell_volume();
}

double face_inner(const FaceField& f, const FaceField& g) {
  check_same_grid(f.grid, g.grid);
  double s = (f.x * g.x).sum();
  if (f.grid.dim == 2) s += (f.y * g.y).sum();
  return s * f.grid.cell_volume();
}

}  // namespace nlch
