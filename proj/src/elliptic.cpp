#include "nlch/elliptic.hpp"

#include <cmath>
#include <numbers>

namespace nlch {

namespace {

// Orthonormal DCT-II basis on n cell centers: B(i,k) = c_k cos(pi k (i+1/2)/n).
Eigen::MatrixXd cosine_basis(Eigen::Index n) {
  Eigen::MatrixXd B(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ck = k == 0 ? std::sqrt(1.0 / double(n)) : std::sqrt(2.0 / double(n));
    for (Eigen::Index i = 0; i < n; ++i)
      B(i, k) = ck * std::cos(std::numbers::pi * double(k) * (double(i) + 0.5) / double(n));
  }
  return B;
}

Eigen::VectorXd laplacian_eigenvalues(Eigen::Index n, double h) {
  Eigen::VectorXd lam(n);
  for (Eigen::Index k = 0; k < n; ++k)
    lam[k] = 2.0 / (h * h) * (1.0 - std::cos(std::numbers::pi * double(k) / double(n)));
  return lam;
}

}  // namespace

EllipticWorkspace::EllipticWorkspace(const Grid& grid) : grid_(grid) {
  basis_x_ = cosine_basis(grid.nx);
  lambda_x_ = laplacian_eigenvalues(grid.nx, grid.hx);
  if (grid.dim == 2) {
    basis_y_ = cosine_basis(grid.ny);
    lambda_y_ = laplacian_eigenvalues(grid.ny, grid.hy);
  } else {
    basis_y_ = Eigen::MatrixXd::Identity(1, 1);
    lambda_y_ = Eigen::VectorXd::Zero(1);
  }
  max_iter_ = int(10.0 * std::sqrt(double(grid.cells()))) + 20;
}

Eigen::MatrixXd EllipticWorkspace::to_modes(const Field& f) const {
  Eigen::Map<const Eigen::MatrixXd> M(f.values.data(), grid_.nx, grid_.ny);
  return basis_x_.transpose() * M * basis_y_;
}

Field EllipticWorkspace::from_modes(const Eigen::MatrixXd& modes) const {
  Eigen::MatrixXd M = basis_x_ * modes * basis_y_.transpose();
  Field out(grid_);
  Eigen::Map<Eigen::MatrixXd>(out.values.data(), grid_.nx, grid_.ny) = M;
  return out;
}

double EllipticWorkspace::smallest_nonzero_eigenvalue() const {
  double lam = lambda_x_[1];
  if (grid_.dim == 2) lam = std::min(lam, lambda_y_[1]);
  return lam;
}

Field EllipticWorkspace::solve_neumann_poisson(const Field& f) const {
  check_same_grid(grid_, f.grid);
  const double fn = l2_norm(f);
  if (std::abs(mean(f)) > 1e-10 * std::max(fn, 1e-300))
    throw NonZeroMean("solve_neumann_poisson needs a mean-zero right-hand side");
  Eigen::MatrixXd modes = to_modes(f);
  for (Eigen::Index ky = 0; ky < lambda_y_.size(); ++ky)
    for (Eigen::Index kx = 0; kx < lambda_x_.size(); ++kx) {
      const double lam = lambda_x_[kx] + lambda_y_[ky];
      modes(kx, ky) = lam > 0.0 ? modes(kx, ky) / lam : 0.0;
    }
  return from_modes(modes);
}

Field EllipticWorkspace::apply_spectral_inverse(const Field& f, double c0,
                                                double c1, double c2) const {
  check_same_grid(grid_, f.grid);
  Eigen::MatrixXd modes = to_modes(f);
  for (Eigen::Index ky = 0; ky < lambda_y_.size(); ++ky)
    for (Eigen::Index kx = 0; kx < lambda_x_.size(); ++kx) {
      const double lam = lambda_x_[kx] + lambda_y_[ky];
      const double denom = c0 + c1 * lam + c2 * lam * lam;
      modes(kx, ky) = denom != 0.0 ? modes(kx, ky) / denom : 0.0;
    }
  return from_modes(modes);
}

FaceField coefficient_faces(const CoefficientFn& b, const Field& q) {
  const Grid& g = q.grid;
  FaceField out(g);
  for (Eigen::Index j = 0; j < g.ny; ++j)
    for (Eigen::Index i = 0; i + 1 < g.nx; ++i)
      out.x[i + (g.nx - 1) * j] = b(0.5 * (q(i, j) + q(i + 1, j)));
  for (Eigen::Index j = 0; j + 1 < g.ny; ++j)
    for (Eigen::Index i = 0; i < g.nx; ++i)
      out.y[i + g.nx * j] = b(0.5 * (q(i, j) + q(i, j + 1)));
  return out;
}

Field apply_weighted_laplacian(const FaceField& bf, const Field& u) {
  check_same_grid(bf.grid, u.grid);
  FaceField flux = gradient_faces(u);
  flux.x *= bf.x;
  if (u.grid.dim == 2) flux.y *= bf.y;
  Field out = divergence_cells(flux);
  out.values = -out.values;
  return out;
}

Field EllipticWorkspace::solve_weighted(const Field& q, const Field& f,
                                        const CoefficientFn& b) const {
  check_same_grid(grid_, f.grid);
  check_same_grid(grid_, q.grid);
  const double fn = l2_norm(f);
  if (std::abs(mean(f)) > 1e-10 * std::max(fn, 1e-300))
    throw NonZeroMean("solve_weighted needs a mean-zero right-hand side");
  if (fn == 0.0) return Field(grid_, 0.0);

  const FaceField bf = coefficient_faces(b, q);
  const double b_ref = 0.5 * (b.min_on_interval() + b.max_on_interval());

  // PCG on the mean-zero subspace; preconditioner is G / b_ref.
  Field u(grid_, 0.0);
  Field r = f;
  auto precond = [&](const Field& v) {
    Field w = v;
    w.values -= w.values.mean();
    Field z = solve_neumann_poisson(w);
    z.values /= b_ref;
    return z;
  };
  Field z = precond(r);
  Field p = z;
  double rz = inner(r, z);
  for (int it = 0; it < max_iter_; ++it) {
    const Field Ap = apply_weighted_laplacian(bf, p);
    const double pAp = inner(p, Ap);
    if (!(pAp > 0.0)) throw NoConvergence("weighted solve lost positivity");
    const double alpha = rz / pAp;
    u.values += alpha * p.values;
    r.values -= alpha * Ap.values;
    if (l2_norm(r) <= tol_ * fn) {
      u.values -= u.values.mean();
      return u;
    }
    z = precond(r);
    const double rz_new = inner(r, z);
    p.values = z.values + (rz_new / rz) * p.values;
    rz = rz_new;
  }
  throw NoConvergence("weighted elliptic solve did not converge");
}

double EllipticWorkspace::hminus1_norm(const Field& f) const {
  if (l2_norm(f) == 0.0) return 0.0;
  const Field u = solve_neumann_poisson(f);
  const FaceField du = gradient_faces(u);
  return std::sqrt(face_inner(du, du));
}

double EllipticWorkspace::weighted_hminus1_norm(const Field& q, const Field& f,
                                                const CoefficientFn& b) const {
  if (l2_norm(f) == 0.0) return 0.0;
  const Field u = solve_weighted(q, f, b);
  FaceField du = gradient_faces(u);
  const FaceField bf = coefficient_faces(b, q);
  double s = (bf.x * du.x.square()).sum();
  if (grid_.dim == 2) s += (bf.y * du.y.square()).sum();
  return std::sqrt(s * grid_.cell_volume());
}

}  // namespace nlch
