#ifndef NLCH_ELLIPTIC_HPP
#define NLCH_ELLIPTIC_HPP

#include <Eigen/Dense>

#include "nlch/grid.hpp"
#include "nlch/model.hpp"

namespace nlch {

/// Neumann elliptic solvers on a fixed grid: the mean-zero inverse
/// Laplacian G (direct, cosine basis) and the variable-coefficient
/// weighted solver G_q (preconditioned CG). Transform plans are
/// immutable after construction.
class EllipticWorkspace {
 public:
  explicit EllipticWorkspace(const Grid& grid);

  const Grid& grid() const { return grid_; }

  /// Mean-zero u with -div(grad u) = f, zero-flux boundary. Throws
  /// NonZeroMean unless |mean f| <= 1e-10 * l2_norm(f).
  Field solve_neumann_poisson(const Field& f) const;

  /// Mean-zero u with -div(b(face-avg q) grad u) = f to relative
  /// residual 1e-10. Throws NoConvergence past the iteration cap.
  Field solve_weighted(const Field& q, const Field& f,
                       const CoefficientFn& b) const;

  double hminus1_norm(const Field& f) const;
  double weighted_hminus1_norm(const Field& q, const Field& f,
                               const CoefficientFn& b) const;

  /// Eigenvalues of -Laplacian in the cosine basis; (0,0) mode is 0.
  double eigenvalue(Eigen::Index kx, Eigen::Index ky) const {
    return lambda_x_[kx] + lambda_y_[ky];
  }
  /// Smallest nonzero eigenvalue (discrete Poincare constant is its inverse).
  double smallest_nonzero_eigenvalue() const;

  /// Applies (c0 + c1 * Lap + c2 * Lap^2)^{-1} in the cosine basis, for
  /// Lap = -Laplacian; used as a constant-coefficient preconditioner.
  Field apply_spectral_inverse(const Field& f, double c0, double c1,
                               double c2) const;

  int max_iterations() const { return max_iter_; }
  double tolerance() const { return tol_; }

 private:
  Eigen::MatrixXd to_modes(const Field& f) const;
  Field from_modes(const Eigen::MatrixXd& modes) const;

  Grid grid_;
  Eigen::MatrixXd basis_x_, basis_y_;  // orthonormal DCT-II bases
  Eigen::VectorXd lambda_x_, lambda_y_;
  int max_iter_;
  double tol_ = 1e-10;
};

/// b evaluated at arithmetic face averages of q.
FaceField coefficient_faces(const CoefficientFn& b, const Field& q);

/// -div(bf * grad u) with precomputed face coefficients.
Field apply_weighted_laplacian(const FaceField& bf, const Field& u);

}  // namespace nlch

#endif
