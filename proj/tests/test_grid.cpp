#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlch/grid.hpp"
#include "nlch/random.hpp"
#include "oracles.hpp"

using namespace nlch;

namespace {

Field cosine_1d(const Grid& g, double freq) {
  Field f(g);
  for (Eigen::Index i = 0; i < g.nx; ++i)
    f.values[i] = std::cos(freq * g.x_center(i));
  return f;
}

}  // namespace

TEST_CASE("gradient of simple profiles") {
  const Grid g = Grid::make_1d(4, 1.0);
  Field constant(g, 2.5);
  CHECK(gradient_faces(constant).x.abs().maxCoeff() == 0.0);

  Field linear(g);
  linear.values << 0, 1, 2, 3;
  const FaceField df = gradient_faces(linear);
  for (Eigen::Index f = 0; f < 3; ++f) CHECK(df.x[f] == doctest::Approx(4.0));
}

TEST_CASE("gradient converges at second order") {
  const double pi = std::numbers::pi;
  std::vector<double> hs, errs;
  for (Eigen::Index n : {32, 64, 128, 256}) {
    const Grid g = Grid::make_1d(n, 1.0);
    const FaceField df = gradient_faces(cosine_1d(g, pi));
    double err = 0.0;
    for (Eigen::Index f = 0; f + 1 < g.nx; ++f) {
      const double xf = (f + 1) * g.hx;
      err = std::max(err, std::abs(df.x[f] + pi * std::sin(pi * xf)));
    }
    hs.push_back(g.hx);
    errs.push_back(err);
  }
  CHECK(oracle::convergence_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("divergence has exactly zero mean") {
  const Grid g = Grid::make_2d(16, 12, 2.0, 1.5);
  Rng rng(42);
  FaceField f(g);
  for (Eigen::Index i = 0; i < f.x.size(); ++i) f.x[i] = rng.symmetric();
  for (Eigen::Index i = 0; i < f.y.size(); ++i) f.y[i] = rng.symmetric();
  const Field div = divergence_cells(f);
  CHECK(std::abs(mean(div)) <= 1e-14 * f.x.abs().maxCoeff());

  FaceField zero(g);
  CHECK(l2_norm(divergence_cells(zero)) == 0.0);
}

TEST_CASE("discrete Laplacian converges at second order") {
  const double pi = std::numbers::pi;
  std::vector<double> hs, errs;
  for (Eigen::Index n : {32, 64, 128, 256}) {
    const Grid g = Grid::make_1d(n, 1.0);
    const Field lap = divergence_cells(gradient_faces(cosine_1d(g, pi)));
    double err = 0.0;
    for (Eigen::Index i = 0; i < g.nx; ++i)
      err = std::max(err,
                     std::abs(lap.values[i] + pi * pi * std::cos(pi * g.x_center(i))));
    hs.push_back(g.hx);
    errs.push_back(err);
  }
  CHECK(oracle::convergence_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("grad_sq_cells") {
  const Grid g = Grid::make_1d(8, 2.0);
  CHECK(grad_sq_cells(Field(g, 1.0)).values.abs().maxCoeff() == 0.0);

  Field linear(g);
  for (Eigen::Index i = 0; i < g.nx; ++i) linear.values[i] = 4.0 * g.x_center(i);
  const Field gs = grad_sq_cells(linear);
  for (Eigen::Index i = 1; i + 1 < g.nx; ++i)
    CHECK(gs.values[i] == doctest::Approx(16.0).epsilon(1e-13));

  const double pi = std::numbers::pi;
  std::vector<double> hs, errs;
  for (Eigen::Index n : {64, 128, 256}) {
    const Grid gn = Grid::make_1d(n, 1.0);
    const Field got = grad_sq_cells(cosine_1d(gn, pi));
    double err = 0.0;
    for (Eigen::Index i = 0; i < gn.nx; ++i) {
      const double s = std::sin(pi * gn.x_center(i));
      err = std::max(err, std::abs(got.values[i] - pi * pi * s * s));
    }
    hs.push_back(gn.hx);
    errs.push_back(err);
  }
  CHECK(oracle::convergence_slope(hs, errs) >= 1.9);
}

TEST_CASE("reductions") {
  const Grid g = Grid::make_2d(8, 8, 1.0, 1.0);
  CHECK(mean(Field(g, 3.25)) == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(l2_norm(Field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  Field half(g);
  for (Eigen::Index c = 0; c < g.cells(); ++c)
    half.values[c] = (c % 2 == 0) ? 1.0 : -1.0;
  CHECK(mean(half) == doctest::Approx(0.0).epsilon(1e-15));

  const Grid other = Grid::make_1d(8, 1.0);
  CHECK_THROWS_AS(inner(Field(g, 1.0), Field(other, 1.0)), GridMismatch);
}

TEST_CASE("summation by parts holds to roundoff") {
  const Grid g = Grid::make_2d(12, 9, 1.7, 0.8);
  Rng rng(7);
  Field c(g);
  FaceField f(g);
  for (Eigen::Index i = 0; i < c.values.size(); ++i) c.values[i] = rng.symmetric();
  for (Eigen::Index i = 0; i < f.x.size(); ++i) f.x[i] = rng.symmetric();
  for (Eigen::Index i = 0; i < f.y.size(); ++i) f.y[i] = rng.symmetric();

  const double lhs = inner(divergence_cells(f), c);
  const double rhs = -face_inner(f, gradient_faces(c));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("divergence of the gradient of a constant vanishes") {
  const Grid g = Grid::make_2d(8, 8, 1.0, 2.0);
  const Field lap = divergence_cells(gradient_faces(Field(g, 0.7)));
  CHECK(lap.values.abs().maxCoeff() == 0.0);
}

TEST_CASE("grid invariants") {
  const Grid g = Grid::make_2d(10, 20, 2.5, 3.5);
  CHECK(double(g.nx * g.ny) * g.cell_volume() ==
        doctest::Approx(g.volume()).epsilon(1e-12));
  CHECK_THROWS_AS(Grid::make_1d(3, 1.0), InvalidSpec);
  CHECK_THROWS_AS(Grid::make_2d(8, 8, -1.0, 1.0), InvalidSpec);
}
