#ifndef NLCH_RANDOM_HPP
#define NLCH_RANDOM_HPP

#include <cstdint>
#include <random>

#include "nlch/grid.hpp"

namespace nlch {

/// Deterministic uniform generator; avoids std distributions so that the
/// stream is pinned by the mt19937_64 standard alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0,1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1,1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// Mean-zero field of uniform noise with the given amplitude (linf <= amplitude).
inline Field noise_field(const Grid& grid, double amplitude, std::uint64_t seed) {
  Rng rng(seed);
  Field f(grid);
  for (Eigen::Index c = 0; c < grid.cells(); ++c) f.values[c] = rng.symmetric();
  f.values -= f.values.mean();
  const double peak = f.values.abs().maxCoeff();
  if (peak > 0.0) f.values *= amplitude / peak;
  return f;
}

}  // namespace nlch

#endif
