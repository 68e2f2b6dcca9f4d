#pragma once

// Seeded, platform-independent sampling of diagonal points and directions.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard; uniform doubles use its top 53 bits directly rather than
// std::uniform_real_distribution, whose algorithm is implementation-defined.

#include <cstdint>
#include <random>
#include <vector>

#include "thetalab/theta.hpp"

namespace thetalab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  /// Complex number with both parts uniform in [-1, 1).
  cplx unit_box() { return {uniform(-1, 1), uniform(-1, 1)}; }

 private:
  std::mt19937_64 engine_;
};

/// Diagonal entries with Im t in [0.8, 2.0] and Re t in [-0.5, 0.5].
std::vector<cplx> random_diagonal(int g, Rng& rng);

inline constexpr double kGenericityThreshold = 1e-3;

/// True when |psi_a - 2 phi_a^2| and |4 phi_a^2 - psi_a| exceed threshold for
/// every even column a > l of the class-l normal form.
bool is_generic(const std::vector<cplx>& t, int l, double threshold = kGenericityThreshold);

/// random_diagonal, redrawn until is_generic holds.
std::vector<cplx> generic_diagonal(int g, int l, Rng& rng, double threshold = kGenericityThreshold);

/// Symmetric, zero diagonal, random complex entries scaled to unit max modulus.
CMatrix random_offdiagonal_direction(int g, Rng& rng);

/// diag(random_diagonal) + scale * random_offdiagonal_direction, redrawn until
/// Im is positive definite with smallest eigenvalue >= 0.3.
PeriodMatrix random_period_matrix(int g, Rng& rng, double scale = 0.3);

Characteristic random_characteristic(int g, Rng& rng);

}  // namespace thetalab
