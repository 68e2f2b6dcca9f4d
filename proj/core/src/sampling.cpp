#include "thetalab/sampling.hpp"

#include <cmath>

#include "thetalab/expand.hpp"

namespace thetalab {

std::vector<cplx> random_diagonal(int g, Rng& rng) {
  std::vector<cplx> t;
  t.reserve(static_cast<std::size_t>(g));
  for (int a = 0; a < g; ++a) {
    const double re = rng.uniform(-0.5, 0.5);
    const double im = rng.uniform(0.8, 2.0);
    t.emplace_back(re, im);
  }
  return t;
}

bool is_generic(const std::vector<cplx>& t, int l, double threshold) {
  const auto sym = bind_symbols(t, l);
  for (std::size_t a = static_cast<std::size_t>(l); a < t.size(); ++a) {
    const cplx p2 = sym.phi[a] * sym.phi[a];
    if (std::abs(sym.psi[a] - 2.0 * p2) < threshold) return false;
    if (std::abs(4.0 * p2 - sym.psi[a]) < threshold) return false;
  }
  return true;
}

std::vector<cplx> generic_diagonal(int g, int l, Rng& rng, double threshold) {
  for (;;) {
    auto t = random_diagonal(g, rng);
    if (is_generic(t, l, threshold)) return t;
  }
}

CMatrix random_offdiagonal_direction(int g, Rng& rng) {
  CMatrix b = CMatrix::Zero(g, g);
  double top = 0.0;
  for (int a = 0; a < g; ++a) {
    for (int c = a + 1; c < g; ++c) {
      const cplx v = rng.unit_box();
      b(a, c) = v;
      b(c, a) = v;
      top = std::max(top, std::abs(v));
    }
  }
  if (top > 0) b /= top;
  return b;
}

PeriodMatrix random_period_matrix(int g, Rng& rng, double scale) {
  for (;;) {
    const auto t = random_diagonal(g, rng);
    CMatrix m = PeriodMatrix::diagonal(t).entries() + scale * random_offdiagonal_direction(g, rng);
    try {
      PeriodMatrix tau(m);
      if (tau.min_imag_eigenvalue() >= 0.3) return tau;
    } catch (const PeriodMatrixError&) {
      // redraw
    }
  }
}

Characteristic random_characteristic(int g, Rng& rng) {
  const std::uint32_t mask = g >= 32 ? ~0U : ((1U << g) - 1U);
  const auto bits = rng.next();
  return {g, static_cast<std::uint32_t>(bits) & mask, static_cast<std::uint32_t>(bits >> 32) & mask};
}

}  // namespace thetalab
