#pragma once

#include "nctk/common.hpp"

namespace nctk {

// J(β, a) = ∫_a^∞ (e^{-iτ} - 1) τ^{-β} dτ for a ≥ 1, β > 1.
cplx tail_J(double beta, double a);

// ∫_S^∞ s^{-β} (e^{-izs} - 1) ds, β > 1, S > 0. `J1` must be tail_J(β, 1).
// Evaluated without cancellation for small |z|.
cplx power_tail_increment(double beta, double z, double S, cplx J1);

// c ∫_0^b (e^{-izs} - 1) ds, stable for small |zb|.
cplx uniform_block_increment(double c, double b, double z);

// -2 sin^2(x/2) - i sin(x) = e^{-ix} - 1 without cancellation.
inline cplx expm1_i(double x) {
  const double h = std::sin(0.5 * x);
  return {-2.0 * h * h, -std::sin(x)};
}

}  // namespace nctk
