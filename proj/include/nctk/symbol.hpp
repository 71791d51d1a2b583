#pragma once

#include <vector>

#include "nctk/coeffs.hpp"

namespace nctk {

// ŵ_ε(ξ, v) = ∫ p(s)(e^{-iεv·ξ s} - 1) ds / θ(ε)
cplx w_hat(const PathLengthDistribution& d, const Vec3& xi, const Vec3& v, double eps, const Regime& r);

// Λ_ε(ξ, v') = ∫∫ κ(v'·v) p(s)(cos(εv·ξ s) - 1)/θ(ε) ds dv on the nodes of q.
// kappa == nullptr means κ ≡ 1.
double lambda_eps(const PathLengthDistribution& d, const ScatterKernel* kappa, const Vec3& xi, const Vec3& vprime,
                  double eps, const Regime& r, const DirectionQuadrature& q);

// Same with κ ≡ 1, integrated adaptively over the polar angle of v about ξ
// (the |v·ξ|^α kink sits at an endpoint). Depends on |ξ| only.
double lambda_eps_isotropic(const PathLengthDistribution& d, double xi_norm, double eps, const Regime& r, int dim);

// The limit -D̃|ξ|^β for κ ≡ 1.
struct LambdaLimit {
  double coefficient = 0.0;  // D̃1, D̃2 or D̃3
  double exponent = 2.0;
  double value(double xi_norm) const { return -coefficient * std::pow(xi_norm, exponent); }
};
LambdaLimit lambda_limit(const PathLengthDistribution& d, const Regime& r, int dim, bool d3_includes_d0 = true);

// Explicit bound on |Λ_ε| at one grid point (κ ≡ 1).
//  (a1) 2 D0 |ξ|²
//  (b1) [min(½(ε|ξ|)^{2-α}, 2(ε|ξ|)^{-α}) + d0(2/α + 1/(2(2-α)))] |ξ|^α
//  (c1) |ξ|² [2 + d0 + (d0⟨μ²⟩/2) max(0, ln(1/(ε|ξ|)))] / |ln ε|
double lambda_bound(const PathLengthDistribution& d, const Regime& r, int dim, double eps, double xi_norm);

struct BoundRow {
  char regime = 'a';
  double alpha = 0.0, eps = 0.0, xi_norm = 0.0;
  double lambda = 0.0, bound = 0.0, limit_value = 0.0, abs_error = 0.0;
  bool pass = false;
};

struct BoundsReport {
  std::vector<BoundRow> rows;
  bool all_pass = true;
  double empirical_c0 = 0.0;  // max |Λ_ε| / |ξ|^β over the sweep
};

BoundsReport verify_bounds(const PathLengthDistribution& d, const Regime& r, int dim,
                           const std::vector<double>& eps_list, const std::vector<double>& xi_list,
                           bool d3_includes_d0 = true);

// logspace(a, b, n) = 10^linspace(log10 a, log10 b, n)
std::vector<double> logspace(double a, double b, int n);

}  // namespace nctk
