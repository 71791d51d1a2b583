#pragma once

#include <vector>

#include "nctk/common.hpp"

namespace nctk {

// Default: 5 Gauss nodes per μ half-range, exact through degree 9.
constexpr int kDefaultQuadOrder = 5;

// Directions on S^{n-1} with weights summing to one.
//
// n = 3: Gauss-Legendre on each half μ ∈ [-1,0] and [0,1] (`order` nodes per
// half) times 4*order equispaced azimuths. Splitting at μ = 0 keeps the rule
// accurate for integrands with a |μ|^α kink at the equator, which is what the
// heavy-tail symbols look like.
// n = 2: 4*order equispaced angles, offset by half a step.
struct DirectionQuadrature {
  int dim = 3;
  int order = kDefaultQuadOrder;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  // n = 3 product structure; node (i, k) is stored at i * azimuths + k.
  std::vector<double> mu;
  std::vector<double> mu_weights;  // sum to one
  int azimuths = 0;

  std::size_t size() const { return nodes.size(); }

  // Highest total polynomial degree in v integrated exactly.
  int exact_degree() const { return dim == 3 ? 2 * order - 1 : 4 * order - 1; }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

DirectionQuadrature make_quadrature(int n, int order = kDefaultQuadOrder);

// Unit vector with cosine mu to `axis` and azimuth phi about it. In 2D the
// sign of the rotation is taken from sin(phi) and mu is the cosine of the angle.
Vec3 rotate_about(const Vec3& axis, double mu, double phi, int dim);

// Exact ∫ (v·e)^2 dv under the unit measure.
inline double second_moment_exact(int dim) { return 1.0 / dim; }

}  // namespace nctk
