#include "nctk/sphere.hpp"

#include <string>

#include "nctk/quadrature.hpp"

namespace nctk {

DirectionQuadrature make_quadrature(int n, int order) {
  if (n != 2 && n != 3)
    throw DomainError("make_quadrature: unsupported dimension " + std::to_string(n));
  if (order < 4)
    throw DomainError("make_quadrature: order " + std::to_string(order) + " is below the minimum of 4");

  DirectionQuadrature q;
  q.dim = n;
  q.order = order;

  if (n == 2) {
    const int m = 4 * order;
    q.nodes.reserve(m);
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / m;
      q.nodes.emplace_back(std::cos(phi), std::sin(phi), 0.0);
      q.weights.push_back(1.0 / m);
    }
    return q;
  }

  const GaussRule g = gauss_legendre(order);
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < order; ++i) {
      // [-1,0] then [0,1]; weights scaled so the polar rule sums to one
      q.mu.push_back(0.5 * g.x[i] + (half == 0 ? -0.5 : 0.5));
      q.mu_weights.push_back(0.25 * g.w[i]);
    }
  }
  q.azimuths = 4 * order;
  const std::size_t nmu = q.mu.size();
  q.nodes.reserve(nmu * q.azimuths);
  for (std::size_t i = 0; i < nmu; ++i) {
    const double mu = q.mu[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int k = 0; k < q.azimuths; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / q.azimuths;
      q.nodes.emplace_back(st * std::cos(phi), st * std::sin(phi), mu);
      q.weights.push_back(q.mu_weights[i] / q.azimuths);
    }
  }
  return q;
}

Vec3 rotate_about(const Vec3& axis, double mu, double phi, int dim) {
  const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  if (dim == 2) {
    const double s = std::sin(phi) >= 0.0 ? st : -st;
    return {mu * axis.x - s * axis.y, s * axis.x + mu * axis.y, 0.0};
  }
  // orthonormal frame (e1, e2, axis)
  Vec3 e1;
  if (std::abs(axis.z) < 0.9)
    e1 = normalized(Vec3{-axis.y, axis.x, 0.0});
  else
    e1 = normalized(Vec3{0.0, -axis.z, axis.y});
  const Vec3 e2{axis.y * e1.z - axis.z * e1.y, axis.z * e1.x - axis.x * e1.z,
                axis.x * e1.y - axis.y * e1.x};
  const Vec3 v = axis * mu + e1 * (st * std::cos(phi)) + e2 * (st * std::sin(phi));
  return normalized(v);
}

}  // namespace nctk
