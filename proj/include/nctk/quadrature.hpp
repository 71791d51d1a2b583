#pragma once

#include <functional>
#include <vector>

namespace nctk {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

GaussRule gauss_legendre(int n);

// Shared 16-point rule, built once.
const GaussRule& gl16();

// Adaptive Gauss-Kronrod on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

// Sum of adaptive integrals over consecutive breakpoints.
double integrate_pieces(const std::function<double(double)>& f,
                        const std::vector<double>& breaks, double rel_tol = 1e-13);

// Fixed 16-point Gauss-Legendre over [a, b] split into `panels` equal pieces.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels = 1);

}  // namespace nctk
