#include "nctk/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "nctk/common.hpp"

namespace nctk {

namespace {
// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}
}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule r;
  if (n == 1) {
    r.x = {0.0};
    r.w = {2.0};
    return r;
  }
  r.x.assign(n, 0.0);
  r.w.assign(n, 0.0);
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    double p = 0.0, dp = 1.0;
    legendre(n, 0.0, p, dp);
    r.w[n / 2] = 2.0 / (dp * dp);
  }
  return r;
}

const GaussRule& gl16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err);
}

double integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& breaks,
                        double rel_tol) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) s += integrate(f, breaks[i], breaks[i + 1], rel_tol);
  return s;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels) {
  const GaussRule& g = gl16();
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double part = 0.0;
    for (int k = 0; k < g.size(); ++k) part += g.w[k] * f(mid + 0.5 * h * g.x[k]);
    s += 0.5 * h * part;
  }
  return s;
}

}  // namespace nctk
