#include "nctk/symbol.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace nctk {

cplx w_hat(const PathLengthDistribution& d, const Vec3& xi, const Vec3& v, double eps, const Regime& r) {
  return d.increment(eps * dot(v, xi)) / theta(r, eps);
}

double lambda_eps(const PathLengthDistribution& d, const ScatterKernel* kappa, const Vec3& xi, const Vec3& vprime,
                  double eps, const Regime& r, const DirectionQuadrature& q) {
  const double th = theta(r, eps);
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double kv = kappa ? kappa->sigma(std::clamp(dot(q.nodes[j], vprime), -1.0, 1.0)) : 1.0;
    s += q.weights[j] * kv * d.increment(eps * dot(q.nodes[j], xi)).real();
  }
  return s / th;
}

double lambda_eps_isotropic(const PathLengthDistribution& d, double xi_norm, double eps, const Regime& r, int dim) {
  const double th = theta(r, eps);
  if (xi_norm == 0.0) return 0.0;
  const double z = eps * xi_norm;
  boost::math::quadrature::tanh_sinh<double> ts;
  double v;
  if (dim == 3) {
    v = ts.integrate([&](double mu) { return d.increment(z * mu).real(); }, 0.0, 1.0, 1e-12);
  } else if (dim == 2) {
    v = (2.0 / kPi) * ts.integrate([&](double p) { return d.increment(z * std::cos(p)).real(); }, 0.0,
                                    0.5 * kPi, 1e-12);
  } else {
    throw DomainError("lambda_eps_isotropic: dimension must be 2 or 3");
  }
  return v / th;
}

LambdaLimit lambda_limit(const PathLengthDistribution& d, const Regime& r, int dim, bool d3_includes_d0) {
  LambdaLimit L;
  const double m2 = 1.0 / dim;  // ∫(v·e)² dv
  switch (r.tag) {
    case RegimeTag::DiffusiveTail:
      L.coefficient = 0.5 * m2 * d.second_moment();
      L.exponent = 2.0;
      break;
    case RegimeTag::SuperDiffusiveTail:
      L.coefficient = d2_coefficient(r.alpha, r.d0, dim);
      L.exponent = r.alpha;
      break;
    case RegimeTag::Borderline:
      L.coefficient = (d3_includes_d0 ? r.d0 : 1.0) * 0.5 * m2;
      L.exponent = 2.0;
      break;
  }
  return L;
}

double lambda_bound(const PathLengthDistribution& d, const Regime& r, int dim, double eps, double xi_norm) {
  if (xi_norm == 0.0) return 0.0;
  const double x2 = xi_norm * xi_norm;
  switch (r.tag) {
    case RegimeTag::DiffusiveTail: return 2.0 * d.second_moment() * x2;
    case RegimeTag::SuperDiffusiveTail: {
      const double a = r.alpha, ex = eps * xi_norm;
      const double core = std::min(0.5 * std::pow(ex, 2.0 - a), 2.0 * std::pow(ex, -a));
      return (core + r.d0 * (2.0 / a + 1.0 / (2.0 * (2.0 - a)))) * std::pow(xi_norm, a);
    }
    case RegimeTag::Borderline: {
      const double m2 = 1.0 / dim;
      const double lg = std::max(0.0, std::log(1.0 / (eps * xi_norm)));
      return x2 * (2.0 + r.d0 + 0.5 * r.d0 * m2 * lg) / std::abs(std::log(eps));
    }
  }
  return 0.0;
}

BoundsReport verify_bounds(const PathLengthDistribution& d, const Regime& r, int dim,
                           const std::vector<double>& eps_list, const std::vector<double>& xi_list,
                           bool d3_includes_d0) {
  check_regime(r, d);
  BoundsReport rep;
  const LambdaLimit lim = lambda_limit(d, r, dim, d3_includes_d0);
  for (double eps : eps_list) {
    if (r.tag == RegimeTag::Borderline && eps > 0.5)
      throw DomainError("verify_bounds: borderline sweeps need ε ≤ 0.5");
    for (double xn : xi_list) {
      BoundRow row;
      row.regime = r.letter();
      row.alpha = r.alpha;
      row.eps = eps;
      row.xi_norm = xn;
      row.lambda = lambda_eps_isotropic(d, xn, eps, r, dim);
      row.bound = lambda_bound(d, r, dim, eps, xn);
      row.limit_value = lim.value(xn);
      row.abs_error = std::abs(row.lambda - row.limit_value);
      row.pass = row.lambda <= 0.0 && std::abs(row.lambda) <= row.bound * (1.0 + 1e-12);
      rep.all_pass = rep.all_pass && row.pass;
      if (xn > 0.0) rep.empirical_c0 = std::max(rep.empirical_c0, std::abs(row.lambda) / std::pow(xn, lim.exponent));
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  if (n == 1) return {a};
  const double la = std::log10(a), lb = std::log10(b);
  for (int i = 0; i < n; ++i) v.push_back(std::pow(10.0, la + (lb - la) * i / (n - 1)));
  return v;
}

}  // namespace nctk
