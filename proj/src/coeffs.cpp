#include "nctk/coeffs.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nctk/quadrature.hpp"

namespace nctk {

Regime Regime::make(RegimeTag tag, double alpha, double d0) {
  Regime r;
  r.tag = tag;
  r.alpha = alpha;
  r.d0 = d0;
  switch (tag) {
    case RegimeTag::DiffusiveTail:
      if (!(alpha > 2.0)) throw DomainError("regime a needs α > 2 (got " + std::to_string(alpha) + ")");
      break;
    case RegimeTag::SuperDiffusiveTail:
      if (!(alpha > 1.0 && alpha < 2.0))
        throw DomainError("regime b needs 1 < α < 2 (got " + std::to_string(alpha) + ")");
      if (!(d0 > 0.0)) throw DomainError("regime b needs d0 > 0");
      break;
    case RegimeTag::Borderline:
      if (alpha != 2.0) throw DomainError("regime c needs α = 2 (got " + std::to_string(alpha) + ")");
      if (!(d0 > 0.0)) throw DomainError("regime c needs d0 > 0");
      break;
  }
  return r;
}

Regime Regime::of(const PathLengthDistribution& d) {
  const double a = d.tail_exponent();
  if (a > 2.0) return make(RegimeTag::DiffusiveTail, a, d.tail_coefficient());
  if (a == 2.0) return make(RegimeTag::Borderline, a, d.tail_coefficient());
  return make(RegimeTag::SuperDiffusiveTail, a, d.tail_coefficient());
}

char Regime::letter() const {
  switch (tag) {
    case RegimeTag::DiffusiveTail: return 'a';
    case RegimeTag::SuperDiffusiveTail: return 'b';
    case RegimeTag::Borderline: return 'c';
  }
  return '?';
}

std::string Regime::describe() const {
  std::ostringstream os;
  os << "regime " << letter() << " (alpha=" << alpha << ", d0=" << d0 << ")";
  return os.str();
}

RegimeTag parse_regime_letter(const std::string& s) {
  if (s == "a") return RegimeTag::DiffusiveTail;
  if (s == "b") return RegimeTag::SuperDiffusiveTail;
  if (s == "c") return RegimeTag::Borderline;
  throw DomainError("unknown regime '" + s + "' (expected a, b or c)");
}

void check_regime(const Regime& r, const PathLengthDistribution& d) {
  const Regime implied = Regime::of(d);
  if (implied.tag != r.tag)
    throw DomainError(r.describe() + " does not match the tail of " + d.name() + " (" + implied.describe() + ")");
  if (r.tag != RegimeTag::DiffusiveTail) {
    if (r.alpha != implied.alpha)
      throw DomainError("regime α = " + std::to_string(r.alpha) + " but " + d.name() + " has α = " +
                        std::to_string(implied.alpha));
    if (std::abs(r.d0 - implied.d0) > 1e-12 * implied.d0)
      throw DomainError("regime d0 = " + std::to_string(r.d0) + " but " + d.name() + " has tail coefficient " +
                        std::to_string(implied.d0));
  }
}

double theta(const Regime& r, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("theta: ε must lie in (0,1)");
  switch (r.tag) {
    case RegimeTag::DiffusiveTail: return eps * eps;
    case RegimeTag::SuperDiffusiveTail: return std::pow(eps, r.alpha);
    case RegimeTag::Borderline: return -eps * eps * std::log(eps);
  }
  return 0.0;
}

double CoefficientSet::limit_coefficient() const {
  const char* what = "";
  std::optional<double> v;
  switch (regime.tag) {
    case RegimeTag::DiffusiveTail: v = D1; what = "D1"; break;
    case RegimeTag::SuperDiffusiveTail: v = D2; what = "D2"; break;
    case RegimeTag::Borderline: v = D3; what = "D3"; break;
  }
  if (!v) throw DomainError(std::string("limit coefficient ") + what + " is undefined for this input");
  return *v;
}

std::string CoefficientSet::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = dim;
  j["regime"] = std::string(1, regime.letter());
  j["alpha"] = std::isfinite(regime.alpha) ? nlohmann::ordered_json(regime.alpha) : nlohmann::ordered_json("inf");
  j["d0"] = regime.d0;
  auto put = [&](const char* key, const std::optional<double>& v) {
    nlohmann::ordered_json e;
    e["value"] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    auto it = provenance.find(key);
    e["formula"] = it == provenance.end() ? "" : it->second;
    j["coefficients"][key] = e;
  };
  put("mu0", mean_cosine);
  put("nu0", nu0);
  put("nu1", nu1);
  put("m1", first_moment);
  put("beta0", beta0);
  put("D0", D0);
  put("D1", D1);
  put("D1_tilde", D1_tilde);
  put("D2", D2);
  put("D3", D3);
  put("D3_printed", D3_printed);
  j["d3_includes_d0"] = d3_includes_d0;
  return j.dump(2);
}

namespace {

// ∫_0^∞ sin²(τμ/2) τ^{-α-1} dτ, cut at T with the averaged tail.
double d2_inner(double mu, double alpha) {
  constexpr double T = 1e4;
  const double tail = 0.5 * std::pow(T, -alpha) / alpha;
  mu = std::abs(mu);
  if (mu == 0.0) return tail;
  auto f = [&](double t) {
    const double x = 0.5 * t * mu;
    if (x < 1e-8) return 0.25 * mu * mu * std::pow(t, 1.0 - alpha);
    const double s = std::sin(x);
    return s * s * std::pow(t, -alpha - 1.0);
  };
  const double half = kPi / mu;  // sin² has period 2π/μ
  const double first = std::min(T, half);
  boost::math::quadrature::tanh_sinh<double> ts;
  double v = ts.integrate(f, 0.0, first, 1e-14);
  const GaussRule& g = gl16();
  for (double a = first; a < T;) {
    const double b = std::min(T, a + half);
    double part = 0.0;
    for (int k = 0; k < g.size(); ++k) part += g.w[k] * f(0.5 * (a + b) + 0.5 * (b - a) * g.x[k]);
    v += 0.5 * (b - a) * part;
    a = b;
  }
  return v + tail;
}

std::mutex g_d2_mutex;
std::map<std::pair<double, int>, double> g_d2_cache;

}  // namespace

double d2_coefficient(double alpha, double d0, int dim) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("D2 is defined for 1 < α < 2 only");
  if (dim != 2 && dim != 3) throw DomainError("D2: dimension must be 2 or 3");
  {
    std::lock_guard<std::mutex> lock(g_d2_mutex);
    auto it = g_d2_cache.find({alpha, dim});
    if (it != g_d2_cache.end()) return d0 * it->second;
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  double unit;
  if (dim == 3) {
    // unit measure on S²: dv = dμ/2 (azimuth integrated); even in μ
    unit = 2.0 * ts.integrate([&](double mu) { return d2_inner(mu, alpha); }, 0.0, 1.0, 1e-12);
  } else {
    // unit measure on S¹: dφ/2π; four symmetric quarters
    unit = 2.0 * (2.0 / kPi) *
           ts.integrate([&](double p) { return d2_inner(std::cos(p), alpha); }, 0.0, 0.5 * kPi, 1e-12);
  }
  std::lock_guard<std::mutex> lock(g_d2_mutex);
  g_d2_cache[{alpha, dim}] = unit;
  return d0 * unit;
}

CoefficientSet compute_coefficients(const PathLengthDistribution& d, const ScatterKernel& k,
                                    const DirectionQuadrature& q, const Regime& regime,
                                    const CoefficientOptions& opt) {
  if (k.dimension() != q.dim) throw DomainError("compute_coefficients: kernel and quadrature dimensions differ");
  d.require_normalized("compute_coefficients");
  check_regime(regime, d);

  CoefficientSet c;
  c.dim = q.dim;
  c.regime = regime;
  c.d3_includes_d0 = opt.d3_includes_d0;
  auto& prov = c.provenance;

  c.mean_cosine = mean_cosine(k, q);
  prov["mu0"] = "∫ σ(v·v') (v·v') dv (direction quadrature)";
  c.nu0 = 1.0 / (1.0 - c.mean_cosine);
  prov["nu0"] = "1/(1 - mu0)";
  c.first_moment = d.first_moment();
  prov["m1"] = "∫ s p(s) ds";
  c.nu1 = c.first_moment * c.first_moment * c.mean_cosine / (1.0 - c.mean_cosine);
  prov["nu1"] = "m1^2 mu0/(1 - mu0)";
  c.beta0 = d.beta0();
  prov["beta0"] = "∫ (1 - F(s)) ds";

  const Vec3 e = q.dim == 3 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  c.second_angular = q.integrate([&](const Vec3& v) { return dot(v, e) * dot(v, e); });

  if (d.finite_second_moment()) {
    c.D0 = d.second_moment();
    prov["D0"] = "∫ s^2 p(s) ds";
    c.D1_tilde = 0.5 * c.second_angular * *c.D0;
    prov["D1_tilde"] = "(1/2) ∫(v·e)^2 dv · D0";
    c.D1 = c.second_angular * c.nu1 + *c.D1_tilde;
    prov["D1"] = "∫(v·e)^2 dv · nu1 + (1/2) ∫(v·e)^2 dv · D0";
    if (!(*c.D1 > 0.0)) warn("D1 = " + std::to_string(*c.D1) + " is not positive (mu0 = " +
                             std::to_string(c.mean_cosine) + ")");
  }
  if (regime.tag == RegimeTag::SuperDiffusiveTail) {
    c.D2 = d2_coefficient(regime.alpha, regime.d0, q.dim);
    prov["D2"] = "2 d0 ∫∫ sin^2(τ(v·e)/2) τ^{-α-1} dτ dv (nested adaptive quadrature)";
  }
  c.D3_printed = 0.5 * c.second_angular;
  prov["D3_printed"] = "(1/2) ∫(v·e)^2 dv";
  if (regime.tag == RegimeTag::Borderline) {
    c.D3 = (opt.d3_includes_d0 ? regime.d0 : 1.0) * c.D3_printed;
    prov["D3"] = opt.d3_includes_d0 ? "d0 (1/2) ∫(v·e)^2 dv" : "(1/2) ∫(v·e)^2 dv";
  }
  return c;
}

}  // namespace nctk
