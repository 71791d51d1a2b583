#include "nctk/tail_transform.hpp"

#include <cmath>

#include "nctk/quadrature.hpp"

namespace nctk {

namespace {

// ∫_T^∞ e^{-iτ} τ^{-β} dτ from the asymptotic series obtained by repeated
// integration by parts; T must be large compared with β.
cplx oscillatory_tail(double beta, double T) {
  const cplx I(0.0, 1.0);
  cplx term = 1.0, sum = 0.0;
  double prev = 1e300;
  for (int k = 0; k < 200; ++k) {
    const double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic series started to diverge
    sum += term;
    if (mag < 1e-18 * std::abs(sum)) break;
    prev = mag;
    term *= I * (beta + k) / T;
  }
  return -I * std::exp(-I * T) * std::pow(T, -beta) * sum;
}

constexpr double kAsymptoticStart = 200.0;

}  // namespace

cplx tail_J(double beta, double a) {
  if (!(a >= 1.0)) throw DomainError("tail_J: need a >= 1");
  if (!(beta > 1.0)) throw DomainError("tail_J: need beta > 1");
  const cplx I(0.0, 1.0);
  const double T = std::max(a, kAsymptoticStart + std::floor(beta));
  cplx osc = 0.0;
  const GaussRule& g = gl16();
  double t = a;
  while (t < T) {
    // keep τ^{-β} within a factor e^4 across a panel and resolve the oscillation
    const double h = std::min({0.5 * kPi, 4.0 * t / beta, T - t});
    for (int k = 0; k < g.size(); ++k) {
      const double tau = t + 0.5 * h * (1.0 + g.x[k]);
      osc += 0.5 * h * g.w[k] * std::exp(-I * tau) * std::pow(tau, -beta);
    }
    t += h;
  }
  osc += oscillatory_tail(beta, T);
  return osc - std::pow(a, 1.0 - beta) / (beta - 1.0);
}

cplx power_tail_increment(double beta, double z, double S, cplx J1) {
  if (z == 0.0) return 0.0;
  const double az = std::abs(z);
  const double a = az * S;
  cplx r;
  if (a > 1.0) {
    r = std::pow(az, beta - 1.0) * tail_J(beta, a);
  } else {
    // J(β,a) = J(β,1) + Σ_k (-i)^k/k! ∫_a^1 τ^{k-β} dτ, each term scaled by |z|^{β-1}
    const double lz = std::log(az), lS = std::log(S), la = std::log(a);
    const double zb = std::exp((beta - 1.0) * lz);
    r = zb * J1;
    cplx ck = 1.0;
    for (int k = 1; k <= 40; ++k) {
      ck *= cplx(0.0, -1.0) / double(k);
      const double e = k - beta + 1.0;
      double term;
      if (std::abs(e * la) < 0.5)
        term = (e == 0.0) ? -zb * la : -zb * std::expm1(e * la) / e;
      else
        term = (zb - std::exp(k * lz + e * lS)) / e;
      const cplx add = ck * term;
      r += add;
      if (k > beta + 2 && std::abs(add) < 1e-18 * std::abs(r)) break;
    }
  }
  return z < 0.0 ? std::conj(r) : r;
}

cplx uniform_block_increment(double c, double b, double z) {
  if (z == 0.0) return 0.0;
  const double y = z * b;
  double y_minus_sin;
  if (std::abs(y) < 0.5) {
    // y - sin y = y^3/3! - y^5/5! + ...
    const double y2 = y * y;
    double term = y * y2 / 6.0, s = 0.0;
    for (int k = 1; k < 12; ++k) {
      s += term;
      term *= -y2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    y_minus_sin = s;
  } else {
    y_minus_sin = y - std::sin(y);
  }
  const double h = std::sin(0.5 * y);
  return {-c * b * y_minus_sin / y, -c * b * 2.0 * h * h / y};
}

}  // namespace nctk
