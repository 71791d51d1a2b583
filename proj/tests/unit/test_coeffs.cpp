#include <doctest.h>

#include <random>

#include "nctk/coeffs.hpp"
#include "nctk/quadrature.hpp"

using namespace nctk;

namespace {

// frozen output of tests/oracles/d2_oracle.py (α = 1.5, d0 = 1, n = 3, cutoff 1e4)
constexpr double kD2Golden = 0.66843420656979331;

// Midpoint sums in τ (τ = t² on (0,1]) and Gauss-Legendre in μ, same cutoff
// convention as the oracle script. Independent of the library's D2 code.
double d2_riemann(double alpha, double d0) {
  const double T = 1e4;
  const GaussRule g = gauss_legendre(24);
  std::vector<double> tau, wt;
  const int nt = 40000;
  for (int i = 0; i < nt; ++i) {
    const double t = (i + 0.5) / nt;
    tau.push_back(t * t);
    wt.push_back(std::pow(t * t, -alpha - 1) * 2 * t / nt);
  }
  const double h = 4e-3;
  const long n1 = std::lround((T - 1.0) / h);
  for (long i = 0; i < n1; ++i) {
    const double s = 1.0 + (i + 0.5) * h;
    tau.push_back(s);
    wt.push_back(std::pow(s, -alpha - 1) * h);
  }
  double total = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    const double mu = 0.5 * (g.x[std::size_t(k)] + 1.0), wm = 0.5 * g.w[std::size_t(k)];
    double inner = 0.5 * std::pow(T, -alpha) / alpha;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double sn = std::sin(0.5 * tau[i] * mu);
      inner += sn * sn * wt[i];
    }
    total += wm * inner;
  }
  return 2.0 * d0 * total;
}

}  // namespace

TEST_SUITE("coeffs") {
  TEST_CASE("theta per regime") {
    const PathLengthDistribution a(PathLengthSpec::power_law(3, 1)), b(PathLengthSpec::power_law(1.5, 1)),
        c(PathLengthSpec::power_law(2, 0.5));
    CHECK(theta(Regime::of(a), 0.1) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(theta(Regime::of(b), 0.01) == doctest::Approx(0.001).epsilon(1e-14));
    CHECK(theta(Regime::of(c), 0.1) == doctest::Approx(0.01 * std::log(10.0)).epsilon(1e-15));
    CHECK(Regime::of(a).letter() == 'a');
    CHECK(Regime::of(b).letter() == 'b');
    CHECK(Regime::of(c).letter() == 'c');
    CHECK(Regime::of(PathLengthDistribution(PathLengthSpec::exponential(1))).letter() == 'a');
  }

  TEST_CASE("regime consistency") {
    CHECK_THROWS_AS(Regime::make(RegimeTag::DiffusiveTail, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(Regime::make(RegimeTag::Borderline, 2.5, 1.0), DomainError);
    CHECK_THROWS_AS(parse_regime_letter("d"), DomainError);
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1));
    CHECK_THROWS_AS(check_regime(Regime::make(RegimeTag::SuperDiffusiveTail, 1.6, 1.0), b), DomainError);
    CHECK_NOTHROW(check_regime(Regime::make(RegimeTag::SuperDiffusiveTail, 1.5, 1.0), b));
  }

  TEST_CASE("exponential isotropic goldens") {
    const PathLengthDistribution d(PathLengthSpec::exponential(1.0));
    const ScatterKernel k(KernelSpec::isotropic(), 3);
    const auto cs = compute_coefficients(d, k, make_quadrature(3), Regime::of(d));
    CHECK(std::abs(*cs.D0 - 2.0) < 1e-8);
    CHECK(std::abs(cs.nu1) < 1e-8);
    CHECK(std::abs(*cs.D1 - 1.0 / 3) < 1e-8);
    CHECK(std::abs(0.5 * cs.second_angular - 1.0 / 6) < 1e-10);
    CHECK(std::abs(cs.D3_printed - 1.0 / 6) < 1e-10);
    CHECK(cs.limit_coefficient() == *cs.D1);
  }

  TEST_CASE("rate scaling and dimension 2") {
    const PathLengthDistribution d(PathLengthSpec::exponential(2.0));
    const auto cs = compute_coefficients(d, ScatterKernel(KernelSpec::isotropic(), 2), make_quadrature(2),
                                         Regime::of(d));
    CHECK(*cs.D0 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(*cs.D1 == doctest::Approx(0.125).epsilon(1e-10));  // 1/(nλ²)
  }

  TEST_CASE("anisotropic kernel: D1 = <μ²>ν1 + D0/(2n)") {
    const PathLengthDistribution d(PathLengthSpec::exponential(1.0));
    for (double a : {0.3, -0.3}) {
      const auto cs = compute_coefficients(d, ScatterKernel(KernelSpec::linear(a), 3), make_quadrature(3), Regime::of(d));
      CHECK(cs.mean_cosine == doctest::Approx(a / 3).epsilon(1e-12));
      CHECK(*cs.D1 == doctest::Approx(cs.nu1 / 3 + *cs.D0 / 6).epsilon(1e-12));
      CHECK(*cs.D1 > 0.0);
      if (a < 0) CHECK(cs.nu1 < 0.0);
    }
  }

  TEST_CASE("D2 golden and closed forms") {
    CHECK(d2_coefficient(1.5, 1.0, 3) == doctest::Approx(kD2Golden).epsilon(1e-9));
    CHECK(d2_coefficient(1.5, 0.5, 3) == doctest::Approx(0.5 * kD2Golden).epsilon(1e-9));
    // without the cutoff, D2 = 2 d0 C(α) ∫|v·e|^α dv with C(α) = π/(4Γ(α+1)sin(πα/2))
    for (double alpha : {1.2, 1.5, 1.8}) {
      const double C = kPi / (4 * std::tgamma(alpha + 1) * std::sin(kPi * alpha / 2));
      const double m3 = 1.0 / (alpha + 1);
      const double m2 = std::tgamma((alpha + 1) / 2) / (std::sqrt(kPi) * std::tgamma(alpha / 2 + 1));
      CHECK(d2_coefficient(alpha, 1.0, 3) == doctest::Approx(2 * C * m3).epsilon(1e-4));
      CHECK(d2_coefficient(alpha, 1.0, 2) == doctest::Approx(2 * C * m2).epsilon(1e-4));
    }
    CHECK_THROWS_AS(d2_coefficient(2.0, 1.0, 3), DomainError);
  }

  TEST_CASE("D2 against an independent Riemann sum") {
    CHECK(std::abs(d2_riemann(1.5, 1.0) - kD2Golden) < 1e-7);
  }

  TEST_CASE("D2 does not depend on the direction e") {
    // the full double integral on a fine rule in random frames
    std::mt19937_64 g(42);
    std::normal_distribution<double> n;
    const auto q = make_quadrature(3, 48);
    const double alpha = 1.5, C = kPi / (4 * std::tgamma(alpha + 1) * std::sin(kPi * alpha / 2));
    std::vector<double> vals;
    for (int t = 0; t < 5; ++t) {
      const Vec3 e = normalized(Vec3{n(g), n(g), n(g)});
      vals.push_back(2 * C * q.integrate([&](const Vec3& v) { return std::pow(std::abs(dot(v, e)), alpha); }));
    }
    for (double v : vals) CHECK(v == doctest::Approx(vals.front()).epsilon(1e-5));
    CHECK(vals.front() == doctest::Approx(d2_coefficient(1.5, 1.0, 3)).epsilon(1e-4));
  }

  TEST_CASE("heavy-tail coefficient sets") {
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    const auto cb = compute_coefficients(b, ScatterKernel(KernelSpec::isotropic(), 3), make_quadrature(3), Regime::of(b));
    CHECK(cb.D2.has_value());
    CHECK_FALSE(cb.D0.has_value());
    CHECK(cb.limit_coefficient() == doctest::Approx(kD2Golden).epsilon(1e-9));

    const PathLengthDistribution c(PathLengthSpec::power_law(2.0, 0.5));
    CoefficientOptions on, off;
    off.d3_includes_d0 = false;
    const auto c_on = compute_coefficients(c, ScatterKernel(KernelSpec::isotropic(), 3), make_quadrature(3),
                                           Regime::of(c), on);
    const auto c_off = compute_coefficients(c, ScatterKernel(KernelSpec::isotropic(), 3), make_quadrature(3),
                                            Regime::of(c), off);
    CHECK(*c_on.D3 == doctest::Approx(0.5 / 6).epsilon(1e-12));
    CHECK(*c_off.D3 == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(c_on.D3_printed == doctest::Approx(1.0 / 6).epsilon(1e-12));
  }

  TEST_CASE("pure function and json summary") {
    const PathLengthDistribution d(PathLengthSpec::power_law(3.0, 1.0));
    const ScatterKernel k(KernelSpec::linear(0.2), 3);
    const auto a = compute_coefficients(d, k, make_quadrature(3), Regime::of(d));
    const auto b = compute_coefficients(d, k, make_quadrature(3), Regime::of(d));
    CHECK(a.to_json() == b.to_json());
    CHECK(*a.D1 == *b.D1);
    CHECK(a.to_json().find("\"D1\"") != std::string::npos);
    CHECK(a.provenance.count("D1") == 1);
    CHECK(a.beta0 == doctest::Approx(a.first_moment).epsilon(1e-10));
  }
}
