#include <doctest.h>

#include <random>

#include "nctk/quadrature.hpp"
#include "nctk/symbol.hpp"

using namespace nctk;

namespace {
constexpr double kD2Golden = 0.66843420656979331;
}

TEST_SUITE("symbol_lambda") {
  TEST_CASE("w_hat") {
    const PathLengthDistribution e(PathLengthSpec::exponential(1.0));
    const Regime r = Regime::of(e);
    const Vec3 v = normalized(Vec3{1, -1, 2});
    CHECK(std::abs(w_hat(e, Vec3{}, v, 0.1, r)) == 0.0);
    for (double eps : {0.3, 0.01, 1e-4})
      for (double k : {0.5, 3.0}) {
        const Vec3 xi{0.2 * k, 0.5 * k, -k};
        const cplx expect = (1.0 / cplx(1.0, eps * dot(v, xi)) - 1.0) / theta(r, eps);
        CHECK(std::abs(w_hat(e, xi, v, eps, r) - expect) <= 1e-10 * std::abs(expect));
      }
    std::mt19937_64 g(8);
    std::normal_distribution<double> n;
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    for (int t = 0; t < 50; ++t) {
      const Vec3 xi{3 * n(g), 3 * n(g), 3 * n(g)};
      CHECK(w_hat(b, xi, normalized(Vec3{n(g), n(g), n(g)}), 0.05, Regime::of(b)).real() <= 0.0);
    }
  }

  TEST_CASE("W = 1 + θŵ") {
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    const Regime r = Regime::of(b);
    const Vec3 v{0, 0, 1}, xi{0, 0, 2.0};
    const double eps = 0.2;
    const cplx W = b.characteristic(eps * dot(v, xi));
    const cplx direct = integrate([&](double s) { return b.pdf(s) * std::cos(eps * 2.0 * s); }, 0.0, 1.0) +
                        integrate([&](double u) {
                          const double s = 1.0 / u;
                          return b.pdf(s) * std::cos(eps * 2.0 * s) / (u * u);
                        }, 1e-9, 1.0, 1e-12);
    CHECK(std::abs(W - (1.0 + theta(r, eps) * w_hat(b, xi, v, eps, r))) < 1e-10);
    CHECK(W.real() == doctest::Approx(direct.real()).epsilon(1e-6));
  }

  TEST_CASE("lambda at zero and evenness") {
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    const Regime r = Regime::of(b);
    const auto q = make_quadrature(3, 8);
    const ScatterKernel k(KernelSpec::linear(0.4), 3);
    const Vec3 vp = normalized(Vec3{0.1, 0.7, -0.3});
    CHECK(lambda_eps(b, &k, Vec3{}, vp, 0.01, r, q) == 0.0);
    CHECK(lambda_eps_isotropic(b, 0.0, 0.01, r, 3) == 0.0);
    const Vec3 xi{0.4, -1.2, 0.9};
    CHECK(std::abs(lambda_eps(b, &k, xi, vp, 0.01, r, q) - lambda_eps(b, &k, xi * -1.0, vp, 0.01, r, q)) < 1e-10);
  }

  TEST_CASE("constant κ: no dependence on v'") {
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    const auto q = make_quadrature(3, 8);
    const Vec3 xi{0.3, 0.2, 1.1};
    std::mt19937_64 g(2);
    std::normal_distribution<double> n;
    double lo = 1e9, hi = -1e9;
    for (int t = 0; t < 6; ++t) {
      const double v = lambda_eps(b, nullptr, xi, normalized(Vec3{n(g), n(g), n(g)}), 0.01, Regime::of(b), q);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo <= 1e-8);
  }

  TEST_CASE("quadrature and adaptive lambda agree for smooth symbols") {
    const PathLengthDistribution e(PathLengthSpec::exponential(1.0));
    const auto q = make_quadrature(3, 12);
    const double a = lambda_eps(e, nullptr, Vec3{0, 0, 1.3}, Vec3{1, 0, 0}, 0.1, Regime::of(e), q);
    CHECK(a == doctest::Approx(lambda_eps_isotropic(e, 1.3, 0.1, Regime::of(e), 3)).epsilon(1e-9));
  }

  TEST_CASE("α = 1.5 approaches -D2 monotonically") {
    const PathLengthDistribution b(PathLengthSpec::power_law(1.5, 1.0));
    const Regime r = Regime::of(b);
    const LambdaLimit L = lambda_limit(b, r, 3);
    CHECK(L.coefficient == doctest::Approx(kD2Golden).epsilon(1e-9));
    double prev = 1e9;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double err = std::abs(lambda_eps_isotropic(b, 1.0, eps, r, 3) + kD2Golden);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev / kD2Golden <= 0.02);
  }

  TEST_CASE("α = 3 limit and the 2 D0 |ξ|² bound") {
    const PathLengthDistribution a(PathLengthSpec::power_law(3.0, 1.0));
    const Regime r = Regime::of(a);
    const double D0 = a.second_moment();
    const LambdaLimit L = lambda_limit(a, r, 3);
    CHECK(L.coefficient == doctest::Approx(D0 / 6).epsilon(1e-12));
    for (double k : {0.1, 1.0, 10.0})
      for (double eps : {0.3, 1e-2, 1e-4}) CHECK(std::abs(lambda_eps_isotropic(a, k, eps, r, 3)) <= 2 * D0 * k * k);
    CHECK(std::abs(lambda_eps_isotropic(a, 1.0, 1e-4, r, 3) - L.value(1.0)) < 1e-3 * L.coefficient);
  }

  TEST_CASE("α = 2: the limit with d0 is the one approached") {
    const PathLengthDistribution c(PathLengthSpec::power_law(2.0, 0.5));
    const Regime r = Regime::of(c);
    const double with = lambda_limit(c, r, 3, true).value(1.0), without = lambda_limit(c, r, 3, false).value(1.0);
    const double lam = lambda_eps_isotropic(c, 1.0, 1e-64, r, 3);
    CHECK(std::abs(lam - with) / std::abs(with) <= 0.02);
    CHECK(std::abs(lam - without) / std::abs(without) > 0.4);
    CHECK(lam < 0.0);  // sign of the limit
  }

  TEST_CASE("bounds on a 10 x 10 grid for each regime") {
    const auto eps = logspace(1e-4, 1e-1, 10);
    auto xi = logspace(0.1, 10.0, 10);
    xi.insert(xi.begin(), 0.0);
    for (auto spec : {PathLengthSpec::power_law(3.0, 1.0), PathLengthSpec::power_law(1.5, 1.0),
                      PathLengthSpec::power_law(2.0, 0.5)}) {
      const PathLengthDistribution d(spec);
      const BoundsReport rep = verify_bounds(d, Regime::of(d), 3, eps, xi);
      CAPTURE(d.name());
      CHECK(rep.all_pass);
      CHECK(rep.rows.size() == eps.size() * xi.size());
      for (const auto& row : rep.rows) {
        if (row.xi_norm == 0.0) {
          CHECK(row.lambda == 0.0);
          CHECK(row.abs_error == 0.0);
        }
      }
      CHECK(rep.empirical_c0 > 0.0);
    }
    const PathLengthDistribution c(PathLengthSpec::power_law(2.0, 0.5));
    CHECK_THROWS_AS(verify_bounds(c, Regime::of(c), 3, {0.6}, {1.0}), DomainError);
  }

  TEST_CASE("logspace") {
    const auto v = logspace(1e-3, 1e-1, 3);
    CHECK(v[0] == doctest::Approx(1e-3));
    CHECK(v[1] == doctest::Approx(1e-2));
    CHECK(v[2] == doctest::Approx(1e-1));
  }
}
