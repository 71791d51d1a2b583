#include <doctest.h>

#include <random>

#include "nctk/quadrature.hpp"
#include "nctk/sphere.hpp"

using namespace nctk;

namespace {
Vec3 random_unit(std::mt19937_64& g, int dim) {
  std::normal_distribution<double> n;
  Vec3 v{n(g), n(g), dim == 3 ? n(g) : 0.0};
  return normalized(v);
}
}  // namespace

TEST_SUITE("sphere") {
  TEST_CASE("weights sum to one and nodes are unit vectors") {
    for (int dim : {2, 3})
      for (int order : {4, 5, 8, 16}) {
        const auto q = make_quadrature(dim, order);
        double s = 0.0;
        for (double w : q.weights) s += w;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
        for (const auto& v : q.nodes) CHECK(std::abs(norm(v) - 1.0) < 1e-12);
        if (dim == 2)
          for (const auto& v : q.nodes) CHECK(v.z == 0.0);
      }
  }

  TEST_CASE("second moments are 1/3 and 1/2") {
    CHECK(make_quadrature(3).integrate([](const Vec3& v) { return v.z * v.z; }) ==
          doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(make_quadrature(2).integrate([](const Vec3& v) { return v.x * v.x; }) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("odd moments vanish") {
    for (int dim : {2, 3}) {
      const auto q = make_quadrature(dim, 6);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(q.integrate([k](const Vec3& v) { return v[k]; })) < 1e-12);
    }
  }

  TEST_CASE("(v.e)^2 does not depend on e") {
    std::mt19937_64 g(7);
    for (int dim : {2, 3}) {
      const auto q = make_quadrature(dim);
      for (int t = 0; t < 10; ++t) {
        const Vec3 e = random_unit(g, dim);
        const double m = q.integrate([&](const Vec3& v) { return dot(v, e) * dot(v, e); });
        CHECK(std::abs(m - second_moment_exact(dim)) < 1e-10);
      }
    }
  }

  TEST_CASE("default order integrates degree 8 exactly") {
    const auto q = make_quadrature(3);
    CHECK(q.exact_degree() >= 8);
    // monomials x^a y^b z^c on S^2: (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!! for even a, b, c
    auto dfact = [](int n) {
      double r = 1;
      for (int k = n; k > 1; k -= 2) r *= k;
      return r;
    };
    for (int a = 0; a <= 8; a += 2)
      for (int b = 0; a + b <= 8; b += 2)
        for (int c = 0; a + b + c <= 8; c += 2) {
          const double exact = dfact(a - 1) * dfact(b - 1) * dfact(c - 1) / dfact(a + b + c + 1);
          const double got = q.integrate([&](const Vec3& v) {
            return std::pow(v.x, a) * std::pow(v.y, b) * std::pow(v.z, c);
          });
          CHECK(got == doctest::Approx(exact).epsilon(1e-12));
        }
    // n = 2: cos^8 averages to 35/128
    CHECK(make_quadrature(2).integrate([](const Vec3& v) { return std::pow(v.x, 8); }) ==
          doctest::Approx(35.0 / 128).epsilon(1e-13));
  }

  TEST_CASE("azimuths are twice the polar node count") {
    const auto q = make_quadrature(3, 4);
    CHECK(q.mu.size() == 8);
    CHECK(q.azimuths == 16);
    CHECK(q.size() == 128);
  }

  TEST_CASE("bad arguments") {
    CHECK_THROWS_AS(make_quadrature(4), DomainError);
    CHECK_THROWS_AS(make_quadrature(3, 0), DomainError);
  }

  TEST_CASE("rotate_about keeps the cosine") {
    std::mt19937_64 g(3);
    for (int dim : {2, 3})
      for (int t = 0; t < 20; ++t) {
        const Vec3 e = random_unit(g, dim);
        const double mu = std::uniform_real_distribution<double>(-1, 1)(g);
        const double phi = std::uniform_real_distribution<double>(0, 2 * kPi)(g);
        const Vec3 v = rotate_about(e, mu, phi, dim);
        CHECK(std::abs(norm(v) - 1.0) < 1e-12);
        CHECK(std::abs(dot(v, e) - mu) < 1e-12);
      }
  }

  TEST_CASE("gauss legendre and adaptive integration") {
    const auto r = gauss_legendre(10);
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i) s += r.w[std::size_t(i)] * std::pow(r.x[std::size_t(i)], 18);
    CHECK(s == doctest::Approx(2.0 / 19).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
          doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-13));
    CHECK(integrate_gl([](double x) { return std::sin(x); }, 0.0, kPi, 8) == doctest::Approx(2.0).epsilon(1e-13));
  }
}
