#include <doctest.h>

#include "nctk/mc.hpp"

using namespace nctk;

namespace {

TransportModel model(PathLengthSpec path, KernelSpec kernel = KernelSpec::isotropic(), double c = 0.5) {
  TransportModel m;
  m.dim = 3;
  m.c = c;
  m.path = std::make_shared<PathLengthDistribution>(path);
  m.kernel = std::make_shared<ScatterKernel>(kernel, 3);
  m.regime = Regime::of(*m.path);
  m.source = SourceSpec::gaussian(1.0);
  return m;
}

McOptions opts(std::uint64_t n, int threads, std::uint64_t seed = 5) {
  McOptions o;
  o.particles = n;
  o.threads = threads;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_SUITE("mc") {
  TEST_CASE("Philox4x32-10 known answers") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(P::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(P::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("random streams") {
    RandomStream a(1, 0), b(1, 0), c(1, 1), d(2, 0);
    for (int i = 0; i < 10; ++i) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      CHECK(x != c.uniform());
      CHECK(x != d.uniform());
    }
    CHECK(a.draws() == 10);
  }

  TEST_CASE("lattice indexing") {
    const HistogramLattice L{3, 5, 0.5};
    CHECK(L.size() == 125);
    CHECK(L.index(Vec3{0, 0, 0}) == 62);
    CHECK(L.index(Vec3{2.0, 0, 0}) == -1);
    CHECK(L.index(Vec3{-1.24, -1.24, -1.24}) == 0);
    const Vec3 c = L.center_of(62);
    CHECK(c.x == 0.0);
    CHECK(L.center_of(0).x == doctest::Approx(-1.0));
    CHECK_THROWS_AS((HistogramLattice{3, 4, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((HistogramLattice{3, 5, 0.0}.validate()), ConfigError);
  }

  TEST_CASE("bad inputs") {
    const auto m = model(PathLengthSpec::power_law(1.5, 1.0));
    CHECK_THROWS_AS(run_chains(m, 0.1, HistogramLattice{3, 5, 0.5}, opts(0, 1)), ConfigError);
    CHECK_THROWS_AS(run_chains(m, 0.1, HistogramLattice{3, 4, 0.5}, opts(10, 1)), ConfigError);
    const auto wide = model(PathLengthSpec::exponential(1.0), KernelSpec::linear(0.95));
    CHECK_THROWS_AS(run_chains(wide, 0.6, HistogramLattice{3, 5, 0.5}, opts(10, 1)), DomainError);
  }

  TEST_CASE("bit-identical across thread counts and runs") {
    const auto m = model(PathLengthSpec::power_law(1.5, 1.0), KernelSpec::linear(0.3));
    const HistogramLattice L{3, 9, 0.5};
    const McResult a = run_chains(m, 0.1, L, opts(9000, 1)), b = run_chains(m, 0.1, L, opts(9000, 4)),
                   c = run_chains(m, 0.1, L, opts(9000, 4));
    CHECK(a.histogram.counts == b.histogram.counts);
    CHECK(a.histogram.sumsq == b.histogram.sumsq);
    CHECK(b.histogram.counts == c.histogram.counts);
    CHECK(a.histogram.outside == b.histogram.outside);
    CHECK(a.stats.mean_cosine == b.stats.mean_cosine);
    CHECK(a.stats.collisions == b.stats.collisions);
    const McResult d = run_chains(m, 0.1, L, opts(9000, 1, 6));
    CHECK(a.histogram.counts != d.histogram.counts);
  }

  TEST_CASE("weight, collisions and cosine") {
    const auto m = model(PathLengthSpec::power_law(1.5, 1.0), KernelSpec::linear(0.3));
    const McResult r = run_chains(m, 0.2, HistogramLattice{3, 9, 0.5}, opts(40000, 2));
    const ChainStats& s = r.stats;
    const double th = theta(m.regime, 0.2);
    CHECK(s.expected_collisions == doctest::Approx(1.0 / (th * 0.5)));
    CHECK(std::abs(s.weight_per_particle - 2.0) <= 3.0 * s.weight_stderr);
    CHECK(std::abs(s.mean_collisions - s.expected_collisions) <= 3.0 * s.collisions_stderr);
    CHECK(std::abs(s.mean_cosine - s.expected_cosine) <= 3.0 * s.cosine_stderr);
    CHECK(s.expected_cosine == doctest::Approx(0.1 / (1.0 - th * 0.5)));
    CHECK(s.weight_correction == 1.0);
    CHECK(s.capped == 0);
    CHECK(r.histogram.total_weight() / double(s.particles) == doctest::Approx(s.weight_per_particle).epsilon(1e-12));
  }

  TEST_CASE("isotropic kernel: mean cosine near zero and exact roulette") {
    const auto m = model(PathLengthSpec::exponential(1.0));
    const McResult r = run_chains(m, 0.1, HistogramLattice{3, 9, 0.5}, opts(20000, 1));
    CHECK(std::abs(r.stats.mean_cosine) <= 3.0 * r.stats.cosine_stderr);
    CHECK(r.stats.expected_cosine == 0.0);
    CHECK(r.stats.weight_correction == 1.0);
  }

  TEST_CASE("density and standard error") {
    CollisionHistogram h;
    h.lattice = HistogramLattice{3, 1, 2.0};
    h.counts = {10};
    h.sumsq = {30};
    h.particles = 5;
    h.theta = 0.1;
    CHECK(h.density(0) == doctest::Approx(0.1 * 10 / (5 * 8.0)));
    // per-particle counts with mean 2 and Σk² = 30: var = (30 - 20)/4
    CHECK(h.stderr_of(0) == doctest::Approx(0.1 * std::sqrt(2.5 / 5) / 8.0));
  }

  TEST_CASE("quantile") {
    CHECK(quantile({3, 1, 2, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({5}, 0.75) == 5);
    CHECK_THROWS_AS(quantile({}, 0.5), DomainError);
  }

  TEST_CASE("displacement scaling with the matched theta" * doctest::timeout(120)) {
    const auto m = model(PathLengthSpec::power_law(1.5, 1.0));
    const ScalingReport ok = displacement_scaling(m, {1e-1, 1e-2, 1e-3}, 4000, 3, 2);
    CHECK(ok.in_band);
    // θ = ε² moves the IQR by about 4^{-1/3} per step here
    const ScalingReport bad = displacement_scaling(m, {0.4, 0.1, 0.025}, 4000, 3, 2, true);
    CAPTURE(bad.ratios[0]);
    CAPTURE(bad.ratios[1]);
    CHECK_FALSE(bad.in_band);
    CHECK_THROWS_AS(displacement_scaling(m, {1e-1, 1e-2}, 10, 1), ConfigError);
  }

  TEST_CASE("displacement scaling, diffusive tail" * doctest::timeout(300)) {
    const auto m = model(PathLengthSpec::power_law(3.0, 1.0));
    // 2e6 collisions per particle at 1e-3, so few particles
    const ScalingReport r = displacement_scaling(m, {1e-1, 1e-2, 1e-3}, 200, 4, 2);
    CAPTURE(r.ratios[0]);
    CAPTURE(r.ratios[1]);
    CHECK(r.in_band);
  }
}
