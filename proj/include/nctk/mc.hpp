#pragma once

#include <cstdint>
#include <vector>

#include "nctk/spectral.hpp"

namespace nctk {

// Cubic bins of side `width`, `bins` per axis (odd), centered on the origin,
// so bin centers sit at (b - (bins-1)/2) * width.
struct HistogramLattice {
  int dim = 3;
  int bins = 25;
  double width = 0.5;

  void validate() const;
  std::size_t size() const;
  double volume() const;
  double center(int b) const { return (b - (bins - 1) / 2) * width; }
  // Flat index (axis 0 slowest), or -1 outside.
  long index(const Vec3& x) const;
  Vec3 center_of(std::size_t flat) const;
};

struct CollisionHistogram {
  HistogramLattice lattice;
  std::vector<std::uint64_t> counts;  // collisions per bin
  std::vector<std::uint64_t> sumsq;   // Σ over particles of (collisions in bin)²
  std::uint64_t particles = 0;
  std::uint64_t outside = 0;  // collisions that fell off the lattice
  double theta = 0.0;         // weight per collision

  // Collision density θ·count/(N·volume) and its standard error, from the
  // per-particle spread (histories are independent, collisions are not).
  double density(std::size_t i) const;
  double stderr_of(std::size_t i) const;
  double total_weight() const;
};

struct ChainStats {
  std::uint64_t particles = 0;
  std::uint64_t collisions = 0;
  std::uint64_t max_chain = 0;
  std::uint64_t capped = 0;     // chains stopped by the length cap
  std::uint64_t chain_cap = 0;
  double mean_collisions = 0.0;
  double collisions_stderr = 0.0;
  double expected_collisions = 0.0;  // 1/(θ(1-c))
  double weight_per_particle = 0.0;  // θ · mean collisions, → 1/(1-c)
  double weight_stderr = 0.0;
  double leaked_weight = 0.0;  // expected weight lost past the cap, per particle
  double mean_cosine = 0.0;    // over all scatterings
  double cosine_stderr = 0.0;
  double expected_cosine = 0.0;  // μ̄0/(1 - θ(1-c)) for the post-collision density
  // The post-collision direction is drawn from (σ - θ(1-c))/(1 - θ(1-c))
  // exactly, so no weight correction is ever applied.
  double weight_correction = 1.0;
};

struct McOptions {
  std::uint64_t particles = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool score = true;            // fill the histogram
  bool record_displacement = false;
  double theta = 0.0;           // 0: θ(ε) of the model's regime
};

struct McResult {
  CollisionHistogram histogram;
  ChainStats stats;
  // Per particle, x_kill - x_birth, components 0..dim-1 in order.
  std::vector<double> displacement;
};

// Collision chains: birth from Q, weight θ; fly ε·s with s ~ p, score at the
// new position, survive with probability 1 - θ(1-c), turn with the exact
// post-collision kernel. Particle p draws from Philox stream (seed, p), and
// the reduction order is fixed, so results do not depend on `threads`.
McResult run_chains(const TransportModel& model, double eps, const HistogramLattice& lattice,
                    const McOptions& opt);

// Sample quantile, linear interpolation between order statistics.
double quantile(std::vector<double> v, double q);

struct ScalingRow {
  double eps = 0.0, theta = 0.0, iqr = 0.0, mean_collisions = 0.0;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  std::vector<double> ratios;  // IQR(ε_i)/IQR(ε_{i+1})
  double band_lo = 0.8, band_hi = 1.25;
  bool in_band = false;
};

// IQR of the displacement at kill (all axes pooled) versus ε. With
// `quadratic_theta` θ = ε² is forced regardless of the regime.
ScalingReport displacement_scaling(const TransportModel& model, const std::vector<double>& eps,
                                   std::uint64_t particles, std::uint64_t seed, int threads = 1,
                                   bool quadratic_theta = false);

}  // namespace nctk
