#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nctk/coeffs.hpp"
#include "nctk/pathlen.hpp"
#include "nctk/rng.hpp"
#include "nctk/scatter.hpp"
#include "nctk/sphere.hpp"

namespace nctk {

// Source Q(x, v), isotropic in v.
//  IsotropicGaussian: Q = A (2πw²)^{-n/2} exp(-|x|²/2w²), so Q̂ = A exp(-w²|ξ|²/2).
//  Tabulated: radial profile q(r), linear between nodes, zero past the last.
enum class SourceFamily { IsotropicGaussian, Tabulated };

struct SourceSpec {
  SourceFamily family = SourceFamily::IsotropicGaussian;
  double width = 1.0, amplitude = 1.0;
  std::vector<double> r, q;

  static SourceSpec gaussian(double width, double amplitude = 1.0);
  static SourceSpec tabulated(std::vector<double> r, std::vector<double> q);
};

SourceSpec read_source_table(const std::string& path);

class Source {
 public:
  Source(const SourceSpec& spec, int dim);

  const SourceSpec& spec() const { return spec_; }
  int dimension() const { return dim_; }

  // Q̂(ξ, v) for any v, a function of |ξ| only.
  double hat(double xi_norm) const;
  // ∫∫ Q dx dv = Q̂(0)
  double total() const { return hat(0.0); }
  // Birth position drawn from Q(·, v)/Q̂(0).
  Vec3 sample_position(RandomStream& rng) const;

 private:
  double radial_hat(double k) const;

  SourceSpec spec_;
  int dim_;
  std::vector<double> cum_;  // tabulated: ∫_0^{r_k} q r^{n-1} dr, trapezoid in q r^{n-1}
};

// B(z) = ∫ e^{-izs}(1 - F(s)) ds
inline cplx survival_transform(const PathLengthDistribution& d, double z) { return d.survival_transform(z); }

// Grid in Fourier space.
//  radial: |ξ| = i Δ, i = 0..count-1, Δ = Ξ_max/(count-1); weights r^{n-1}Δ (trapezoid).
//  cartesian: ξ_k = (i_k - (count-1)/2) Δ per axis, count odd, Δ = 2Ξ_max/(count-1).
struct FrequencyGrid {
  int dim = 3;
  double xi_max = 16.0;
  int count = 65;
  bool radial = true;

  static FrequencyGrid make_radial(int dim, double xi_max, int count);
  static FrequencyGrid make_cartesian(int dim, double xi_max, int count);

  double spacing() const;
  std::size_t size() const;
  double radius(std::size_t i) const;   // radial
  double weight(std::size_t i) const;   // radial
  Vec3 node(std::size_t flat) const;    // cartesian, axis 0 slowest
  // Spacing of the conjugate spatial lattice, 2π/(count Δ).
  double lattice_spacing() const;
};

struct TransportModel {
  int dim = 3;
  double c = 0.5;
  Regime regime;
  std::shared_ptr<const PathLengthDistribution> path;
  std::shared_ptr<const ScatterKernel> kernel;
  SourceSpec source;
  int quad_order = 8;
};

enum class Geometry { Radial, Full };
enum class SolveMethod { Direct, FixedPoint };

struct ModeSolution {
  Vec3 xi;
  double xi_norm = 0.0, eps = 0.0, theta = 0.0;
  std::vector<cplx> G;    // amplitude per node
  std::vector<cplx> phi;  // φ̂_ε per node
  cplx avg_G, avg_phi, eta;
  double residual = 0.0;
  int iterations = 0;  // 0 for the direct solve
};

struct FixedPointOptions {
  double tol = 1e-13;
  double damping = 1.0;
  long max_iter = 5'000'000;
};

// Per-frequency solver. Holds only immutable data, so solve() may be called
// concurrently.
//
// Direct solve. With t = θ(1-c), K̃ = K - t 1wᵀ and W = 1 + θŵ, write
// G = g 1 + θh with wᵀh = 0. Dividing the fixed point by θ gives
//   (I - K + 1wᵀ - θK̃ diag ŵ) h + ((1-c)1 - K̃ŵ) g = Q̂
//   -θ(1-t) (w∘ŵ)ᵀ h + ((1-c) - (1-t)wᵀŵ) g       = ⟨Q̂⟩
// which stays well conditioned as θ → 0; the plain (I - M)G = θQ̂ loses
// everything to cancellation there.
class ModeSolver {
 public:
  ModeSolver(const TransportModel& model, Geometry geometry = Geometry::Radial);

  const TransportModel& model() const { return model_; }
  Geometry geometry() const { return geometry_; }
  std::size_t nodes() const { return w_.size(); }
  const Eigen::VectorXd& weights() const { return w_; }
  const std::vector<Vec3>& directions() const { return dirs_; }
  const Source& source() const { return source_; }
  double beta0() const { return model_.path->beta0(); }

  // Throws DomainError when σ_min - θ(1-c) < 0.
  void check_wellposed(double eps) const;

  // Full geometry: any ξ. Radial geometry: ξ along the representative axis.
  ModeSolution solve(const Vec3& xi, double eps, SolveMethod method = SolveMethod::Direct,
                     const FixedPointOptions& fp = {}) const;
  ModeSolution solve_radial(double xi_norm, double eps, SolveMethod method = SolveMethod::Direct,
                            const FixedPointOptions& fp = {}) const;
  Vec3 axis() const;

 private:
  ModeSolution direct(const Vec3& xi, double eps) const;
  ModeSolution fixed_point(const Vec3& xi, double eps, const FixedPointOptions& fp) const;
  void finish(ModeSolution& s, const std::vector<cplx>& W, const std::vector<cplx>& B) const;

  TransportModel model_;
  Geometry geometry_;
  Source source_;
  Eigen::MatrixXd K_;
  Eigen::VectorXd w_;
  std::vector<Vec3> dirs_;
  std::vector<std::size_t> antipode_;
};

// Ψ̂0(ξ) = ⟨Q̂⟩(ξ)/(D|ξ|^β + (1-c))
double solve_limit_mode(double xi_norm, double beta, double D, double c, double q_avg);
std::vector<double> solve_limit(const FrequencyGrid& grid, double beta, double D, double c,
                                const std::function<double(double)>& q_avg);

// Values on a cartesian grid (row-major, axis 0 slowest) and on the conjugate
// spatial lattice x = (j - (M-1)/2) h.
struct SpectralField {
  FrequencyGrid grid;
  std::vector<cplx> values;
};
struct SpatialField {
  int dim = 3;
  int count = 0;
  double spacing = 0.0;
  std::vector<double> values;
  double coordinate(int j) const { return (j - (count - 1) / 2) * spacing; }
};

// Fills a cartesian grid from a function of |ξ|. f is called once per
// distinct |ξ|² (in units of Δ²), in parallel.
SpectralField fill_radial(const FrequencyGrid& grid, const std::function<cplx(double)>& f, int threads = 1);

// f(x) = (Δ/2π)^n Σ_ξ f̂(ξ) e^{iξ·x}. The input is Hermitian-symmetrized
// first; a warning is issued when it was off by more than 1e-10 (relative).
SpatialField inverse_transform(const SpectralField& f);
// f̂(ξ) = h^n Σ_x f(x) e^{-iξ·x}; inverse of the above.
SpectralField forward_transform(const SpatialField& f, const FrequencyGrid& grid);

// Discrete L² norms over (radial grid × nodes).
double phi_norm(const ModeSolver& s, const FrequencyGrid& grid, const std::vector<ModeSolution>& modes);
double source_norm(const ModeSolver& s, const FrequencyGrid& grid);

std::vector<ModeSolution> solve_radial_grid(const ModeSolver& s, const FrequencyGrid& grid, double eps,
                                            int threads = 1);

struct ConvergenceRow {
  double eps = 0.0, xi_norm = 0.0;
  cplx avg_phi;
  double psi0 = 0.0, eta_over_beta0 = 0.0, abs_err = 0.0;
};

struct ConvergenceReport {
  Regime regime;
  double D = 0.0, beta = 2.0;
  std::vector<double> eps, E_phi, E_eta;
  std::vector<ConvergenceRow> rows;
  bool monotone_phi = false, monotone_eta = false;
  double final_phi = 0.0, final_eta = 0.0;
  double max_residual = 0.0;
  double zero_mode_error = 0.0;  // max over ε of |η̂(0)/β0 - ⟨Q̂(0)⟩/(1-c)|, relative
};

// Relative weighted L² distance on a radial grid.
double relative_error(const FrequencyGrid& grid, const std::vector<cplx>& a, const std::vector<double>& b);

// Requires ≥ 3 strictly decreasing ε spanning ≥ 2 decades.
ConvergenceReport convergence_sweep(const ModeSolver& s, const FrequencyGrid& grid, const std::vector<double>& eps,
                                    double D, double beta, int threads = 1);

}  // namespace nctk
