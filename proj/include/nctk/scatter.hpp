#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nctk/common.hpp"
#include "nctk/rng.hpp"
#include "nctk/sphere.hpp"

namespace nctk {

enum class KernelFamily { Isotropic, LinearAnisotropic, Tabulated };

struct KernelSpec {
  KernelFamily family = KernelFamily::Isotropic;
  double a = 0.0;                  // LinearAnisotropic: σ(μ) = 1 + aμ
  std::vector<double> mu, values;  // Tabulated, μ from -1 to 1

  static KernelSpec isotropic() { return {}; }
  static KernelSpec linear(double a) {
    KernelSpec s;
    s.family = KernelFamily::LinearAnisotropic;
    s.a = a;
    return s;
  }
  static KernelSpec tabulated(std::vector<double> mu, std::vector<double> values) {
    KernelSpec s;
    s.family = KernelFamily::Tabulated;
    s.mu = std::move(mu);
    s.values = std::move(values);
    return s;
  }
};

// Two whitespace-separated columns (μ, σ).
KernelSpec read_kernel_table(const std::string& path);

// Scattering kernel σ(v·v'), normalized to unit mass on S^{n-1}.
class ScatterKernel {
 public:
  ScatterKernel(const KernelSpec& spec, int dim);

  int dimension() const { return dim_; }
  KernelFamily family() const { return spec_.family; }
  const KernelSpec& spec() const { return spec_; }
  std::string name() const;

  double sigma(double mu) const;
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }

  // μ̄0 from the one-dimensional polar integral (no direction quadrature).
  double mean_cosine_exact() const { return mean_cosine_exact_; }

  // Draw from σ, or from the post-collision density (σ - shift)/(1 - shift)
  // which is what is left after the uniform absorption part is removed.
  Vec3 sample_direction(const Vec3& v_in, RandomStream& rng, double shift = 0.0) const;

 private:
  double sample_polar_3d(double u, double shift) const;

  KernelSpec spec_;
  int dim_;
  double sigma_min_ = 1.0, sigma_max_ = 1.0;
  double mean_cosine_exact_ = 0.0;
  std::vector<double> cum_;  // tabulated, n = 3: (1/2)∫_{-1}^{μ_k} σ
};

// Uniform on S^{n-1}.
Vec3 uniform_direction(RandomStream& rng, int dim);

// μ̄0 = ∫ σ(v·v') (v·v') dv by quadrature, evaluated at several v' and
// checked for independence. Throws if |μ̄0| >= 1.
double mean_cosine(const ScatterKernel& k, const DirectionQuadrature& q);

// K_ij ≈ σ(v_i·v_j) w_j, symmetrically rescaled so each row sums to one.
Eigen::MatrixXd kernel_matrix(const ScatterKernel& k, const DirectionQuadrature& q);

// n = 3, functions of μ = v·e only: the azimuth-summed kernel on the polar
// nodes of q, rescaled the same way.
Eigen::MatrixXd axial_kernel_matrix(const ScatterKernel& k, const DirectionQuadrature& q);

// σ0 - θ(1-c): must be ≥ 0 for the collision operator to be positive.
inline double wellposed_margin(const ScatterKernel& k, double theta, double c) {
  return k.sigma_min() - theta * (1.0 - c);
}

}  // namespace nctk
