#include "nctk/scatter.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nctk/quadrature.hpp"

namespace nctk {

KernelSpec read_kernel_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("kernel_file", "cannot open " + path);
  std::vector<double> mu, val;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ConfigError("kernel_file", "expected two columns in " + path);
    mu.push_back(a);
    val.push_back(b);
  }
  return KernelSpec::tabulated(std::move(mu), std::move(val));
}

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t j = std::size_t(it - x.begin());
  const double f = (t - x[j - 1]) / (x[j] - x[j - 1]);
  return y[j - 1] + f * (y[j] - y[j - 1]);
}

// Root of A t^2 + B t + C = 0 in the stable form for B > 0.
double stable_root(double A, double B, double C) {
  const double disc = std::max(0.0, B * B - 4.0 * A * C);
  return -2.0 * C / (B + std::sqrt(disc));
}

}  // namespace

ScatterKernel::ScatterKernel(const KernelSpec& spec, int dim) : spec_(spec), dim_(dim) {
  if (dim != 2 && dim != 3) throw DomainError("ScatterKernel: dimension must be 2 or 3");
  switch (spec_.family) {
    case KernelFamily::Isotropic:
      break;
    case KernelFamily::LinearAnisotropic:
      if (!(std::abs(spec_.a) < 1.0))
        throw DomainError("LinearAnisotropic: need |a| < 1 so that σ stays positive");
      sigma_min_ = 1.0 - std::abs(spec_.a);
      sigma_max_ = 1.0 + std::abs(spec_.a);
      mean_cosine_exact_ = spec_.a / dim_;
      break;
    case KernelFamily::Tabulated: {
      auto& m = spec_.mu;
      auto& v = spec_.values;
      if (m.size() < 2 || m.size() != v.size())
        throw DomainError("Tabulated kernel: need at least two (μ, σ) pairs");
      if (std::abs(m.front() + 1.0) > 1e-12 || std::abs(m.back() - 1.0) > 1e-12)
        throw DomainError("Tabulated kernel: μ grid must run from -1 to 1");
      m.front() = -1.0;
      m.back() = 1.0;
      for (std::size_t i = 1; i < m.size(); ++i)
        if (!(m[i] > m[i - 1])) throw DomainError("Tabulated kernel: μ must be strictly increasing");
      for (double s : v)
        if (!(s > 0.0)) throw DomainError("Tabulated kernel: σ must be strictly positive");
      double mass = 0.0;
      if (dim_ == 3) {
        // linear interpolation, so the trapezoid rule is exact
        for (std::size_t i = 1; i < m.size(); ++i) mass += 0.25 * (m[i] - m[i - 1]) * (v[i] + v[i - 1]);
      } else {
        std::vector<double> breaks;
        for (auto it = m.rbegin(); it != m.rend(); ++it) breaks.push_back(std::acos(*it));
        mass = integrate_pieces([&](double p) { return interp(m, v, std::cos(p)); }, breaks) / kPi;
      }
      for (double& s : v) s /= mass;
      sigma_min_ = *std::min_element(v.begin(), v.end());
      sigma_max_ = *std::max_element(v.begin(), v.end());
      if (dim_ == 3) {
        cum_.assign(m.size(), 0.0);
        double mc = 0.0;
        for (std::size_t i = 1; i < m.size(); ++i) {
          const double h = m[i] - m[i - 1];
          cum_[i] = cum_[i - 1] + 0.25 * h * (v[i] + v[i - 1]);
          // ∫ μ σ over a linear piece, exactly
          mc += 0.5 * h * (v[i - 1] * (2 * m[i - 1] + m[i]) + v[i] * (m[i - 1] + 2 * m[i])) / 6.0;
        }
        mean_cosine_exact_ = mc;
      } else {
        std::vector<double> breaks;
        for (auto it = m.rbegin(); it != m.rend(); ++it) breaks.push_back(std::acos(*it));
        mean_cosine_exact_ =
            integrate_pieces([&](double p) { return std::cos(p) * interp(m, v, std::cos(p)); }, breaks) / kPi;
      }
      break;
    }
  }
}

std::string ScatterKernel::name() const {
  switch (spec_.family) {
    case KernelFamily::Isotropic: return "isotropic";
    case KernelFamily::LinearAnisotropic: return "linear(a=" + std::to_string(spec_.a) + ")";
    case KernelFamily::Tabulated: return "tabulated";
  }
  return "?";
}

double ScatterKernel::sigma(double mu) const {
  switch (spec_.family) {
    case KernelFamily::Isotropic: return 1.0;
    case KernelFamily::LinearAnisotropic: return 1.0 + spec_.a * mu;
    case KernelFamily::Tabulated: return interp(spec_.mu, spec_.values, mu);
  }
  return 1.0;
}

double ScatterKernel::sample_polar_3d(double u, double shift) const {
  const double keep = 1.0 - shift;
  switch (spec_.family) {
    case KernelFamily::Isotropic:
      return 2.0 * u - 1.0;
    case KernelFamily::LinearAnisotropic: {
      // density (1 + a'μ)/2 with a' = a/(1-shift)
      const double ap = spec_.a / keep;
      return std::clamp(stable_root(0.25 * ap, 0.5, 0.5 - 0.25 * ap - u), -1.0, 1.0);
    }
    case KernelFamily::Tabulated: {
      const auto& m = spec_.mu;
      const auto& v = spec_.values;
      auto cdf = [&](std::size_t k) { return (cum_[k] - 0.5 * shift * (m[k] + 1.0)) / keep; };
      std::size_t lo = 0, hi = m.size() - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (cdf(mid) <= u ? lo : hi) = mid;
      }
      // linear density on [m_lo, m_hi]: f(t) = (f0 + (f1-f0) t/h)/2/keep
      const double h = m[hi] - m[lo];
      const double f0 = v[lo] - shift, f1 = v[hi] - shift;
      const double target = (u - cdf(lo)) * keep * 2.0;
      const double t = stable_root(0.5 * (f1 - f0) / h, f0, -target);
      return std::clamp(m[lo] + std::clamp(t, 0.0, h), -1.0, 1.0);
    }
  }
  return 0.0;
}

Vec3 ScatterKernel::sample_direction(const Vec3& v_in, RandomStream& rng, double shift) const {
  // σ - shift is still flat: no frame needed, same number of draws
  if (spec_.family == KernelFamily::Isotropic) return uniform_direction(rng, dim_);
  if (dim_ == 3) {
    const double mu = sample_polar_3d(rng.uniform(), shift);
    const double phi = 2.0 * kPi * rng.uniform();
    return rotate_about(v_in, mu, phi, 3);
  }
  // 2D: relative angle ψ with density (σ(cos ψ) - shift)/(2π(1 - shift))
  double psi = 2.0 * kPi * rng.uniform();
  if (spec_.family != KernelFamily::Isotropic) {
    const double bound = sigma_max_ - shift;
    while (rng.uniform() * bound > sigma(std::cos(psi)) - shift) psi = 2.0 * kPi * rng.uniform();
  }
  const double c = std::cos(psi), s = std::sin(psi);
  return normalized(Vec3{c * v_in.x - s * v_in.y, s * v_in.x + c * v_in.y, 0.0});
}

Vec3 uniform_direction(RandomStream& rng, int dim) {
  if (dim == 3) {
    const double mu = 2.0 * rng.uniform() - 1.0, ph = 2.0 * kPi * rng.uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return {s * std::cos(ph), s * std::sin(ph), mu};
  }
  const double ph = 2.0 * kPi * rng.uniform();
  return {std::cos(ph), std::sin(ph), 0.0};
}

double mean_cosine(const ScatterKernel& k, const DirectionQuadrature& q) {
  if (k.dimension() != q.dim) throw DomainError("mean_cosine: kernel and quadrature dimensions differ");
  auto at = [&](const Vec3& vp) {
    return q.integrate([&](const Vec3& v) {
      const double mu = dot(v, vp);
      return k.sigma(mu) * mu;
    });
  };
  const double m0 = at(q.dim == 3 ? Vec3{0, 0, 1} : Vec3{1, 0, 0});
  if (!(std::abs(m0) < 1.0)) throw DomainError("mean_cosine: |μ̄0| >= 1, ν0 = 1/(1-μ̄0) undefined");
  if (m0 < 0.0) warn("mean scattering cosine is negative (" + std::to_string(m0) + "); ν1 < 0");
  return m0;
}

namespace {

// Symmetric Sinkhorn: find d > 0 with Σ_j d_i S_ij d_j w_j = 1.
Eigen::MatrixXd balance(const Eigen::MatrixXd& S, const Eigen::VectorXd& w) {
  const Eigen::Index n = S.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd r = (S * d.cwiseProduct(w)).cwiseProduct(d);
    const double dev = (r.array() - 1.0).abs().maxCoeff();
    if (dev < 1e-15) break;
    d = d.cwiseQuotient(r.cwiseSqrt());
  }
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = d(i) * S(i, j) * d(j) * w(j);
  return K;
}

}  // namespace

Eigen::MatrixXd kernel_matrix(const ScatterKernel& k, const DirectionQuadrature& q) {
  if (k.dimension() != q.dim) throw DomainError("kernel_matrix: kernel and quadrature dimensions differ");
  const Eigen::Index n = Eigen::Index(q.size());
  Eigen::MatrixXd S(n, n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i) = q.weights[i];
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) = k.sigma(std::clamp(dot(q.nodes[i], q.nodes[j]), -1.0, 1.0));
  }
  return balance(S, w);
}

Eigen::MatrixXd axial_kernel_matrix(const ScatterKernel& k, const DirectionQuadrature& q) {
  if (q.dim != 3 || k.dimension() != 3) throw DomainError("axial_kernel_matrix: n = 3 only");
  const Eigen::Index n = Eigen::Index(q.mu.size());
  const int m = q.azimuths;
  Eigen::MatrixXd S(n, n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i) = q.mu_weights[i];
    const double si = std::sqrt(std::max(0.0, 1.0 - q.mu[i] * q.mu[i]));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sj = std::sqrt(std::max(0.0, 1.0 - q.mu[j] * q.mu[j]));
      double acc = 0.0;
      for (int a = 0; a < m; ++a) {
        const double c = q.mu[i] * q.mu[j] + si * sj * std::cos(2.0 * kPi * a / m);
        acc += k.sigma(std::clamp(c, -1.0, 1.0));
      }
      S(i, j) = acc / m;
    }
  }
  return balance(S, w);
}

}  // namespace nctk
