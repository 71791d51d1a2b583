#include "nctk/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "nctk/parallel.hpp"
#include "nctk/quadrature.hpp"

namespace nctk {

// ---------------------------------------------------------------- sources

SourceSpec SourceSpec::gaussian(double width, double amplitude) {
  SourceSpec s;
  s.family = SourceFamily::IsotropicGaussian;
  s.width = width;
  s.amplitude = amplitude;
  return s;
}

SourceSpec SourceSpec::tabulated(std::vector<double> r, std::vector<double> q) {
  SourceSpec s;
  s.family = SourceFamily::Tabulated;
  s.r = std::move(r);
  s.q = std::move(q);
  return s;
}

SourceSpec read_source_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("source.table", "cannot open '" + path + "'");
  std::vector<double> r, q;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ConfigError("source.table", "expected two columns in '" + path + "'");
    r.push_back(a);
    q.push_back(b);
  }
  return SourceSpec::tabulated(std::move(r), std::move(q));
}

namespace {

double sphere_area(int dim) { return dim == 3 ? 4.0 * kPi : 2.0 * kPi; }

double radial_kernel(int dim, double x) {
  if (dim == 3) return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return std::cyl_bessel_j(0.0, x);
}

double normal(RandomStream& rng) {
  // Box-Muller, one value per pair of draws
  const double u1 = rng.uniform(), u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

Source::Source(const SourceSpec& spec, int dim) : spec_(spec), dim_(dim) {
  if (dim != 2 && dim != 3) throw DomainError("Source: dimension must be 2 or 3");
  if (spec_.family == SourceFamily::IsotropicGaussian) {
    if (!(spec_.width > 0.0) || !std::isfinite(spec_.width)) throw ConfigError("source.width", "must be > 0");
    if (!(spec_.amplitude > 0.0) || !std::isfinite(spec_.amplitude))
      throw ConfigError("source.amplitude", "must be > 0");
    return;
  }
  const auto& r = spec_.r;
  const auto& q = spec_.q;
  if (r.size() < 2 || r.size() != q.size()) throw ConfigError("source.table", "need at least two (r, q) rows");
  if (r[0] < 0.0) throw ConfigError("source.table", "radii must be ≥ 0");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(q[i])) throw ConfigError("source.table", "non-finite entry");
    if (q[i] < 0.0) throw ConfigError("source.table", "Q must be nonnegative");
    if (i && !(r[i] > r[i - 1])) throw ConfigError("source.table", "radii must be strictly increasing");
  }
  // q r^{n-1} is a polynomial of degree ≤ 3 per segment: 2-point Gauss is exact
  const auto& g = gauss_legendre(2);
  cum_.assign(r.size(), 0.0);
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double a = r[i - 1], b = r[i];
    double s = 0.0;
    for (std::size_t k = 0; k < g.x.size(); ++k) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * g.x[k];
      const double qq = q[i - 1] + (q[i] - q[i - 1]) * (x - a) / (b - a);
      s += g.w[k] * qq * std::pow(x, dim - 1);
    }
    cum_[i] = cum_[i - 1] + 0.5 * (b - a) * s;
  }
  if (!(cum_.back() > 0.0)) throw ConfigError("source.table", "source has zero mass");
}

double Source::radial_hat(double k) const {
  const auto& r = spec_.r;
  const auto& q = spec_.q;
  const auto& g = gl16();
  double s = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double a = r[i - 1], b = r[i];
    const int panels = 1 + int(std::ceil(k * (b - a) / kPi));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      for (std::size_t m = 0; m < g.x.size(); ++m) {
        const double x = lo + 0.5 * h * (g.x[m] + 1.0);
        const double qq = q[i - 1] + (q[i] - q[i - 1]) * (x - a) / (b - a);
        s += 0.5 * h * g.w[m] * qq * std::pow(x, dim_ - 1) * radial_kernel(dim_, k * x);
      }
    }
  }
  return sphere_area(dim_) * s;
}

double Source::hat(double xi_norm) const {
  if (spec_.family == SourceFamily::IsotropicGaussian)
    return spec_.amplitude * std::exp(-0.5 * spec_.width * spec_.width * xi_norm * xi_norm);
  if (xi_norm == 0.0) return sphere_area(dim_) * cum_.back();
  return radial_hat(xi_norm);
}

Vec3 Source::sample_position(RandomStream& rng) const {
  if (spec_.family == SourceFamily::IsotropicGaussian) {
    const double w = spec_.width;
    Vec3 x{w * normal(rng), w * normal(rng), 0.0};
    if (dim_ == 3) x.z = w * normal(rng);
    return x;
  }
  // segment by mass, then rejection inside it
  const double u = rng.uniform() * cum_.back();
  const std::size_t i = std::min<std::size_t>(
      cum_.size() - 1, std::size_t(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin()));
  const std::size_t seg = std::max<std::size_t>(i, 1);
  const double a = spec_.r[seg - 1], b = spec_.r[seg];
  const double qa = spec_.q[seg - 1], qb = spec_.q[seg];
  const double fmax = std::max(qa, qb) * std::pow(b, dim_ - 1);
  double rad = a;
  for (;;) {
    rad = a + (b - a) * rng.uniform();
    const double f = (qa + (qb - qa) * (rad - a) / (b - a)) * std::pow(rad, dim_ - 1);
    if (rng.uniform() * fmax <= f) break;
  }
  return uniform_direction(rng, dim_) * rad;
}

// ---------------------------------------------------------------- grids

FrequencyGrid FrequencyGrid::make_radial(int dim, double xi_max, int count) {
  if (dim != 2 && dim != 3) throw ConfigError("dim", "must be 2 or 3");
  if (!(xi_max > 0.0)) throw ConfigError("grid.xi_max", "must be > 0");
  if (count < 3) throw ConfigError("grid.count", "need at least 3 radial points");
  return FrequencyGrid{dim, xi_max, count, true};
}

FrequencyGrid FrequencyGrid::make_cartesian(int dim, double xi_max, int count) {
  if (dim != 2 && dim != 3) throw ConfigError("dim", "must be 2 or 3");
  if (!(xi_max > 0.0)) throw ConfigError("grid.xi_max", "must be > 0");
  if (count < 3 || count % 2 == 0) throw ConfigError("grid.count", "cartesian grids need an odd count ≥ 3");
  return FrequencyGrid{dim, xi_max, count, false};
}

double FrequencyGrid::spacing() const { return radial ? xi_max / (count - 1) : 2.0 * xi_max / (count - 1); }

std::size_t FrequencyGrid::size() const {
  if (radial) return std::size_t(count);
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= std::size_t(count);
  return n;
}

double FrequencyGrid::radius(std::size_t i) const { return double(i) * spacing(); }

double FrequencyGrid::weight(std::size_t i) const {
  const double h = spacing();
  const double end = (i == 0 || i + 1 == std::size_t(count)) ? 0.5 : 1.0;
  return end * h * std::pow(radius(i), dim - 1);
}

Vec3 FrequencyGrid::node(std::size_t flat) const {
  const int half = (count - 1) / 2;
  const double h = spacing();
  double c[3] = {0.0, 0.0, 0.0};
  for (int d = dim - 1; d >= 0; --d) {
    c[d] = (int(flat % std::size_t(count)) - half) * h;
    flat /= std::size_t(count);
  }
  return {c[0], c[1], c[2]};
}

double FrequencyGrid::lattice_spacing() const { return 2.0 * kPi / (count * spacing()); }

// ---------------------------------------------------------------- mode solver

ModeSolver::ModeSolver(const TransportModel& model, Geometry geometry)
    : model_(model), geometry_(geometry), source_(model.source, model.dim) {
  const int n = model_.dim;
  if (n != 2 && n != 3) throw ConfigError("dim", "must be 2 or 3");
  if (!(model_.c > 0.0 && model_.c < 1.0)) throw ConfigError("c", "must lie strictly in (0, 1)");
  if (!model_.path || !model_.kernel) throw Error("ModeSolver: model without path law or kernel");
  if (model_.kernel->dimension() != n) throw Error("ModeSolver: kernel dimension differs from model");
  model_.path->require_normalized("ModeSolver");
  check_regime(model_.regime, *model_.path);

  const DirectionQuadrature q = make_quadrature(n, model_.quad_order);
  if (n == 3 && geometry_ == Geometry::Radial) {
    K_ = axial_kernel_matrix(*model_.kernel, q);
    w_ = Eigen::Map<const Eigen::VectorXd>(q.mu_weights.data(), Eigen::Index(q.mu_weights.size()));
    for (double mu : q.mu) dirs_.push_back({std::sqrt(std::max(0.0, 1.0 - mu * mu)), 0.0, mu});
  } else {
    K_ = kernel_matrix(*model_.kernel, q);
    w_ = Eigen::Map<const Eigen::VectorXd>(q.weights.data(), Eigen::Index(q.weights.size()));
    dirs_ = q.nodes;
  }
  // Every rule here is symmetric under v -> -v. The solver relies on it to
  // drop the odd part of Σ w ŵ exactly.
  // In the axial reduction only μ = v·e matters, so there the partner is -μ.
  const bool axial = n == 3 && geometry_ == Geometry::Radial;
  antipode_.assign(dirs_.size(), dirs_.size());
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      const double gap = axial ? std::abs(dirs_[i].z + dirs_[j].z) : norm(dirs_[i] + dirs_[j]);
      if (gap < 1e-12 && std::abs(w_(Eigen::Index(i)) - w_(Eigen::Index(j))) < 1e-15) {
        antipode_[i] = j;
        break;
      }
    }
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    if (antipode_[i] == dirs_.size()) throw Error("ModeSolver: direction rule is not antipodally symmetric");
}

Vec3 ModeSolver::axis() const {
  if (model_.dim == 3 && geometry_ == Geometry::Radial) return {0.0, 0.0, 1.0};
  return {1.0, 0.0, 0.0};
}

void ModeSolver::check_wellposed(double eps) const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be > 0");
  const double th = theta(model_.regime, eps);
  if (!(th > 0.0)) throw DomainError("theta(eps) underflows at eps = " + std::to_string(eps));
  const double m = wellposed_margin(*model_.kernel, th, model_.c);
  if (m < 0.0) {
    std::ostringstream os;
    os << "eps = " << eps << " too large: sigma_min - theta(1-c) = " << m << " < 0";
    throw DomainError(os.str());
  }
}

ModeSolution ModeSolver::solve(const Vec3& xi, double eps, SolveMethod method, const FixedPointOptions& fp) const {
  if (geometry_ == Geometry::Radial) {
    const Vec3 a = axis();
    if (norm(xi - a * dot(xi, a)) > 1e-14 * std::max(1.0, norm(xi)))
      throw DomainError("radial geometry: xi must lie along the representative axis");
  }
  check_wellposed(eps);
  return method == SolveMethod::Direct ? direct(xi, eps) : fixed_point(xi, eps, fp);
}

ModeSolution ModeSolver::solve_radial(double xi_norm, double eps, SolveMethod method,
                                      const FixedPointOptions& fp) const {
  return solve(axis() * xi_norm, eps, method, fp);
}

namespace {

struct NodeData {
  std::vector<cplx> inc, W, B;
};

NodeData node_data(const PathLengthDistribution& d, const std::vector<Vec3>& dirs,
                   const std::vector<std::size_t>& anti, const Vec3& xi, double eps) {
  const std::size_t n = dirs.size();
  NodeData nd;
  nd.inc.resize(n);
  nd.W.resize(n);
  nd.B.resize(n);
  std::vector<char> done(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (done[j]) continue;
    const double z = eps * dot(xi, dirs[j]);
    const cplx inc = d.increment(z);
    const cplx B = z == 0.0 ? cplx(d.beta0()) : cplx(0.0, 1.0) * inc / z;
    nd.inc[j] = inc;
    nd.B[j] = B;
    done[j] = 1;
    const std::size_t k = anti[j];
    if (!done[k]) {
      nd.inc[k] = std::conj(inc);
      nd.B[k] = std::conj(B);
      done[k] = 1;
    }
  }
  for (std::size_t j = 0; j < n; ++j) nd.W[j] = 1.0 + nd.inc[j];
  return nd;
}

}  // namespace

void ModeSolver::finish(ModeSolution& s, const std::vector<cplx>& W, const std::vector<cplx>& B) const {
  const Eigen::Index n = w_.size();
  Eigen::VectorXcd WG(n);
  for (Eigen::Index j = 0; j < n; ++j) WG(j) = W[std::size_t(j)] * s.G[std::size_t(j)];
  const Eigen::VectorXcd phi = K_.cast<cplx>() * WG;
  s.phi.assign(phi.data(), phi.data() + n);
  s.avg_G = s.avg_phi = s.eta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    s.avg_G += w_(j) * s.G[std::size_t(j)];
    s.avg_phi += w_(j) * WG(j);
    s.eta += w_(j) * B[std::size_t(j)] * s.G[std::size_t(j)];
  }
}

ModeSolution ModeSolver::direct(const Vec3& xi, double eps) const {
  const Eigen::Index n = w_.size();
  const double th = theta(model_.regime, eps);
  const double c = model_.c, t = th * (1.0 - c);
  const NodeData nd = node_data(*model_.path, dirs_, antipode_, xi, eps);

  Eigen::VectorXcd wh(n);
  double mean_wh = 0.0;  // Σ w ŵ; the imaginary part is odd in v and sums to zero
  for (Eigen::Index j = 0; j < n; ++j) {
    wh(j) = nd.inc[std::size_t(j)] / th;
    mean_wh += w_(j) * wh(j).real();
  }
  const Eigen::VectorXcd Kwh = K_.cast<cplx>() * wh;
  const double Q = source_.hat(norm(xi));

  Eigen::MatrixXcd A(n + 1, n + 1);
  Eigen::VectorXcd b(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double kt = K_(i, j) - t * w_(j);
      A(i, j) = (i == j ? 1.0 : 0.0) - K_(i, j) + w_(j) - th * kt * wh(j);
    }
    A(i, n) = (1.0 - c) - Kwh(i) + t * mean_wh;
    b(i) = Q;
  }
  for (Eigen::Index j = 0; j < n; ++j) A(n, j) = -th * (1.0 - t) * w_(j) * wh(j);
  A(n, n) = (1.0 - c) - (1.0 - t) * mean_wh;
  b(n) = Q;

  const Eigen::VectorXcd u = A.partialPivLu().solve(b);
  if (!u.allFinite()) throw Error("ModeSolver: singular mode system (internal error)");

  ModeSolution s;
  s.xi = xi;
  s.xi_norm = norm(xi);
  s.eps = eps;
  s.theta = th;
  const double bn = b.cwiseAbs().maxCoeff();
  const double rn = (A * u - b).cwiseAbs().maxCoeff();
  s.residual = bn > 0.0 ? rn / bn : rn;
  const cplx g = u(n);
  s.G.resize(std::size_t(n));
  for (Eigen::Index j = 0; j < n; ++j) s.G[std::size_t(j)] = g + th * u(j);
  finish(s, nd.W, nd.B);
  return s;
}

ModeSolution ModeSolver::fixed_point(const Vec3& xi, double eps, const FixedPointOptions& fp) const {
  const Eigen::Index n = w_.size();
  const double th = theta(model_.regime, eps);
  const double t = th * (1.0 - model_.c);
  const double rate = 1.0 - fp.damping * t;
  if (!(fp.damping > 0.0 && fp.damping <= 1.0)) throw DomainError("fixed point: damping must lie in (0, 1]");
  const double expected = std::log(fp.tol) / std::log(rate);
  if (!(expected < double(fp.max_iter)))
    throw DomainError("fixed point: contraction factor " + std::to_string(rate) + " needs ~" +
                      std::to_string(expected) + " iterations, over the limit");
  const NodeData nd = node_data(*model_.path, dirs_, antipode_, xi, eps);
  const double Q = source_.hat(norm(xi));

  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = (K_(i, j) - t * w_(j)) * nd.W[std::size_t(j)];
  const Eigen::VectorXcd src = Eigen::VectorXcd::Constant(n, th * Q);

  Eigen::VectorXcd G = src;
  long it = 0;
  for (; it < fp.max_iter; ++it) {
    const Eigen::VectorXcd next = (1.0 - fp.damping) * G + fp.damping * (M * G + src);
    const double diff = (next - G).norm(), scale = next.norm();
    G = next;
    if (diff <= fp.tol * scale) break;
  }
  ModeSolution s;
  s.xi = xi;
  s.xi_norm = norm(xi);
  s.eps = eps;
  s.theta = th;
  s.iterations = int(std::min<long>(it + 1, std::numeric_limits<int>::max()));
  const double sn = src.norm();
  const double rn = (G - M * G - src).norm();
  s.residual = sn > 0.0 ? rn / sn : rn;
  s.G.assign(G.data(), G.data() + n);
  finish(s, nd.W, nd.B);
  return s;
}

// ---------------------------------------------------------------- limit

double solve_limit_mode(double xi_norm, double beta, double D, double c, double q_avg) {
  if (!(D > 0.0)) throw DomainError("solve_limit: D must be > 0");
  if (!(c > 0.0 && c < 1.0)) throw DomainError("solve_limit: c must lie in (0, 1)");
  const double m = xi_norm == 0.0 ? 0.0 : D * std::pow(xi_norm, beta);
  return q_avg / (m + (1.0 - c));
}

std::vector<double> solve_limit(const FrequencyGrid& grid, double beta, double D, double c,
                                const std::function<double(double)>& q_avg) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k = grid.radial ? grid.radius(i) : norm(grid.node(i));
    out[i] = solve_limit_mode(k, beta, D, c, q_avg(k));
  }
  return out;
}

// ---------------------------------------------------------------- transforms

SpectralField fill_radial(const FrequencyGrid& grid, const std::function<cplx(double)>& f, int threads) {
  if (grid.radial) throw DomainError("fill_radial: needs a cartesian grid");
  const int M = grid.count, half = (M - 1) / 2;
  const std::size_t total = grid.size();
  std::vector<long> key(total);
  std::map<long, std::size_t> slot;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    long s = 0;
    for (int d = 0; d < grid.dim; ++d) {
      const long i = long(r % std::size_t(M)) - half;
      s += i * i;
      r /= std::size_t(M);
    }
    key[flat] = s;
    slot.emplace(s, 0);
  }
  std::vector<long> distinct;
  for (auto& kv : slot) {
    kv.second = distinct.size();
    distinct.push_back(kv.first);
  }
  std::vector<cplx> vals(distinct.size());
  const double h = grid.spacing();
  parallel_for(distinct.size(), threads, [&](std::size_t i) { vals[i] = f(h * std::sqrt(double(distinct[i]))); });
  SpectralField out{grid, std::vector<cplx>(total)};
  for (std::size_t flat = 0; flat < total; ++flat) out.values[flat] = vals[slot[key[flat]]];
  return out;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Centered index i (0..M-1, zero at (M-1)/2) to FFT order, per axis.
std::size_t to_fft(std::size_t flat, int M, int dim) {
  const int half = (M - 1) / 2;
  std::size_t out = 0, mul = 1;
  for (int d = 0; d < dim; ++d) {
    const int i = int(flat % std::size_t(M));
    flat /= std::size_t(M);
    out += std::size_t((i - half + M) % M) * mul;
    mul *= std::size_t(M);
  }
  return out;
}

std::size_t mirror(std::size_t flat, int M, int dim) {
  std::size_t out = 0, mul = 1;
  for (int d = 0; d < dim; ++d) {
    const int i = int(flat % std::size_t(M));
    flat /= std::size_t(M);
    out += std::size_t(M - 1 - i) * mul;
    mul *= std::size_t(M);
  }
  return out;
}

std::vector<cplx> fft(const std::vector<cplx>& in, int M, int dim, int sign) {
  const std::size_t total = in.size();
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    int dims[3] = {M, M, M};
    plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
  }
  // all axes have the same length, so the digit order of the shift is irrelevant
  for (std::size_t f = 0; f < total; ++f) {
    const std::size_t k = to_fft(f, M, dim);
    buf[k][0] = in[f].real();
    buf[k][1] = in[f].imag();
  }
  fftw_execute(plan);
  std::vector<cplx> out(total);
  for (std::size_t f = 0; f < total; ++f) {
    const std::size_t k = to_fft(f, M, dim);
    out[f] = cplx(buf[k][0], buf[k][1]);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace

SpatialField inverse_transform(const SpectralField& f) {
  const FrequencyGrid& g = f.grid;
  if (g.radial) throw DomainError("inverse_transform: needs a cartesian grid");
  if (f.values.size() != g.size()) throw DomainError("inverse_transform: size mismatch");
  const int M = g.count;
  std::vector<cplx> sym(f.values.size());
  double scale = 0.0, asym = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const cplx a = f.values[i], b = std::conj(f.values[mirror(i, M, g.dim)]);
    sym[i] = 0.5 * (a + b);
    scale = std::max(scale, std::abs(a));
    asym = std::max(asym, std::abs(a - b));
  }
  if (scale > 0.0 && asym > 1e-10 * scale) {
    std::ostringstream os;
    os << "inverse_transform: input not Hermitian (relative deviation " << asym / scale << "); symmetrized";
    warn(os.str());
  }
  const std::vector<cplx> x = fft(sym, M, g.dim, FFTW_BACKWARD);
  const double norm = std::pow(g.spacing() / (2.0 * kPi), g.dim);
  SpatialField out;
  out.dim = g.dim;
  out.count = M;
  out.spacing = g.lattice_spacing();
  out.values.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.values[i] = norm * x[i].real();
  return out;
}

SpectralField forward_transform(const SpatialField& f, const FrequencyGrid& grid) {
  if (grid.radial || grid.count != f.count || grid.dim != f.dim)
    throw DomainError("forward_transform: grid does not match the lattice");
  if (std::abs(grid.lattice_spacing() - f.spacing) > 1e-12 * f.spacing)
    throw DomainError("forward_transform: lattice spacing does not match the grid");
  std::vector<cplx> in(f.values.begin(), f.values.end());
  std::vector<cplx> k = fft(in, f.count, f.dim, FFTW_FORWARD);
  const double norm = std::pow(f.spacing, f.dim);
  for (auto& v : k) v *= norm;
  return SpectralField{grid, std::move(k)};
}

// ---------------------------------------------------------------- sweeps

std::vector<ModeSolution> solve_radial_grid(const ModeSolver& s, const FrequencyGrid& grid, double eps,
                                            int threads) {
  if (!grid.radial) throw DomainError("solve_radial_grid: needs a radial grid");
  s.check_wellposed(eps);
  std::vector<ModeSolution> out(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { out[i] = s.solve_radial(grid.radius(i), eps); });
  return out;
}

double phi_norm(const ModeSolver& s, const FrequencyGrid& grid, const std::vector<ModeSolution>& modes) {
  double acc = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < modes[i].phi.size(); ++j) m += s.weights()(Eigen::Index(j)) * std::norm(modes[i].phi[j]);
    acc += grid.weight(i) * m;
  }
  return std::sqrt(acc);
}

double source_norm(const ModeSolver& s, const FrequencyGrid& grid) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = s.source().hat(grid.radius(i));
    acc += grid.weight(i) * q * q;  // node weights sum to one
  }
  return std::sqrt(acc);
}

double relative_error(const FrequencyGrid& grid, const std::vector<cplx>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    num += grid.weight(i) * std::norm(a[i] - b[i]);
    den += grid.weight(i) * b[i] * b[i];
  }
  return std::sqrt(num / den);
}

ConvergenceReport convergence_sweep(const ModeSolver& s, const FrequencyGrid& grid, const std::vector<double>& eps,
                                    double D, double beta, int threads) {
  if (eps.size() < 3) throw ConfigError("eps", "a convergence sweep needs at least 3 eps values");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) throw ConfigError("eps", "eps values must be strictly decreasing");
  if (std::log10(eps.front() / eps.back()) < 2.0 - 1e-12)
    throw ConfigError("eps", "eps values must span at least two decades");
  if (!grid.radial) throw DomainError("convergence_sweep: needs a radial grid");

  const TransportModel& m = s.model();
  ConvergenceReport rep;
  rep.regime = m.regime;
  rep.D = D;
  rep.beta = beta;
  rep.eps = eps;
  const double b0 = s.beta0();
  std::vector<double> psi0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    psi0[i] = solve_limit_mode(grid.radius(i), beta, D, m.c, s.source().hat(grid.radius(i)));
  const double zero_exact = s.source().hat(0.0) / (1.0 - m.c);

  for (double e : eps) {
    const auto modes = solve_radial_grid(s, grid, e, threads);
    std::vector<cplx> phi(grid.size()), eta(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      phi[i] = modes[i].avg_phi;
      rep.max_residual = std::max(rep.max_residual, modes[i].residual);
      eta[i] = modes[i].eta / b0;
      rep.rows.push_back({e, grid.radius(i), phi[i], psi0[i], eta[i].real(), std::abs(phi[i] - psi0[i])});
    }
    rep.E_phi.push_back(relative_error(grid, phi, psi0));
    rep.E_eta.push_back(relative_error(grid, eta, psi0));
    rep.zero_mode_error = std::max(rep.zero_mode_error, std::abs(eta[0] - zero_exact) / zero_exact);
  }
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  rep.monotone_phi = decreasing(rep.E_phi);
  rep.monotone_eta = decreasing(rep.E_eta);
  rep.final_phi = rep.E_phi.back();
  rep.final_eta = rep.E_eta.back();
  return rep;
}

}  // namespace nctk
