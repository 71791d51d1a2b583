#include "nctk/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace nctk {

void HistogramLattice::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("mc.lattice", "dimension must be 2 or 3");
  if (bins < 1 || bins % 2 == 0) throw ConfigError("mc.bins", "bins per axis must be odd and ≥ 1");
  if (!(width > 0.0) || !std::isfinite(width)) throw ConfigError("mc.bin_width", "must be > 0");
}

std::size_t HistogramLattice::size() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= std::size_t(bins);
  return n;
}

double HistogramLattice::volume() const { return std::pow(width, dim); }

long HistogramLattice::index(const Vec3& x) const {
  const double half = 0.5 * bins * width;
  const double c[3] = {x.x, x.y, x.z};
  long flat = 0;
  for (int d = 0; d < dim; ++d) {
    const double u = (c[d] + half) / width;
    if (!(u >= 0.0 && u < bins)) return -1;
    flat = flat * bins + long(u);
  }
  return flat;
}

Vec3 HistogramLattice::center_of(std::size_t flat) const {
  double c[3] = {0.0, 0.0, 0.0};
  for (int d = dim - 1; d >= 0; --d) {
    c[d] = center(int(flat % std::size_t(bins)));
    flat /= std::size_t(bins);
  }
  return {c[0], c[1], c[2]};
}

double CollisionHistogram::density(std::size_t i) const {
  return theta * double(counts[i]) / (double(particles) * lattice.volume());
}

double CollisionHistogram::stderr_of(std::size_t i) const {
  const double N = double(particles);
  if (particles < 2) return 0.0;
  const double mean = double(counts[i]) / N;
  const double var = std::max(0.0, (double(sumsq[i]) - N * mean * mean) / (N - 1.0));
  return theta * std::sqrt(var / N) / lattice.volume();
}

double CollisionHistogram::total_weight() const {
  std::uint64_t n = outside;
  for (auto c : counts) n += c;
  return theta * double(n);
}

namespace {

constexpr std::uint64_t kChunk = 4096;

struct ChunkTally {
  std::uint64_t collisions = 0, collisions_sq = 0, max_chain = 0, capped = 0, scatterings = 0;
  double cos_sum = 0.0, cos_sq = 0.0;
};

}  // namespace

McResult run_chains(const TransportModel& model, double eps, const HistogramLattice& lattice,
                    const McOptions& opt) {
  if (opt.particles == 0) throw ConfigError("mc.particles", "need at least one particle");
  if (opt.score) lattice.validate();
  if (opt.score && lattice.dim != model.dim) throw ConfigError("mc.lattice", "lattice dimension differs from model");
  if (!(model.c > 0.0 && model.c < 1.0)) throw ConfigError("c", "must lie strictly in (0, 1)");
  if (!(eps > 0.0)) throw ConfigError("eps", "must be > 0");
  const PathLengthDistribution& path = *model.path;
  const ScatterKernel& kernel = *model.kernel;
  path.require_normalized("run_chains");
  const Source source(model.source, model.dim);

  const double th = opt.theta > 0.0 ? opt.theta : theta(model.regime, eps);
  const double t = th * (1.0 - model.c);
  if (!(t > 0.0)) throw DomainError("run_chains: θ(1-c) underflows");
  if (wellposed_margin(kernel, th, model.c) < 0.0) {
    std::ostringstream os;
    os << "eps = " << eps << " too large: sigma_min - theta(1-c) < 0";
    throw DomainError(os.str());
  }
  const double cap_d = std::ceil(100.0 / t);
  if (cap_d > 1e15) throw DomainError("run_chains: chain cap 100/(θ(1-c)) is beyond reach");
  const std::uint64_t cap = std::uint64_t(cap_d);

  const std::uint64_t N = opt.particles;
  const std::uint64_t nchunks = (N + kChunk - 1) / kChunk;
  const int T = int(std::max<std::uint64_t>(1, std::min<std::uint64_t>(std::uint64_t(std::max(1, opt.threads)), nchunks)));
  const std::size_t nb = opt.score ? lattice.size() : 0;

  std::vector<ChunkTally> tally(nchunks);
  std::vector<std::vector<std::uint64_t>> counts{std::size_t(T)}, sumsq{std::size_t(T)};
  std::vector<std::uint64_t> outside(std::size_t(T), 0);
  std::vector<double> disp(opt.record_displacement ? N * std::size_t(model.dim) : 0);

  auto worker = [&](int w) {
    auto& cnt = counts[std::size_t(w)];
    auto& sq = sumsq[std::size_t(w)];
    cnt.assign(nb, 0);
    sq.assign(nb, 0);
    std::vector<std::uint32_t> local(nb, 0);
    std::vector<std::uint32_t> touched;
    const std::uint64_t c_lo = nchunks * std::uint64_t(w) / std::uint64_t(T);
    const std::uint64_t c_hi = nchunks * std::uint64_t(w + 1) / std::uint64_t(T);
    for (std::uint64_t ch = c_lo; ch < c_hi; ++ch) {
      ChunkTally& tl = tally[ch];
      const std::uint64_t p_hi = std::min(N, (ch + 1) * kChunk);
      for (std::uint64_t p = ch * kChunk; p < p_hi; ++p) {
        RandomStream rng(opt.seed, p);
        Vec3 x = source.sample_position(rng);
        const Vec3 x0 = x;
        Vec3 v = uniform_direction(rng, model.dim);
        std::uint64_t n = 0;
        for (;;) {
          const double s = path.sample_upper(rng.uniform());
          x = x + v * (eps * s);
          ++n;
          if (nb) {
            const long b = lattice.index(x);
            if (b < 0) {
              ++outside[std::size_t(w)];
            } else {
              if (local[std::size_t(b)]++ == 0) touched.push_back(std::uint32_t(b));
            }
          }
          if (n >= cap) {
            ++tl.capped;
            break;
          }
          if (rng.uniform() < t) break;
          const Vec3 nv = kernel.sample_direction(v, rng, t);
          const double cs = dot(nv, v);
          tl.cos_sum += cs;
          tl.cos_sq += cs * cs;
          ++tl.scatterings;
          v = nv;
        }
        for (auto b : touched) {
          const std::uint64_t k = local[b];
          cnt[b] += k;
          sq[b] += k * k;
          local[b] = 0;
        }
        touched.clear();
        tl.collisions += n;
        tl.collisions_sq += n * n;
        tl.max_chain = std::max(tl.max_chain, n);
        if (!disp.empty()) {
          const Vec3 d = x - x0;
          const double c[3] = {d.x, d.y, d.z};
          for (int k = 0; k < model.dim; ++k) disp[p * std::size_t(model.dim) + std::size_t(k)] = c[k];
        }
      }
    }
  };
  if (T == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < T; ++w) pool.emplace_back(worker, w);
    for (auto& th_ : pool) th_.join();
  }

  McResult r;
  CollisionHistogram& h = r.histogram;
  h.lattice = lattice;
  h.particles = N;
  h.theta = th;
  h.counts.assign(nb, 0);
  h.sumsq.assign(nb, 0);
  for (int w = 0; w < T; ++w) {
    for (std::size_t b = 0; b < nb; ++b) {
      h.counts[b] += counts[std::size_t(w)][b];
      h.sumsq[b] += sumsq[std::size_t(w)][b];
    }
    h.outside += outside[std::size_t(w)];
  }

  ChainStats& st = r.stats;
  ChunkTally all;
  for (const auto& tl : tally) {  // chunk order, independent of T
    all.collisions += tl.collisions;
    all.collisions_sq += tl.collisions_sq;
    all.max_chain = std::max(all.max_chain, tl.max_chain);
    all.capped += tl.capped;
    all.scatterings += tl.scatterings;
    all.cos_sum += tl.cos_sum;
    all.cos_sq += tl.cos_sq;
  }
  const double Nd = double(N);
  st.particles = N;
  st.collisions = all.collisions;
  st.max_chain = all.max_chain;
  st.capped = all.capped;
  st.chain_cap = cap;
  st.mean_collisions = double(all.collisions) / Nd;
  const double var_n =
      N > 1 ? std::max(0.0, (double(all.collisions_sq) - Nd * st.mean_collisions * st.mean_collisions) / (Nd - 1.0))
            : 0.0;
  st.collisions_stderr = std::sqrt(var_n / Nd);
  st.expected_collisions = 1.0 / t;
  st.weight_per_particle = th * st.mean_collisions;
  st.weight_stderr = th * st.collisions_stderr;
  st.leaked_weight = th * std::pow(1.0 - t, double(cap)) / t;
  if (all.scatterings > 0) {
    const double m = double(all.scatterings);
    st.mean_cosine = all.cos_sum / m;
    st.cosine_stderr = std::sqrt(std::max(0.0, all.cos_sq / m - st.mean_cosine * st.mean_cosine) / m);
  }
  st.expected_cosine = kernel.mean_cosine_exact() / (1.0 - t);
  r.displacement = std::move(disp);
  return r;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw DomainError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const std::size_t i = std::size_t(pos);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - double(i)) * (v[i + 1] - v[i]);
}

ScalingReport displacement_scaling(const TransportModel& model, const std::vector<double>& eps,
                                   std::uint64_t particles, std::uint64_t seed, int threads, bool quadratic_theta) {
  if (eps.size() < 3) throw ConfigError("eps", "displacement scaling needs at least 3 eps values");
  ScalingReport rep;
  for (double e : eps) {
    McOptions o;
    o.particles = particles;
    o.seed = seed;
    o.threads = threads;
    o.score = false;
    o.record_displacement = true;
    if (quadratic_theta) o.theta = e * e;
    const McResult r = run_chains(model, e, HistogramLattice{model.dim, 1, 1.0}, o);
    const double iqr = quantile(r.displacement, 0.75) - quantile(r.displacement, 0.25);
    rep.rows.push_back({e, r.histogram.theta, iqr, r.stats.mean_collisions});
  }
  rep.in_band = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double ratio = rep.rows[i - 1].iqr / rep.rows[i].iqr;
    rep.ratios.push_back(ratio);
    if (!(ratio >= rep.band_lo && ratio <= rep.band_hi)) rep.in_band = false;
  }
  return rep;
}

}  // namespace nctk
