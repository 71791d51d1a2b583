#include "nctk/pathlen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nctk/quadrature.hpp"
#include "nctk/tail_transform.hpp"

namespace nctk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLorentzA = 24.0 / (kPi * kPi);
constexpr int kLorentzTerms = 60;  // m = 3 .. 62

// p_printed(s) = (24/π²) Σ_{m≥3} b_m s^{-m} for s ≥ 1
double lorentz_b(int m) {
  return (1.0 - std::ldexp(1.0, 2 - m)) / (double(m) * (m - 1) * (m - 2));
}

double lorentz_closed(double s) {
  const double u = 0.5 / s, x = 1.0 / s;
  const double d = 1.0 - x;
  const double right = (d == 0.0) ? 0.0 : 0.5 * d * d * std::log(std::abs(d));
  return u + 2.0 * (1.0 - u) * (1.0 - u) * std::log1p(-u) - right;
}

double lorentz_series(double s) {
  const double x = 1.0 / s;
  double xm = x * x * x, sum = 0.0;
  for (int m = 3; m < 3 + kLorentzTerms; ++m) {
    const double t = lorentz_b(m) * xm;
    sum += t;
    if (t < 1e-19 * sum) break;
    xm *= x;
  }
  return sum;
}

double stable_root(double A, double B, double C) {
  const double disc = std::max(0.0, B * B - 4.0 * A * C);
  return -2.0 * C / (B + std::sqrt(disc));
}

}  // namespace

PathLengthSpec PathLengthSpec::exponential(double rate) {
  PathLengthSpec s;
  s.family = PathFamily::Exponential;
  s.rate = rate;
  return s;
}

PathLengthSpec PathLengthSpec::power_law(double alpha, double d0) {
  PathLengthSpec s;
  s.family = PathFamily::PowerLawTail;
  s.alpha = alpha;
  s.d0 = d0;
  return s;
}

PathLengthSpec PathLengthSpec::lorentz_gas(bool printed) {
  PathLengthSpec s;
  s.family = PathFamily::LorentzGas2D;
  s.printed_lorentz = printed;
  return s;
}

PathLengthSpec PathLengthSpec::tabulated(std::vector<double> grid, std::vector<double> values) {
  PathLengthSpec s;
  s.family = PathFamily::Tabulated;
  s.grid = std::move(grid);
  s.values = std::move(values);
  return s;
}

PathLengthSpec read_pathlen_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("pathlen_file", "cannot open " + path);
  std::vector<double> s, p;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ConfigError("pathlen_file", "expected two columns in " + path);
    s.push_back(a);
    p.push_back(b);
  }
  return PathLengthSpec::tabulated(std::move(s), std::move(p));
}

double lorentz_gas_printed_pdf(double s) {
  if (!(s >= 0.0)) throw DomainError("lorentz_gas_printed_pdf: negative s");
  if (s < 0.5) return kLorentzA;
  return kLorentzA * (s < 8.0 ? lorentz_closed(s) : lorentz_series(s));
}

PathLengthDistribution make_distribution(const PathLengthSpec& spec) { return PathLengthDistribution(spec); }

PathLengthDistribution::PathLengthDistribution(const PathLengthSpec& spec) : spec_(spec) {
  switch (spec_.family) {
    case PathFamily::Exponential:
      if (!(spec_.rate > 0.0) || !std::isfinite(spec_.rate))
        throw DomainError("Exponential: rate must be positive");
      cutoff_ = 60.0 / spec_.rate;
      break;
    case PathFamily::PowerLawTail:
      if (!(spec_.alpha > 1.0))
        throw DomainError("PowerLawTail: need α > 1, otherwise the first moment diverges");
      if (!(spec_.d0 > 0.0)) throw DomainError("PowerLawTail: need d0 > 0");
      if (!(spec_.d0 < spec_.alpha))
        throw DomainError("PowerLawTail: need d0 < α, otherwise the core mass 1 - d0/α is negative");
      c0_ = 1.0 - spec_.d0 / spec_.alpha;
      J1_ = tail_J(spec_.alpha + 1.0, 1.0);
      cutoff_ = 1e4 * (0.5 * c0_ + spec_.d0 / (spec_.alpha - 1.0));
      break;
    case PathFamily::LorentzGas2D: {
      cutoff_ = 5e3;
      for (int m = 3; m < 3 + kLorentzTerms; ++m) lz_J1_.push_back(tail_J(double(m), 1.0));
      // graded panels on [1/2, 2]; p has s^2 ln s type points at 1/2 and 1
      std::vector<double> e{0.5};
      for (int j = 24; j >= 2; --j) e.push_back(0.5 + 0.25 * std::ldexp(1.0, -j));
      for (int j = 2; j <= 24; ++j) e.push_back(1.0 - 0.25 * std::ldexp(1.0, -j));
      e.push_back(1.0);
      for (int j = 24; j >= 2; --j) e.push_back(1.0 + 0.5 * std::ldexp(1.0, -j));
      for (double t = 1.25; t < 2.0 - 1e-12; t += 0.125) e.push_back(t);
      e.push_back(2.0);
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
      lz_nodes_ = e;
      break;
    }
    case PathFamily::Tabulated: {
      auto& g = spec_.grid;
      auto& v = spec_.values;
      if (g.size() < 2 || g.size() != v.size()) throw DomainError("Tabulated: need at least two (s, p) pairs");
      if (g.front() < 0.0) throw DomainError("Tabulated: s must be nonnegative");
      for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1])) throw DomainError("Tabulated: s must be strictly increasing");
      for (double p : v)
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("Tabulated: p values must be finite and >= 0");
      double mass = 0.0;
      for (std::size_t i = 1; i < g.size(); ++i) mass += 0.5 * (g[i] - g[i - 1]) * (v[i] + v[i - 1]);
      if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("Tabulated: table is not normalizable");
      for (double& p : v) p /= mass;
      tcum_.assign(g.size(), 0.0);
      for (std::size_t i = 1; i < g.size(); ++i)
        tcum_[i] = tcum_[i - 1] + 0.5 * (g[i] - g[i - 1]) * (v[i] + v[i - 1]);
      cutoff_ = g.back();
      break;
    }
  }

  if (spec_.family == PathFamily::LorentzGas2D) {
    auto build = [&]() {
      const GaussRule& gr = gl16();
      lz_qs_.clear();
      lz_qw_.clear();
      lz_surv_.assign(lz_nodes_.size(), 0.0);
      lz_surv_.back() = lorentz_tail_survival(2.0);
      for (std::size_t i = lz_nodes_.size() - 1; i-- > 0;) {
        const double a = lz_nodes_[i], b = lz_nodes_[i + 1];
        double part = 0.0;
        for (int k = 0; k < gr.size(); ++k) {
          const double s = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[k];
          const double w = 0.5 * (b - a) * gr.w[k] * lorentz_raw(s);
          lz_qs_.push_back(s);
          lz_qw_.push_back(w);
          part += w;
        }
        lz_surv_[i] = lz_surv_[i + 1] + part;
      }
    };
    build();
    const double printed_mass = lorentz_survival(0.0);
    if (!spec_.printed_lorentz) {
      lorentz_k_ = 1.0 / printed_mass;
      build();
    }
  }

  mass_ = truncated_moment(0, kInf);
  if (!normalized()) {
    if (spec_.family == PathFamily::LorentzGas2D && spec_.printed_lorentz) {
      warn("Lorentz-gas density as printed integrates to " + std::to_string(mass_) +
           ", not 1; it is kept for inspection only and cannot be sampled or used in a solver");
    } else {
      throw DomainError(name() + ": ∫p = " + std::to_string(mass_) + " differs from 1 by more than 1e-8");
    }
  }
  m1_ = truncated_moment(1, kInf);
  if (!std::isfinite(m1_)) throw DomainError(name() + ": first moment is not finite");
  if (spec_.family == PathFamily::LorentzGas2D) {
    beta0_ = m1_;  // ∫ survival = ∫ s p
    return;
  }
  beta0_ = integrate_pieces([this](double s) { return survival(s); }, breaks(kInf));
  switch (spec_.family) {
    case PathFamily::Exponential: beta0_ += std::exp(-spec_.rate * cutoff_) / spec_.rate; break;
    case PathFamily::PowerLawTail:
      beta0_ += spec_.d0 / spec_.alpha * std::pow(cutoff_, 1.0 - spec_.alpha) / (spec_.alpha - 1.0);
      break;
    case PathFamily::LorentzGas2D: {
      double t = 0.0;
      for (int m = 3; m < 3 + kLorentzTerms; ++m)
        t += lorentz_b(m) * std::pow(cutoff_, 2.0 - m) / ((m - 1.0) * (m - 2.0));
      beta0_ += lorentz_k_ * kLorentzA * t;
      break;
    }
    case PathFamily::Tabulated: break;
  }
}

std::string PathLengthDistribution::name() const {
  std::ostringstream os;
  switch (spec_.family) {
    case PathFamily::Exponential: os << "Exponential{rate=" << spec_.rate << "}"; break;
    case PathFamily::PowerLawTail: os << "PowerLawTail{alpha=" << spec_.alpha << ",d0=" << spec_.d0 << "}"; break;
    case PathFamily::LorentzGas2D: os << (spec_.printed_lorentz ? "LorentzGas2D{printed}" : "LorentzGas2D"); break;
    case PathFamily::Tabulated: os << "Tabulated{" << spec_.grid.size() << " nodes}"; break;
  }
  return os.str();
}

double PathLengthDistribution::lorentz_raw(double s) const {
  return lorentz_k_ * lorentz_gas_printed_pdf(s);
}

double PathLengthDistribution::lorentz_tail_survival(double s) const {
  const double x = 1.0 / s;
  double xm = x * x, sum = 0.0;
  for (int m = 3; m < 3 + kLorentzTerms; ++m) {
    const double t = lorentz_b(m) * xm / (m - 1.0);
    sum += t;
    if (t < 1e-19 * sum) break;
    xm *= x;
  }
  return lorentz_k_ * kLorentzA * sum;
}

// flat part, then the panel rule on [1/2, 2], then the series term by term
double PathLengthDistribution::lorentz_moment(int k, double S) const {
  const double kA = lorentz_k_ * kLorentzA;
  const double h = std::min(S, 0.5);
  double v = kA * std::pow(h, k + 1) / (k + 1);
  if (S <= 0.5) return v;
  const GaussRule& g = gl16();
  const std::size_t n = std::size_t(g.size());
  // lz_qs_ was filled panel by panel from the right
  const std::size_t panels = lz_nodes_.size() - 1;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = lz_nodes_[i], b = lz_nodes_[i + 1];
    if (a >= S) break;
    if (b <= S) {
      const std::size_t off = (panels - 1 - i) * n;
      for (std::size_t j = 0; j < n; ++j) v += lz_qw_[off + j] * std::pow(lz_qs_[off + j], k);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const double s = 0.5 * (a + S) + 0.5 * (S - a) * g.x[int(j)];
        v += 0.5 * (S - a) * g.w[int(j)] * std::pow(s, k) * lorentz_raw(s);
      }
    }
  }
  if (S > 2.0) v += tail_moment(k, 2.0, S);
  return v;
}

double PathLengthDistribution::lorentz_survival(double s) const {
  if (s >= 2.0) return lorentz_tail_survival(s);
  if (s < 0.5) return lz_surv_.front() + lorentz_k_ * kLorentzA * (0.5 - s);
  const auto it = std::upper_bound(lz_nodes_.begin(), lz_nodes_.end(), s);
  const std::size_t j = std::size_t(it - lz_nodes_.begin());  // lz_nodes_[j-1] <= s < lz_nodes_[j]
  const double b = lz_nodes_[j];
  const GaussRule& g = gl16();
  double part = 0.0;
  for (int k = 0; k < g.size(); ++k) part += g.w[k] * lorentz_raw(0.5 * (s + b) + 0.5 * (b - s) * g.x[k]);
  return lz_surv_[j] + 0.5 * (b - s) * part;
}

double PathLengthDistribution::pdf(double s) const {
  if (!(s >= 0.0)) throw DomainError("pdf: s must be nonnegative");
  switch (spec_.family) {
    case PathFamily::Exponential: return spec_.rate * std::exp(-spec_.rate * s);
    case PathFamily::PowerLawTail: return s <= 1.0 ? c0_ : spec_.d0 * std::pow(s, -spec_.alpha - 1.0);
    case PathFamily::LorentzGas2D: return lorentz_raw(s);
    case PathFamily::Tabulated: {
      const auto& g = spec_.grid;
      const auto& v = spec_.values;
      if (s < g.front() || s > g.back()) return 0.0;
      const auto it = std::upper_bound(g.begin(), g.end(), s);
      if (it == g.end()) return v.back();
      const std::size_t j = std::size_t(it - g.begin());
      const double f = (s - g[j - 1]) / (g[j] - g[j - 1]);
      return v[j - 1] + f * (v[j] - v[j - 1]);
    }
  }
  return 0.0;
}

double PathLengthDistribution::survival(double s) const {
  if (s <= 0.0) return spec_.family == PathFamily::LorentzGas2D ? lorentz_survival(0.0) : 1.0;
  switch (spec_.family) {
    case PathFamily::Exponential: return std::exp(-spec_.rate * s);
    case PathFamily::PowerLawTail:
      return s <= 1.0 ? 1.0 - c0_ * s : spec_.d0 / spec_.alpha * std::pow(s, -spec_.alpha);
    case PathFamily::LorentzGas2D: return lorentz_survival(s);
    case PathFamily::Tabulated: {
      const auto& g = spec_.grid;
      const auto& v = spec_.values;
      if (s <= g.front()) return 1.0;
      if (s >= g.back()) return 0.0;
      const std::size_t j = std::size_t(std::upper_bound(g.begin(), g.end(), s) - g.begin());
      const double h = g[j] - g[j - 1], t = s - g[j - 1];
      const double cum = tcum_[j - 1] + v[j - 1] * t + 0.5 * (v[j] - v[j - 1]) * t * t / h;
      return std::max(0.0, 1.0 - cum);
    }
  }
  return 0.0;
}

double PathLengthDistribution::hazard(double s) const {
  const double q = survival(s);
  if (q <= 0.0) return kInf;
  return pdf(s) / q;
}

void PathLengthDistribution::require_normalized(const char* who) const {
  if (!normalized())
    throw DomainError(std::string(who) + ": " + name() + " is not a probability law (∫p = " +
                      std::to_string(mass_) + ")");
}

double PathLengthDistribution::sample(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample: u must lie in (0,1)");
  switch (spec_.family) {
    case PathFamily::Exponential: return -std::log1p(-u) / spec_.rate;
    case PathFamily::PowerLawTail:
      if (u <= c0_) return u / c0_;
      return sample_upper(1.0 - u);
    case PathFamily::Tabulated: {
      const auto& g = spec_.grid;
      const auto& v = spec_.values;
      std::size_t lo = 0, hi = g.size() - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (tcum_[mid] <= u ? lo : hi) = mid;
      }
      const double h = g[hi] - g[lo];
      const double t = stable_root(0.5 * (v[hi] - v[lo]) / h, v[lo], -(u - tcum_[lo]));
      return g[lo] + std::clamp(t, 0.0, h);
    }
    case PathFamily::LorentzGas2D: return sample_upper(1.0 - u);
  }
  return 0.0;
}

double PathLengthDistribution::sample_upper(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("sample_upper: q must lie in (0,1)");
  require_normalized("sample");
  switch (spec_.family) {
    case PathFamily::Exponential: return -std::log(q) / spec_.rate;
    case PathFamily::PowerLawTail:
      if (q >= 1.0 - c0_) return (1.0 - q) / c0_;
      return std::pow(spec_.d0 / (spec_.alpha * q), 1.0 / spec_.alpha);
    case PathFamily::Tabulated: return sample(1.0 - q);
    case PathFamily::LorentzGas2D: {
      const double kA = lorentz_k_ * kLorentzA;
      if (q >= lz_surv_.front()) return 0.5 - (q - lz_surv_.front()) / kA;
      double lo, hi;
      if (q >= lz_surv_.back()) {
        // survival is decreasing along the panel ends
        std::size_t j = 1;
        while (lz_surv_[j] > q) ++j;
        lo = lz_nodes_[j - 1];
        hi = lz_nodes_[j];
      } else {
        lo = 2.0;
        hi = 4.0;
        while (lorentz_tail_survival(hi) > q) {
          lo = hi;
          hi *= 2.0;
        }
      }
      // safeguarded Newton on survival(s) = q
      double s = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        const double f = survival(s) - q;
        if (f > 0.0) lo = s; else hi = s;
        double next = s + f / pdf(s);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-15 * s) return next;
        s = next;
      }
      return s;
    }
  }
  return 0.0;
}

std::vector<double> PathLengthDistribution::breaks(double upto) const {
  const double end = std::min(upto, cutoff_);
  std::vector<double> b{0.0};
  auto push = [&](double x) {
    if (x > b.back() && x < end) b.push_back(x);
  };
  switch (spec_.family) {
    case PathFamily::Exponential:
      for (double x = 1.0 / spec_.rate; x < end; x *= 2.0) push(x);
      break;
    case PathFamily::PowerLawTail:
      for (double x = 1.0; x < end; x *= 10.0) push(x);
      break;
    case PathFamily::LorentzGas2D:
      push(0.5);
      for (double x = 1.0; x < end; x *= 2.0) push(x);
      break;
    case PathFamily::Tabulated:
      for (double x : spec_.grid) push(x);
      break;
  }
  b.push_back(end);
  return b;
}

double PathLengthDistribution::tail_moment(int k, double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (spec_.family) {
    case PathFamily::Exponential: {
      const double l = spec_.rate;
      auto G = [&](double s) {
        if (std::isinf(s)) return 0.0;
        double acc = 0.0, f = 1.0;  // k!/j!
        for (int j = k; j >= 0; --j) {
          acc += f * std::pow(s, j) * std::pow(l, j - k);
          f *= j;
        }
        return std::exp(-l * s) * acc;
      };
      return G(a) - G(b);
    }
    case PathFamily::PowerLawTail: {
      const double al = spec_.alpha, d0 = spec_.d0;
      if (double(k) == al) return d0 * std::log(b / a);
      const double hb = std::isinf(b) ? 0.0 : std::pow(b, k - al);
      return d0 * (std::pow(a, k - al) - hb) / (al - k);
    }
    case PathFamily::LorentzGas2D: {
      double t = 0.0;
      for (int m = 3; m < 3 + kLorentzTerms; ++m) {
        const int e = k - m + 1;
        if (e == 0) {
          t += lorentz_b(m) * std::log(b / a);
        } else {
          const double hb = std::isinf(b) ? 0.0 : std::pow(b, e);
          t += lorentz_b(m) * (std::pow(a, e) - hb) / double(-e);
        }
      }
      return lorentz_k_ * kLorentzA * t;
    }
    case PathFamily::Tabulated: return 0.0;
  }
  return 0.0;
}

double PathLengthDistribution::truncated_moment(int k, double S) const {
  if (k < 0 || k > 2) throw DomainError("truncated_moment: k must be 0, 1 or 2");
  if (!(S > 0.0)) throw DomainError("truncated_moment: S must be positive");
  if (std::isinf(S) && double(k) >= tail_exponent())
    throw DomainError("truncated_moment: moment of order " + std::to_string(k) + " diverges for " + name() +
                      "; pass a finite S");
  if (spec_.family == PathFamily::LorentzGas2D) return lorentz_moment(k, S);
  const auto b = breaks(S);
  double v = integrate_pieces([&](double s) { return std::pow(s, k) * pdf(s); }, b);
  if (S > cutoff_) v += tail_moment(k, cutoff_, S);
  return v;
}

bool PathLengthDistribution::finite_second_moment() const { return tail_exponent() > 2.0; }

double PathLengthDistribution::second_moment() const { return truncated_moment(2, kInf); }

double PathLengthDistribution::tail_exponent() const {
  switch (spec_.family) {
    case PathFamily::PowerLawTail: return spec_.alpha;
    case PathFamily::LorentzGas2D: return 2.0;
    default: return kInf;
  }
}

double PathLengthDistribution::tail_coefficient() const {
  switch (spec_.family) {
    case PathFamily::PowerLawTail: return spec_.d0;
    case PathFamily::LorentzGas2D: return lorentz_k_ * kLorentzA * lorentz_b(3);
    default: return 0.0;
  }
}

cplx PathLengthDistribution::tabulated_increment(double z) const {
  const auto& g = spec_.grid;
  const GaussRule& gr = gl16();
  cplx r = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double a = g[i - 1], b = g[i];
    const int panels = 1 + int(std::abs(z) * (b - a));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (int k = 0; k < gr.size(); ++k) {
        const double s = mid + 0.5 * h * gr.x[k];
        r += 0.5 * h * gr.w[k] * pdf(s) * expm1_i(z * s);
      }
    }
  }
  return r;
}

cplx PathLengthDistribution::lorentz_increment(double z) const {
  const double kA = lorentz_k_ * kLorentzA;
  cplx r = uniform_block_increment(kA, 0.5, z);
  const double az = std::abs(z);
  double S;
  if (az <= 0.25) {
    for (std::size_t j = 0; j < lz_qs_.size(); ++j) r += lz_qw_[j] * expm1_i(z * lz_qs_[j]);
    S = 2.0;
  } else {
    S = 2.0 + 200.0 / az;
    const GaussRule& g = gl16();
    std::vector<double> e = lz_nodes_;
    for (double t = 2.0 + 0.5; t < S; t += 0.5) e.push_back(t);
    e.push_back(S);
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      const double a = e[i], b = e[i + 1];
      const int panels = 1 + int(az * (b - a));
      const double h = (b - a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int k = 0; k < g.size(); ++k) {
          const double s = mid + 0.5 * h * g.x[k];
          r += 0.5 * h * g.w[k] * lorentz_raw(s) * expm1_i(z * s);
        }
      }
    }
  }
  for (int m = 3; m < 3 + kLorentzTerms; ++m) {
    const cplx t = kA * lorentz_b(m) * power_tail_increment(double(m), z, S, lz_J1_[m - 3]);
    r += t;
    if (kA * lorentz_b(m) * 2.0 * std::pow(S, 1.0 - m) < 1e-18 * std::abs(r)) break;
  }
  return r;
}

cplx PathLengthDistribution::increment(double z) const {
  if (z == 0.0) return 0.0;
  switch (spec_.family) {
    case PathFamily::Exponential: {
      const double l = spec_.rate;
      const double den = l * l + z * z;
      return {-z * z / den, -l * z / den};
    }
    case PathFamily::PowerLawTail:
      return uniform_block_increment(c0_, 1.0, z) +
             spec_.d0 * power_tail_increment(spec_.alpha + 1.0, z, 1.0, J1_);
    case PathFamily::LorentzGas2D: return lorentz_increment(z);
    case PathFamily::Tabulated: return tabulated_increment(z);
  }
  return 0.0;
}

cplx PathLengthDistribution::survival_transform(double z) const {
  if (z == 0.0) return beta0_;
  return cplx(0.0, 1.0) * increment(z) / z;
}

}  // namespace nctk
