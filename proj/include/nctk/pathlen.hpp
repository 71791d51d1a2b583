#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nctk/common.hpp"

namespace nctk {

enum class PathFamily { Exponential, PowerLawTail, LorentzGas2D, Tabulated };

struct PathLengthSpec {
  PathFamily family = PathFamily::Exponential;
  double rate = 1.0;               // Exponential
  double alpha = 0.0, d0 = 0.0;    // PowerLawTail: p = d0 s^{-α-1} for s > 1
  bool printed_lorentz = false;    // LorentzGas2D: keep the formula as printed (mass 2)
  std::vector<double> grid, values;  // Tabulated

  static PathLengthSpec exponential(double rate);
  static PathLengthSpec power_law(double alpha, double d0);
  static PathLengthSpec lorentz_gas(bool printed = false);
  static PathLengthSpec tabulated(std::vector<double> s, std::vector<double> p);
};

// Two whitespace-separated columns (s, p(s)), s strictly increasing.
PathLengthSpec read_pathlen_table(const std::string& path);

// The 2D Lorentz-gas density exactly as printed: 24/π² below 1/2, the
// logarithmic branch (with |·| inside the logs) from 1/2 on.
double lorentz_gas_printed_pdf(double s);

// Path-length law p(s) with CDF, inverse CDF, moments and characteristic
// increments. Immutable after construction.
//
// LorentzGas2D: the printed formula integrates to 2, not 1. The default
// object divides by the numerically computed mass; `printed_lorentz` keeps
// the raw formula for inspection only and refuses to act as a probability law.
class PathLengthDistribution {
 public:
  explicit PathLengthDistribution(const PathLengthSpec& spec);

  PathFamily family() const { return spec_.family; }
  const PathLengthSpec& spec() const { return spec_; }
  std::string name() const;

  double pdf(double s) const;
  double cdf(double s) const { return 1.0 - survival(s); }
  double survival(double s) const;  // 1 - F(s), accurate in the tail
  double hazard(double s) const;    // Σ_t(s) = p / (1 - F)

  // F^{-1}(u), u ∈ (0,1).
  double sample(double u) const;
  // F^{-1}(1 - q): same law, but keeps full resolution far in the tail.
  double sample_upper(double q) const;

  // ∫_0^S s^k p ds, k ∈ {0,1,2}; S may be +inf when the moment converges.
  double truncated_moment(int k, double S) const;

  double mass() const { return mass_; }  // ∫p, computed by quadrature
  bool normalized() const { return std::abs(mass_ - 1.0) <= 1e-8; }
  double first_moment() const { return m1_; }
  double beta0() const { return beta0_; }  // ∫(1-F), independent of m1_
  bool finite_second_moment() const;
  double second_moment() const;

  // Tail p ~ d0 s^{-α-1}; α = +inf for light tails.
  double tail_exponent() const;
  double tail_coefficient() const;

  // ∫ p(s)(e^{-izs} - 1) ds, accurate to relative precision for tiny z.
  cplx increment(double z) const;
  // ∫ p(s) e^{-izs} ds
  cplx characteristic(double z) const { return 1.0 + increment(z); }
  // B(z) = ∫ e^{-izs}(1 - F(s)) ds; B(0) = β0.
  cplx survival_transform(double z) const;

  // Throws unless the object is a normalized probability law.
  void require_normalized(const char* who) const;

 private:
  double lorentz_scale() const { return lorentz_k_; }
  double lorentz_raw(double s) const;  // printed formula times scale
  double lorentz_tail_survival(double s) const;
  double lorentz_survival(double s) const;
  double lorentz_moment(int k, double S) const;
  cplx lorentz_increment(double z) const;
  cplx tabulated_increment(double z) const;
  double tail_moment(int k, double a, double b) const;  // analytic, a ≥ cutoff
  std::vector<double> breaks(double upto) const;

  PathLengthSpec spec_;
  double c0_ = 0.0;  // PowerLawTail core density
  cplx J1_;          // tail_J(α+1, 1)
  double cutoff_ = 0.0;
  double mass_ = 1.0, m1_ = 0.0, beta0_ = 0.0;

  // LorentzGas2D
  double lorentz_k_ = 1.0;               // 1 or 1/mass
  std::vector<double> lz_nodes_;         // graded panel ends on [1/2, 2]
  std::vector<double> lz_surv_;          // survival at those ends (scale 1)
  std::vector<double> lz_qs_, lz_qw_;    // fixed GL nodes on [1/2, 2], weights × p
  std::vector<cplx> lz_J1_;              // tail_J(m, 1), m = 3..

  // Tabulated: normalized values and cumulative mass at the nodes
  std::vector<double> tcum_;
};

PathLengthDistribution make_distribution(const PathLengthSpec& spec);

}  // namespace nctk
