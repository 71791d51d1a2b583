#pragma once

#include <map>
#include <optional>
#include <string>

#include "nctk/pathlen.hpp"
#include "nctk/scatter.hpp"
#include "nctk/sphere.hpp"

namespace nctk {

// (a) α > 2 (light tails count here too), (b) 1 < α < 2, (c) α = 2.
enum class RegimeTag { DiffusiveTail, SuperDiffusiveTail, Borderline };

struct Regime {
  RegimeTag tag = RegimeTag::DiffusiveTail;
  double alpha = std::numeric_limits<double>::infinity();
  double d0 = 0.0;

  // Validates that tag and α agree.
  static Regime make(RegimeTag tag, double alpha, double d0);
  // The regime implied by the distribution's tail.
  static Regime of(const PathLengthDistribution& d);

  char letter() const;  // 'a', 'b', 'c'
  // Exponent β of the limit multiplier |ξ|^β.
  double limit_exponent() const { return tag == RegimeTag::SuperDiffusiveTail ? alpha : 2.0; }
  std::string describe() const;
};

RegimeTag parse_regime_letter(const std::string& s);

// Throws DomainError if the distribution's tail does not match the regime.
void check_regime(const Regime& r, const PathLengthDistribution& d);

// θ(ε): ε² in (a), ε^α in (b), -ε² ln ε in (c).
double theta(const Regime& r, double eps);

struct CoefficientOptions {
  bool d3_includes_d0 = true;
};

struct CoefficientSet {
  int dim = 3;
  Regime regime;
  double mean_cosine = 0.0;  // μ̄0
  double nu0 = 1.0;
  double nu1 = 0.0;
  double first_moment = 0.0;
  double beta0 = 0.0;
  double second_angular = 0.0;  // ∫ (v·e)² dv
  std::optional<double> D0, D1, D1_tilde, D2, D3;
  double D3_printed = 0.0;  // (1/2)∫(v·e)² dv, no d0
  bool d3_includes_d0 = true;
  std::map<std::string, std::string> provenance;

  // The constant D of the limit multiplier D|ξ|^β for this regime.
  double limit_coefficient() const;
  std::string to_json() const;
};

CoefficientSet compute_coefficients(const PathLengthDistribution& d, const ScatterKernel& k,
                                    const DirectionQuadrature& q, const Regime& regime,
                                    const CoefficientOptions& opt = {});

// D2 = 2 d0 ∫_{S^{n-1}} ∫_0^∞ sin²(τ(v·e)/2) τ^{-α-1} dτ dv, 1 < α < 2.
// Nested adaptive quadrature in a frame aligned with e; the τ-range beyond
// 1e4 is added analytically with sin² replaced by its mean 1/2.
double d2_coefficient(double alpha, double d0, int dim);

}  // namespace nctk
