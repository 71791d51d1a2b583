#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nctk/mc.hpp"
#include "nctk/spectral.hpp"

namespace nctk {

enum class ExperimentKind { Coeffs, LambdaSweep, Converge, McCompare, LorentzTail, WellposedCheck };

ExperimentKind parse_kind(const std::string& s);  // throws ConfigError
std::string kind_name(ExperimentKind k);

// Flat `key = value` configuration, `#` starts a comment. Lists are comma
// separated, optionally in brackets. Unknown keys are errors.
struct ModelConfig {
  int dim = 3;
  double c = 0.5;
  KernelSpec kernel;
  PathLengthSpec path;
  std::optional<RegimeTag> regime_tag;  // as written; checked against the path law
  Regime regime;
  bool d3_includes_d0 = true;
  SourceSpec source;

  std::vector<double> eps;  // strictly decreasing
  std::vector<double> xi;   // lambda-sweep bound grid
  std::vector<double> bounds_eps;
  double xi_ref = 1.0;
  int quad_order = 8;
  double xi_max = 16.0;
  int grid_count = 65;       // radial points
  int cartesian_count = 65;  // per axis, odd
  bool negative_control = true;

  std::uint64_t particles = 100000;
  int bins = 25;
  double bin_width = 0.5;
  int fft_count = 129;

  double lorentz_s_tail = 100.0;
  double lorentz_s_min = 1e2, lorentz_s_max = 1e5;
  int lorentz_points = 31;

  std::uint64_t seed = 1;
  int threads = 0;  // 0: NCTK_THREADS or 1
  std::string out_dir;

  // Normalized `key=value` lines in key order; threads and out are left out
  // because they do not change any result.
  std::map<std::string, std::string> echo;

  std::string canonical() const;
  std::string hash() const;  // FNV-1a 64 of canonical(), 16 hex digits

  void set_seed(std::uint64_t s);
  TransportModel transport() const;
};

ModelConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ModelConfig load_config(const std::string& path);

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::Coeffs;
  std::string config_hash;
  std::map<std::string, std::string> inputs;
  std::vector<Check> checks;
  std::vector<std::string> files;
  std::vector<std::pair<std::string, double>> timings;  // seconds
  nlohmann::ordered_json results;

  bool all_pass() const;
  const Check* find(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
};

// Runs one experiment and writes its CSV tables and summary.json into
// out_dir (created if needed). Throws ConfigError/DomainError on bad input.
ExperimentReport run_experiment(ExperimentKind kind, const ModelConfig& cfg, const std::string& out_dir);

// 17 significant digits
std::string fmt17(double v);

}  // namespace nctk
