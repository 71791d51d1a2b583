// One line per acceptance criterion:  nctk_acceptance [k ...] [--out dir]
// With no k, runs 1..8. Exit status 0 only if every requested criterion holds.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nctk/harness.hpp"

using namespace nctk;
namespace fs = std::filesystem;

namespace {

constexpr double kD2Golden = 0.66843420656979331;  // tests/oracles/d2_oracle.py

fs::path g_out = fs::temp_directory_path() / "nctk_acceptance";

struct Outcome {
  bool pass = true;
  std::string detail;
  void need(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

ModelConfig config(const std::string& name) { return load_config((fs::path(NCTK_ACCEPTANCE_CONFIGS) / name).string()); }

ExperimentReport run(ExperimentKind k, const std::string& name, const std::string& tag = "") {
  ModelConfig c = config(name + ".conf");
  return run_experiment(k, c, (g_out / (tag.empty() ? name : tag)).string());
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

void need_check(Outcome& o, const ExperimentReport& r, const std::string& check, const std::string& label) {
  const Check* c = r.find(check);
  if (!c) {
    o.need(false, label + " (missing check " + check + ")");
    return;
  }
  o.need(c->pass, label + " " + num(c->value) + " vs " + num(c->threshold));
}

Outcome criterion1() {
  Outcome o;
  const auto r = run(ExperimentKind::Coeffs, "coeffs_exponential");
  need_check(o, r, "half_second_angular_moment", "|(1/2)<mu^2> - 1/6|");
  need_check(o, r, "golden_D0", "|D0 - 2|");
  need_check(o, r, "golden_nu1", "|nu1|");
  need_check(o, r, "golden_D1", "|D1 - 1/3|");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto b = run(ExperimentKind::LambdaSweep, "lambda_b");
  const double D2 = b.results["limit"]["coefficient"].get<double>();
  o.need(std::abs(D2 - kD2Golden) <= 1e-10 * kD2Golden, "D2 = frozen golden");
  need_check(o, b, "limit_error_monotone", "alpha=1.5 monotone, last err");
  need_check(o, b, "limit_final_rel_error", "alpha=1.5 rel err");
  const auto a = run(ExperimentKind::LambdaSweep, "lambda_a");
  need_check(o, a, "limit_error_monotone", "alpha=3 monotone, last err");
  need_check(o, a, "limit_final_rel_error", "alpha=3 rel err");
  const auto c = run(ExperimentKind::LambdaSweep, "lambda_c");
  need_check(o, c, "limit_error_monotone", "alpha=2 monotone, last err");
  need_check(o, c, "limit_final_rel_error", "alpha=2 rel err");
  const auto& t = c.results["d3_toggle"];
  o.detail += "; alpha=2 d0 on/off rel err " + num(t["rel_err"].get<double>()) + "/" +
              num(t["rel_err_other"].get<double>()) + ", matching limit " +
              (t["match_includes_d0"].get<bool>() ? "includes d0" : "omits d0");
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (const char* n : {"lambda_a", "lambda_b", "lambda_c"}) {
    const auto r = run(ExperimentKind::LambdaSweep, n, std::string(n) + "_bounds");
    need_check(o, r, "bounds", std::string(n) + " max |Lambda|/bound");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto r = run(ExperimentKind::WellposedCheck, "wellposed");
  need_check(o, r, "phi_norm_bound", "norm ratio");
  need_check(o, r, "zero_mode_identity", "zero mode");
  need_check(o, r, "positivity", "min density");
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (auto [n, label] : {std::pair{"converge_a", "(a)"}, std::pair{"converge_b", "(b)"}, std::pair{"converge_c", "(c)"}}) {
    const auto r = run(ExperimentKind::Converge, n);
    const std::string l = label;
    need_check(o, r, "phi_error_decreasing", l + " E decreasing, last");
    need_check(o, r, "phi_final_error", l + " E");
    need_check(o, r, "eta_error_decreasing", l + " E_eta decreasing, last");
    need_check(o, r, "eta_final_error", l + " E_eta");
    if (l == "(b)") {
      need_check(o, r, "negative_control_beta2", "(b) vs |xi|^2 min E");
      need_check(o, r, "negative_control_plateau", "(b) best-fit |xi|^2 E ratio");
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto r = run(ExperimentKind::McCompare, "mc_compare");
  need_check(o, r, "bins_within_3sigma", "fraction of bins within 3 sigma");
  need_check(o, r, "mean_collisions", "collisions rel dev");
  o.need(r.results["chain_stats"]["particles"].get<std::uint64_t>() == 1000000, "N = 1e6");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto r = run(ExperimentKind::LorentzTail, "lorentz");
  need_check(o, r, "tail_s3p", "s^3 p(100) rel dev");
  need_check(o, r, "normalization", "|int p - 1|");
  need_check(o, r, "continuity_half", "jump at 1/2");
  need_check(o, r, "m2_log_slope", "M2 slope rel dev");
  return o;
}

std::string csvs(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    all += f.filename().string() + "\n" + ss.str();
  }
  return all;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<std::pair<ExperimentKind, std::string>> runs = {
      {ExperimentKind::Coeffs, "coeffs_exponential"}, {ExperimentKind::LambdaSweep, "lambda_b"},
      {ExperimentKind::Converge, "converge_a"},       {ExperimentKind::WellposedCheck, "wellposed"},
      {ExperimentKind::LorentzTail, "lorentz"},       {ExperimentKind::McCompare, "determinism_mc"}};
  for (const auto& [k, name] : runs) {
    ModelConfig c = config(name + ".conf");
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      if (k == ExperimentKind::McCompare) c.threads = rep == 0 ? 4 : 3;
      const fs::path dir = g_out / ("determinism_" + name + "_" + std::to_string(rep));
      fs::remove_all(dir);
      run_experiment(k, c, dir.string());
      const std::string bytes = csvs(dir);
      if (rep == 0)
        first = bytes;
      else
        o.need(!bytes.empty() && bytes == first, kind_name(k) + " identical (" + std::to_string(bytes.size()) + " bytes)");
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  set_warn_sink([](const std::string&) {});
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      which.push_back(std::atoi(a.c_str()));
    }
  }
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<std::function<Outcome()>> crit = {criterion1, criterion2, criterion3, criterion4,
                                                      criterion5, criterion6, criterion7, criterion8};
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit[std::size_t(k - 1)]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.1f s) %s\n", k, o.pass ? "PASS" : "FAIL", s, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
