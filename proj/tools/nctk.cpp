// nctk <kind> --config <path> [--out <dir>] [--seed <u64>] [--threads <k>]
//
// exit 0: every check passed, 1: some check failed, 2: bad config or input.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "nctk/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nonclassical transport toolkit"};
  std::string kind, config, out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("kind", kind, "coeffs | lambda-sweep | converge | mc-compare | lorentz-tail | wellposed-check")
      ->required();
  app.add_option("--config", config, "configuration file")->required();
  auto* out_opt = app.add_option("--out", out, "output directory (default: config `out` or .)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides the config");
  auto* thr_opt = app.add_option("--threads", threads, "worker threads (fallback: NCTK_THREADS, then 1)")
                      ->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const nctk::ExperimentKind k = nctk::parse_kind(kind);
    nctk::ModelConfig cfg = nctk::load_config(config);
    if (*seed_opt) cfg.set_seed(seed);
    if (*thr_opt) cfg.threads = threads;
    std::string dir = *out_opt ? out : (cfg.out_dir.empty() ? std::string(".") : cfg.out_dir);

    const nctk::ExperimentReport r = nctk::run_experiment(k, cfg, dir);
    for (const auto& c : r.checks)
      std::printf("%-4s %-28s value=%s threshold=%s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  nctk::fmt17(c.value).c_str(), nctk::fmt17(c.threshold).c_str(), c.detail.empty() ? "" : "  ",
                  c.detail.c_str());
    std::printf("%s: %s (config %s) -> %s\n", kind.c_str(), r.all_pass() ? "all checks passed" : "CHECK FAILURE",
                r.config_hash.c_str(), dir.c_str());
    return r.all_pass() ? 0 : 1;
  } catch (const nctk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nctk::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
