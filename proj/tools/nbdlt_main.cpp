// Command-line front end: runs one scenario or a bundled study from a flat
// config file and writes every artifact into the output directory.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nbdlt/error.hpp"
#include "nbdlt/scenario/runner.hpp"

namespace {

void print_run_line(const nbdlt::scenario::RunArtifacts& run) {
  using nbdlt::metrics::fmt6;
  const auto& s = run.result.summary;
  std::cout << "  " << s.scenario << ": mode=" << s.mode << " P=" << s.p_bytes;
  if (s.mode == "dlt") std::cout << " E=" << s.endorsers << " b=" << s.block_size;
  if (s.ratio_mean) std::cout << " ratio=" << fmt6(*s.ratio_mean);
  if (s.e2e_mean_s)
    std::cout << " e2e_mean_s=" << fmt6(*s.e2e_mean_s)
              << " e2e_p95_s=" << fmt6(*s.e2e_p95_s);
  std::cout << " committed=" << s.committed << "/" << s.generated;
  if (s.rejected) std::cout << " rejected=" << s.rejected;
  if (s.dropped) std::cout << " dropped=" << s.dropped;
  if (run.result.alarm_txs) std::cout << " alarms=" << run.result.alarm_txs;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic event simulator of narrowband IoT reporting "
               "over a permissioned ledger"};
  app.require_subcommand(1);

  auto* explain = app.add_subcommand(
      "explain-config", "Print every configuration key with type and default");

  std::string config_path;
  std::string profile;
  std::string scenario = "single";
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool trace = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write artifacts");
  run->add_option("--config", config_path,
                  "flat 'key = value' config file (see explain-config)");
  run->add_option("--scenario", scenario, "what to run")
      ->check(CLI::IsMember({"usecase1", "usecase2", "baseline", "single"}))
      ->capture_default_str();
  run->add_option("--seed", seed, "master seed")->capture_default_str();
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--profile", profile,
                  "calibration preset: default, fig5 or fig6 "
                  "(usecase1 and usecase2 pick theirs when omitted)");
  run->add_flag("--trace", trace, "also write per-run event traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (explain->parsed()) {
    std::cout << nbdlt::scenario::explain_config();
    return 0;
  }

  try {
    std::string effective_profile = profile;
    if (effective_profile.empty()) {
      if (scenario == "usecase1") effective_profile = "fig5";
      if (scenario == "usecase2") effective_profile = "fig6";
    }
    auto cfg = nbdlt::scenario::load_config(config_path, effective_profile);
    cfg.seed = seed;

    nbdlt::scenario::StudyResult study;
    if (scenario == "usecase1")
      study = nbdlt::scenario::run_usecase1(cfg, trace);
    else if (scenario == "usecase2")
      study = nbdlt::scenario::run_usecase2(cfg, trace);
    else if (scenario == "baseline")
      study = nbdlt::scenario::run_baseline(cfg, trace);
    else
      study = nbdlt::scenario::run_single(cfg, trace);

    nbdlt::scenario::write_study(out_dir, study, seed, trace);

    std::cout << study.name << " (seed " << seed << ", profile "
              << cfg.profile.name << "):\n";
    for (const auto& r : study.runs) print_run_line(r);
    std::cout << "artifacts written to " << out_dir << '\n';
    return 0;
  } catch (const nbdlt::ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
