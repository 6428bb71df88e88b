#ifndef NBDLT_SCENARIO_RUNNER_HPP
#define NBDLT_SCENARIO_RUNNER_HPP

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbdlt/metrics/latency.hpp"
#include "nbdlt/metrics/summary.hpp"
#include "nbdlt/scenario/config.hpp"
#include "nbdlt/scenario/simulation.hpp"
#include "nbdlt/sim/trace.hpp"

namespace nbdlt::scenario {

// Sweep grids of the two bundled studies.
inline const std::vector<int> kStudy1Payloads{50, 100, 150, 200};
inline const std::vector<int> kStudy1Endorsers{1, 2, 3, 4};
inline const std::vector<int> kStudy2BlockSizes{10, 30, 50, 100};

struct RunArtifacts {
  ScenarioConfig cfg;
  RunResult result;
};

struct StudyResult {
  std::string name;  // usecase1, usecase2, baseline or single
  std::vector<RunArtifacts> runs;
};

inline RunArtifacts run_one(ScenarioConfig cfg, bool trace = false) {
  Simulation sim(cfg, trace);
  return RunArtifacts{sim.config(), sim.run()};
}

// Traffic-ratio study: one device, every combination of required endorsers
// and payload size, plus a ledgerless baseline per payload size.
inline StudyResult run_usecase1(ScenarioConfig base, bool trace = false) {
  StudyResult out;
  out.name = "usecase1";
  base.n_ues = 1;
  for (int e : kStudy1Endorsers) {
    for (int p : kStudy1Payloads) {
      ScenarioConfig cfg = base;
      cfg.mode = ScenarioConfig::Mode::dlt;
      cfg.endorsers = e;
      cfg.payload_bytes = p;
      cfg.label = "dlt_E" + std::to_string(e) + "_P" + std::to_string(p);
      out.runs.push_back(run_one(std::move(cfg), trace));
    }
  }
  for (int p : kStudy1Payloads) {
    ScenarioConfig cfg = base;
    cfg.mode = ScenarioConfig::Mode::baseline;
    cfg.payload_bytes = p;
    cfg.label = "baseline_P" + std::to_string(p);
    out.runs.push_back(run_one(std::move(cfg), trace));
  }
  return out;
}

// Latency study: two devices, fixed payload and endorsement policy, sweeping
// the block size, plus a ledgerless baseline.
inline StudyResult run_usecase2(ScenarioConfig base, bool trace = false) {
  StudyResult out;
  out.name = "usecase2";
  base.n_ues = 2;
  base.payload_bytes = 50;
  base.endorsers = 2;
  {
    ScenarioConfig cfg = base;
    cfg.mode = ScenarioConfig::Mode::baseline;
    cfg.label = "baseline";
    out.runs.push_back(run_one(std::move(cfg), trace));
  }
  for (int b : kStudy2BlockSizes) {
    ScenarioConfig cfg = base;
    cfg.mode = ScenarioConfig::Mode::dlt;
    cfg.block_size = b;
    cfg.label = "dlt_b" + std::to_string(b);
    out.runs.push_back(run_one(std::move(cfg), trace));
  }
  return out;
}

inline StudyResult run_baseline(ScenarioConfig cfg, bool trace = false) {
  StudyResult out;
  out.name = "baseline";
  cfg.mode = ScenarioConfig::Mode::baseline;
  if (cfg.label == "run") cfg.label = "baseline";
  out.runs.push_back(run_one(std::move(cfg), trace));
  return out;
}

inline StudyResult run_single(ScenarioConfig cfg, bool trace = false) {
  StudyResult out;
  out.name = "single";
  out.runs.push_back(run_one(std::move(cfg), trace));
  return out;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

inline void write_fig5(const std::filesystem::path& dir, const StudyResult& study) {
  auto os = open_out(dir / "fig5.csv");
  os << "P_bytes,E,ratio_mean\n";
  for (const auto& run : study.runs) {
    const auto& s = run.result.summary;
    os << s.p_bytes << ',' << s.endorsers << ',' << metrics::fmt6(s.ratio_mean)
       << '\n';
  }
  auto doc = open_out(dir / "fig5_columns.txt");
  doc << "fig5.csv: mean per-transaction UL/DL byte ratio per configuration\n"
      << "P_bytes     application payload per report, bytes\n"
      << "E           required endorsing peers; 0 marks the ledgerless baseline\n"
      << "ratio_mean  mean over transactions of uplink bytes / downlink bytes\n";
}

inline void write_fig6(const std::filesystem::path& dir, const StudyResult& study) {
  auto os = open_out(dir / "fig6.csv");
  os << "b,e2e_mean_s,e2e_p95_s\n";
  for (const auto& run : study.runs) {
    const auto& s = run.result.summary;
    os << s.block_size << ',' << metrics::fmt6(s.e2e_mean_s) << ','
       << metrics::fmt6(s.e2e_p95_s) << '\n';
  }
  auto doc = open_out(dir / "fig6_columns.txt");
  doc << "fig6.csv: end-to-end report latency per block size\n"
      << "b           transactions per block cut; 0 marks the ledgerless baseline\n"
      << "e2e_mean_s  mean seconds from report generation to confirmed delivery\n"
      << "e2e_p95_s   95th percentile of the same distribution (nearest rank)\n";
}

inline void write_alarms(const std::filesystem::path& dir, const StudyResult& study) {
  auto os = open_out(dir / "alarms.csv");
  os << "scenario,sensor,detected_us,window_mean,samples,trigger_height,"
        "tx_id,committed_height,committed_us\n";
  for (const auto& run : study.runs) {
    for (const auto& a : run.result.alarms) {
      os << run.cfg.label << ',' << a.sensor << ',' << a.detected.count() << ','
         << metrics::fmt6(a.window_mean) << ',' << a.samples << ','
         << a.trigger_height << ',' << a.tx_id.hex() << ','
         << a.committed_height << ',';
      if (a.committed_at) os << a.committed_at->count();
      os << '\n';
    }
  }
}

inline void write_meta(const std::filesystem::path& dir, const StudyResult& study,
                       std::uint64_t seed) {
  nlohmann::ordered_json meta;
  meta["study"] = study.name;
  meta["seed"] = seed;
  meta["hash"] = "SHA-256";
  meta["signature"] = "ECDSA P-256, deterministic nonces";
  meta["runs"] = nlohmann::ordered_json::array();
  for (const auto& run : study.runs) {
    const auto& s = run.result.summary;
    nlohmann::ordered_json j;
    j["label"] = run.cfg.label;
    j["mode"] = s.mode;
    j["P_bytes"] = s.p_bytes;
    j["E"] = s.endorsers;
    j["b"] = s.block_size;
    j["profile"] = run.cfg.profile.name;
    j["generated"] = s.generated;
    j["committed"] = s.committed;
    j["rejected"] = s.rejected;
    j["dropped"] = s.dropped;
    j["ra_failures"] = s.ra_failures;
    j["blocks"] = s.blocks;
    j["alarm_txs"] = run.result.alarm_txs;
    j["txs_without_dl"] = run.result.txs_without_dl;
    if (run.result.ratio_of_totals)
      j["ratio_of_totals"] = *run.result.ratio_of_totals;
    meta["runs"].push_back(std::move(j));
  }
  auto os = open_out(dir / "meta.json");
  os << meta.dump(2) << '\n';
}

}  // namespace detail

// Writes every artifact of a study under `out_dir` (created if needed).
inline void write_study(const std::string& out_dir, const StudyResult& study,
                        std::uint64_t seed, bool trace = false) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string());

  {
    auto os = detail::open_out(dir / "summary.csv");
    std::vector<metrics::RunSummary> rows;
    for (const auto& run : study.runs) rows.push_back(run.result.summary);
    metrics::write_summary_csv(os, rows);
  }

  for (const auto& run : study.runs) {
    const std::string& label = run.cfg.label;
    {
      auto os = detail::open_out(dir / ("per_tx_" + label + ".csv"));
      metrics::write_per_tx_csv(os, run.result.per_tx);
    }
    {
      auto os = detail::open_out(dir / ("hist_" + label + ".csv"));
      os << "bin_ms,count\n";
      for (const auto& [bin, count] : metrics::histogram_ms(run.result.e2e_seconds))
        os << bin << ',' << count << '\n';
    }
    if (run.cfg.mode == ScenarioConfig::Mode::dlt) {
      auto os = detail::open_out(dir / ("chain_" + label + ".jsonl"));
      run.result.chain.write_jsonl(os);
    }
    if (trace) {
      auto os = detail::open_out(dir / ("trace_" + label + ".csv"));
      sim::write_trace(os, run.result.trace);
    }
  }

  if (study.name == "usecase1") detail::write_fig5(dir, study);
  if (study.name == "usecase2") detail::write_fig6(dir, study);
  detail::write_alarms(dir, study);
  detail::write_meta(dir, study, seed);
}

}  // namespace nbdlt::scenario

#endif
