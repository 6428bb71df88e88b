#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nbdlt/scenario/config.hpp"
#include "nbdlt/scenario/runner.hpp"
#include "nbdlt/scenario/sensor.hpp"

using namespace nbdlt;
using scenario::ScenarioConfig;

namespace {

ScenarioConfig quick_cfg(std::uint64_t seed, std::uint64_t n_tx,
                         const std::string& profile = "default") {
  ScenarioConfig cfg;
  scenario::apply_profile(cfg, profile);
  cfg.seed = seed;
  cfg.n_transactions = n_tx;
  return cfg;
}

}  // namespace

TEST_CASE("config text applies keys in order and tracks precedence", "[scenario]") {
  ScenarioConfig cfg;
  auto violations = scenario::parse_config_text(cfg,
                                                "# comment line\n"
                                                "\n"
                                                "scenario.mode = baseline\n"
                                                "scenario.n_ues = 3\n"
                                                "cell.nprach_period_ms = 40\n"
                                                "scenario.payload_bytes = 24  # trailing comment\n"
                                                "scenario.payload_bytes = 32\n");
  REQUIRE(violations.empty());
  CHECK(cfg.mode == ScenarioConfig::Mode::baseline);
  CHECK(cfg.n_ues == 3);
  CHECK(cfg.cell.nprach_period == sim::ms(40));
  CHECK(cfg.payload_bytes == 32);  // later assignment wins

  // A named profile mid-file resets its fields; later keys still override.
  ScenarioConfig cfg2;
  auto v2 = scenario::parse_config_text(cfg2,
                                        "scenario.profile = fig6\n"
                                        "cell.connected_setup_ms = 50\n");
  REQUIRE(v2.empty());
  CHECK(cfg2.profile.name == "fig6");
  CHECK(cfg2.profile.batch_timeout == sim::ms(30));
  CHECK(cfg2.cell.connected_setup == sim::ms(50));
  CHECK(cfg2.cell.inactivity == sim::seconds(5));
}

TEST_CASE("config violations are collected and name the offending key", "[scenario]") {
  ScenarioConfig cfg;
  auto violations = scenario::parse_config_text(cfg,
                                                "scenario.block_size = zero\n"
                                                "no equals sign here\n"
                                                "mystery.key = 1\n");
  REQUIRE(violations.size() == 3);
  CHECK(violations[0].find("scenario.block_size") != std::string::npos);
  CHECK(violations[1].find("line 2") != std::string::npos);
  CHECK(violations[2].find("unknown key") != std::string::npos);

  // Cross-field checks surface through load_config as one ConfigError.
  try {
    scenario::load_config("", "", {{"scenario.endorsers", "5"},
                                   {"scenario.peer_pool", "4"},
                                   {"scenario.block_size", "0"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("scenario.endorsers must not exceed") != std::string::npos);
    CHECK(what.find("scenario.block_size must be at least 1") != std::string::npos);
  }
}

TEST_CASE("explain-config documents every key with its default", "[scenario]") {
  const std::string text = scenario::explain_config();
  for (const char* key :
       {"scenario.mode", "scenario.payload_bytes", "cell.nprach_period_ms",
        "profile.backhaul_ms", "contract.threshold", "sensor.step_at_report"})
    CHECK(text.find(key) != std::string::npos);
  CHECK(text.find("default 40") != std::string::npos);  // nprach period
}

TEST_CASE("reading codec pads to size and survives a round trip", "[scenario]") {
  auto payload = scenario::encode_reading(451.287, 17, 50);
  REQUIRE(payload.size() == 50);
  for (std::size_t i = 12; i < payload.size(); ++i) CHECK(payload[i] == 0);
  auto r = scenario::decode_reading(payload);
  REQUIRE(r.has_value());
  CHECK(r->value == Catch::Approx(451.287).margin(0.001));
  CHECK(r->seq == 17);

  auto minimal = scenario::encode_reading(0.25, 1, 12);
  CHECK(minimal.size() == 12);
  CHECK(scenario::decode_reading(minimal).has_value());
  CHECK_FALSE(scenario::decode_reading(Bytes{1, 2, 3}).has_value());
}

TEST_CASE("traffic study covers the full grid with monotone trends", "[scenario]") {
  auto cfg = quick_cfg(3, 40, "fig5");
  auto study = scenario::run_usecase1(cfg);
  REQUIRE(study.runs.size() == 20);

  std::map<std::pair<int, int>, double> ratio;  // (E, P) -> ratio, E=0 baseline
  for (const auto& run : study.runs) {
    const auto& s = run.result.summary;
    REQUIRE(s.ratio_mean.has_value());
    REQUIRE(s.committed == s.generated);
    ratio[{s.endorsers, s.p_bytes}] = *s.ratio_mean;
  }
  REQUIRE(ratio.size() == 20);

  // More payload pushes the ratio up; more endorsers pull it down.
  for (int e = 1; e <= 4; ++e)
    for (int p : {50, 100, 150})
      CHECK(ratio.at({e, p}) < ratio.at({e, p + 50}));
  for (int p : {50, 100, 150, 200})
    for (int e = 1; e <= 3; ++e)
      CHECK(ratio.at({e + 1, p}) < ratio.at({e, p}));

  // Anchor configuration: overheads make uplink exactly half of downlink.
  CHECK(ratio.at({2, 50}) == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("latency study orders block sizes and keeps the baseline fastest",
          "[scenario]") {
  auto cfg = quick_cfg(2, 40, "fig6");
  auto study = scenario::run_usecase2(cfg);
  REQUIRE(study.runs.size() == 5);

  std::map<int, double> mean_s;  // b -> mean latency, 0 = baseline
  for (const auto& run : study.runs) {
    const auto& s = run.result.summary;
    REQUIRE(s.e2e_mean_s.has_value());
    mean_s[s.block_size] = *s.e2e_mean_s;
  }
  CHECK(mean_s.at(0) < mean_s.at(10));
  CHECK(mean_s.at(10) < mean_s.at(30));
  CHECK(mean_s.at(30) < mean_s.at(50));
  CHECK(mean_s.at(50) < mean_s.at(100));

  // Same seed means identical radio timing across runs, so the gap between
  // two block sizes is exactly the ordering cost difference: 6 ms per slot.
  CHECK(mean_s.at(100) - mean_s.at(10) == Catch::Approx(0.540).margin(1e-9));
}

TEST_CASE("identical config and seed replay to identical artifacts", "[scenario]") {
  auto cfg = quick_cfg(11, 25, "fig5");
  cfg.n_ues = 2;
  auto a = scenario::run_one(cfg, true);
  auto b = scenario::run_one(cfg, true);

  std::ostringstream csv_a, csv_b;
  metrics::write_per_tx_csv(csv_a, a.result.per_tx);
  metrics::write_per_tx_csv(csv_b, b.result.per_tx);
  CHECK(csv_a.str() == csv_b.str());

  std::ostringstream sum_a, sum_b;
  metrics::write_summary_row(sum_a, a.result.summary);
  metrics::write_summary_row(sum_b, b.result.summary);
  CHECK(sum_a.str() == sum_b.str());

  REQUIRE(a.result.chain.height() == b.result.chain.height());
  CHECK(a.result.chain.tip().block_hash == b.result.chain.tip().block_hash);
  CHECK(a.result.trace == b.result.trace);
}

TEST_CASE("trace bytes reconcile with the traffic ledger", "[scenario]") {
  auto cfg = quick_cfg(5, 30, "fig5");
  auto art = scenario::run_one(cfg, true);

  std::uint64_t trace_bytes = 0, trace_msgs = 0;
  for (const auto& rec : art.result.trace) {
    if (rec.kind != "radio.tx") continue;
    trace_msgs++;
    trace_bytes += static_cast<std::uint64_t>(rec.value);
  }
  CHECK(trace_msgs == art.result.traffic.total_messages());
  CHECK(trace_bytes == art.result.traffic.total_bytes());
}

TEST_CASE("baseline reporting is uplink-heavy under the default profile",
          "[scenario]") {
  auto cfg = quick_cfg(4, 20);
  cfg.mode = ScenarioConfig::Mode::baseline;
  auto art = scenario::run_one(cfg);
  REQUIRE(art.result.summary.ratio_mean.has_value());
  CHECK(*art.result.summary.ratio_mean > 1.5);
  CHECK(art.result.summary.blocks == 0);
}

TEST_CASE("anchor configuration stays in the published band across seeds",
          "[scenario]") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto cfg = quick_cfg(seed, 30, "fig5");
    auto art = scenario::run_one(cfg);
    REQUIRE(art.result.summary.ratio_mean.has_value());
    CHECK(*art.result.summary.ratio_mean > 0.4);
    CHECK(*art.result.summary.ratio_mean < 0.6);
  }
}

TEST_CASE("window crossing raises one alarm committed right after the trigger",
          "[scenario]") {
  auto cfg = quick_cfg(9, 12, "fig5");
  cfg.contract.threshold = 1000.0;
  cfg.contract.window = 3;
  cfg.sensor_step_at_report = 5;
  cfg.sensor_step_value = 1200.0;
  auto art = scenario::run_one(cfg);

  REQUIRE(art.result.alarms.size() == 1);
  const auto& alarm = art.result.alarms[0];
  CHECK(alarm.sensor == "ue0");
  CHECK(alarm.window_mean == Catch::Approx(1200.0).margin(0.01));
  CHECK(alarm.samples == 3);
  // Readings stay above the threshold afterwards, so the contract stays
  // latched and no further alarms appear.
  CHECK(art.result.alarm_txs == 1);
  // The alarm transaction lands in a block right behind its trigger.
  REQUIRE(alarm.committed_at.has_value());
  CHECK(alarm.committed_height > alarm.trigger_height);
  CHECK(alarm.committed_height <= alarm.trigger_height + 2);
  // It is on the chain with client "contract".
  bool found = false;
  for (const auto& block : art.result.chain.blocks())
    for (const auto& etx : block.txs)
      if (etx.proposal.tx_id == alarm.tx_id) {
        found = true;
        CHECK(etx.proposal.client == "contract");
        CHECK(block.height == alarm.committed_height);
      }
  CHECK(found);
}

TEST_CASE("transaction conservation holds under forced access failures",
          "[scenario]") {
  auto cfg = quick_cfg(6, 80, "fig5");
  cfg.n_ues = 2;
  cfg.report_interval = sim::ms(50);
  cfg.cell.preamble_pool = 1;
  cfg.cell.backoff_max = sim::us(0);
  cfg.cell.max_ra_attempts = 2;
  cfg.cell.inactivity = sim::ms(30);
  auto art = scenario::run_one(cfg);

  const auto& s = art.result.summary;
  CHECK(s.committed + s.rejected + s.dropped == s.generated);
  CHECK(s.generated == 80);
  CHECK(s.dropped > 0);
  CHECK(s.ra_failures > 0);
}
