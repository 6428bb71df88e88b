#ifndef NBDLT_SCENARIO_CONFIG_HPP
#define NBDLT_SCENARIO_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/ledger/contract.hpp"
#include "nbdlt/ledger/types.hpp"
#include "nbdlt/radio/cell_config.hpp"
#include "nbdlt/scenario/profiles.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::scenario {

struct ScenarioConfig {
  enum class Mode { dlt, baseline };

  Mode mode = Mode::dlt;
  std::string label = "run";
  int n_ues = 1;
  int payload_bytes = 50;  // application payload per report, the P axis
  sim::SimTime report_interval = sim::seconds(10);
  std::uint64_t n_transactions = 200;  // total reports across all UEs
  int ce_level = 0;

  int endorsers = 2;   // the E axis
  int block_size = 30; // the b axis
  int peer_pool = 4;   // endorsing peers available for selection
  ledger::ConfirmationPolicy confirmation;
  ledger::ContractConfig contract;

  double sensor_mean = 450.0;
  double sensor_sd = 30.0;
  // When >= 0, every reading from that report index on is pinned to
  // step_value.  Used to drive the window mean across the alarm threshold.
  long long sensor_step_at_report = -1;
  double sensor_step_value = 1200.0;

  radio::CellConfig cell;
  CalibrationProfile profile;

  std::uint64_t seed = 1;

  std::vector<std::string> validate() const {
    std::vector<std::string> v = cell.validate();
    if (n_ues < 1) v.push_back("scenario.n_ues must be at least 1");
    if (payload_bytes < 12)
      v.push_back("scenario.payload_bytes must be at least 12 (reading codec)");
    if (payload_bytes > 100000)
      v.push_back("scenario.payload_bytes must not exceed 100000");
    if (report_interval <= sim::us(0))
      v.push_back("scenario.report_interval_ms must be positive");
    if (n_transactions < 1)
      v.push_back("scenario.n_transactions must be at least 1");
    if (ce_level < 0 || ce_level > 2)
      v.push_back("scenario.ce_level must lie in [0, 2]");
    if (endorsers < 1) v.push_back("scenario.endorsers must be at least 1");
    if (peer_pool < 1) v.push_back("scenario.peer_pool must be at least 1");
    if (endorsers > peer_pool)
      v.push_back("scenario.endorsers must not exceed scenario.peer_pool");
    if (block_size < 1) v.push_back("scenario.block_size must be at least 1");
    if (confirmation.k < 1)
      v.push_back("scenario.confirmation_k must be at least 1");
    if (confirmation.dl_bytes < 0)
      v.push_back("scenario.confirmation_dl_bytes must be non-negative");
    if (contract.window < 1) v.push_back("contract.window must be at least 1");
    if (sensor_sd < 0.0) v.push_back("sensor.sd must be non-negative");
    if (profile.header_ul_bytes < 0)
      v.push_back("profile.header_ul_bytes must be non-negative");
    if (profile.header_dl_bytes < 0)
      v.push_back("profile.header_dl_bytes must be non-negative");
    if (profile.baseline_ack_bytes < 0)
      v.push_back("profile.baseline_ack_bytes must be non-negative");
    if (profile.backhaul < sim::us(0))
      v.push_back("profile.backhaul_ms must be non-negative");
    if (profile.endorse_service < sim::us(0))
      v.push_back("profile.endorse_service_ms must be non-negative");
    if (profile.batch_timeout <= sim::us(0))
      v.push_back("profile.batch_timeout_ms must be positive");
    if (profile.block_proc_base < sim::us(0))
      v.push_back("profile.block_proc_base_ms must be non-negative");
    if (profile.block_proc_per_tx < sim::us(0))
      v.push_back("profile.block_proc_per_tx_ms must be non-negative");
    return v;
  }
};

// Selecting a named profile also refreshes the two radio-side values it
// carries.  Later cell.* keys still override them.
inline void apply_profile(ScenarioConfig& cfg, const std::string& name) {
  cfg.profile = get_profile(name);
  cfg.cell.connected_setup = cfg.profile.connected_setup;
  cfg.cell.inactivity = cfg.profile.inactivity;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::optional<long long> parse_ll(const std::string& s) {
  long long out = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return out;
}

inline std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t out = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return out;
}

inline std::optional<double> parse_f64(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double out = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  if (!std::isfinite(out)) return std::nullopt;
  return out;
}

struct KeyInfo {
  std::string key;
  std::string type;
  std::string desc;
  std::function<std::string(const ScenarioConfig&)> get;
  // Returns an error message, or nullopt on success.
  std::function<std::optional<std::string>(ScenarioConfig&, const std::string&)> set;
};

inline std::string fmt_ms(sim::SimTime t) {
  double ms = static_cast<double>(sim::count_us(t)) / 1000.0;
  std::ostringstream os;
  os << ms;
  return os.str();
}

inline KeyInfo int_key(std::string key, std::string desc,
                       std::function<int&(ScenarioConfig&)> ref) {
  return KeyInfo{
      key, "int", std::move(desc),
      [ref](const ScenarioConfig& c) {
        return std::to_string(ref(const_cast<ScenarioConfig&>(c)));
      },
      [key, ref](ScenarioConfig& c, const std::string& v) -> std::optional<std::string> {
        auto n = parse_ll(v);
        if (!n || *n < -2147483647LL || *n > 2147483647LL)
          return key + ": cannot parse '" + v + "' as integer";
        ref(c) = static_cast<int>(*n);
        return std::nullopt;
      }};
}

inline KeyInfo ms_key(std::string key, std::string desc,
                      std::function<sim::SimTime&(ScenarioConfig&)> ref) {
  return KeyInfo{
      key, "milliseconds", std::move(desc),
      [ref](const ScenarioConfig& c) {
        return fmt_ms(ref(const_cast<ScenarioConfig&>(c)));
      },
      [key, ref](ScenarioConfig& c, const std::string& v) -> std::optional<std::string> {
        auto x = parse_f64(v);
        if (!x) return key + ": cannot parse '" + v + "' as a duration in ms";
        ref(c) = sim::us(static_cast<long long>(std::llround(*x * 1000.0)));
        return std::nullopt;
      }};
}

inline KeyInfo f64_key(std::string key, std::string desc,
                       std::function<double&(ScenarioConfig&)> ref) {
  return KeyInfo{
      key, "real", std::move(desc),
      [ref](const ScenarioConfig& c) {
        std::ostringstream os;
        os << ref(const_cast<ScenarioConfig&>(c));
        return os.str();
      },
      [key, ref](ScenarioConfig& c, const std::string& v) -> std::optional<std::string> {
        auto x = parse_f64(v);
        if (!x) return key + ": cannot parse '" + v + "' as a real number";
        ref(c) = *x;
        return std::nullopt;
      }};
}

inline KeyInfo bool_key(std::string key, std::string desc,
                        std::function<bool&(ScenarioConfig&)> ref) {
  return KeyInfo{
      key, "bool", std::move(desc),
      [ref](const ScenarioConfig& c) {
        return ref(const_cast<ScenarioConfig&>(c)) ? std::string("true")
                                                   : std::string("false");
      },
      [key, ref](ScenarioConfig& c, const std::string& v) -> std::optional<std::string> {
        if (v == "true" || v == "1") { ref(c) = true; return std::nullopt; }
        if (v == "false" || v == "0") { ref(c) = false; return std::nullopt; }
        return key + ": expected true/false, got '" + v + "'";
      }};
}

inline const std::vector<KeyInfo>& key_table() {
  using C = ScenarioConfig;
  static const std::vector<KeyInfo> table = [] {
    std::vector<KeyInfo> t;

    t.push_back(KeyInfo{
        "scenario.mode", "dlt | baseline",
        "report via the ledger pipeline, or straight to a plain server",
        [](const C& c) {
          return c.mode == C::Mode::dlt ? std::string("dlt")
                                        : std::string("baseline");
        },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          if (v == "dlt") { c.mode = C::Mode::dlt; return std::nullopt; }
          if (v == "baseline") { c.mode = C::Mode::baseline; return std::nullopt; }
          return std::string("scenario.mode: expected dlt or baseline, got '") + v + "'";
        }});
    t.push_back(KeyInfo{
        "scenario.profile", "default | fig5 | fig6",
        "apply a named calibration preset (later keys still override)",
        [](const C& c) { return c.profile.name; },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          try {
            apply_profile(c, v);
          } catch (const ConfigError& e) {
            return std::string(e.what());
          }
          return std::nullopt;
        }});
    t.push_back(KeyInfo{
        "scenario.label", "string", "tag used in output file names",
        [](const C& c) { return c.label; },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          if (v.empty()) return std::string("scenario.label must not be empty");
          c.label = v;
          return std::nullopt;
        }});
    t.push_back(int_key("scenario.n_ues", "number of reporting devices",
                        [](C& c) -> int& { return c.n_ues; }));
    t.push_back(int_key("scenario.payload_bytes",
                        "application payload per report (P)",
                        [](C& c) -> int& { return c.payload_bytes; }));
    t.push_back(ms_key("scenario.report_interval_ms",
                       "time between consecutive reports of one device",
                       [](C& c) -> sim::SimTime& { return c.report_interval; }));
    t.push_back(KeyInfo{
        "scenario.n_transactions", "integer",
        "total reports generated across all devices",
        [](const C& c) { return std::to_string(c.n_transactions); },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          auto n = parse_u64(v);
          if (!n) return std::string("scenario.n_transactions: cannot parse '") + v + "'";
          c.n_transactions = *n;
          return std::nullopt;
        }});
    t.push_back(int_key("scenario.ce_level",
                        "coverage enhancement level of every device (0..2)",
                        [](C& c) -> int& { return c.ce_level; }));
    t.push_back(int_key("scenario.endorsers",
                        "endorsing peers required per transaction (E)",
                        [](C& c) -> int& { return c.endorsers; }));
    t.push_back(int_key("scenario.block_size", "transactions per block cut (b)",
                        [](C& c) -> int& { return c.block_size; }));
    t.push_back(int_key("scenario.peer_pool",
                        "endorsing peers available for selection",
                        [](C& c) -> int& { return c.peer_pool; }));
    t.push_back(KeyInfo{
        "scenario.confirmation", "per_tx | per_k_tx | per_block",
        "how commit confirmations are pushed back to devices",
        [](const C& c) {
          switch (c.confirmation.mode) {
            case ledger::ConfirmationPolicy::Mode::per_tx: return std::string("per_tx");
            case ledger::ConfirmationPolicy::Mode::per_k_tx: return std::string("per_k_tx");
            default: return std::string("per_block");
          }
        },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          using M = ledger::ConfirmationPolicy::Mode;
          if (v == "per_tx") { c.confirmation.mode = M::per_tx; return std::nullopt; }
          if (v == "per_k_tx") { c.confirmation.mode = M::per_k_tx; return std::nullopt; }
          if (v == "per_block") { c.confirmation.mode = M::per_block; return std::nullopt; }
          return std::string("scenario.confirmation: expected per_tx, per_k_tx or per_block");
        }});
    t.push_back(int_key("scenario.confirmation_k",
                        "device transactions covered per confirmation (per_k_tx)",
                        [](C& c) -> int& { return c.confirmation.k; }));
    t.push_back(int_key("scenario.confirmation_dl_bytes",
                        "application bytes of one confirmation message",
                        [](C& c) -> int& { return c.confirmation.dl_bytes; }));

    t.push_back(f64_key("contract.threshold",
                        "window mean that raises an alarm when exceeded",
                        [](C& c) -> double& { return c.contract.threshold; }));
    t.push_back(int_key("contract.window",
                        "readings per sensor in the sliding mean",
                        [](C& c) -> int& { return c.contract.window; }));

    t.push_back(f64_key("sensor.mean", "mean of the simulated reading",
                        [](C& c) -> double& { return c.sensor_mean; }));
    t.push_back(f64_key("sensor.sd", "standard deviation of the reading",
                        [](C& c) -> double& { return c.sensor_sd; }));
    t.push_back(KeyInfo{
        "sensor.step_at_report", "integer",
        "report index from which readings are pinned to sensor.step_value (-1 off)",
        [](const C& c) { return std::to_string(c.sensor_step_at_report); },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          auto n = parse_ll(v);
          if (!n) return std::string("sensor.step_at_report: cannot parse '") + v + "'";
          c.sensor_step_at_report = *n;
          return std::nullopt;
        }});
    t.push_back(f64_key("sensor.step_value", "pinned reading after the step",
                        [](C& c) -> double& { return c.sensor_step_value; }));

    t.push_back(ms_key("cell.mib_period_ms", "master information block period",
                       [](C& c) -> sim::SimTime& { return c.cell.mib_period; }));
    t.push_back(ms_key("cell.sib1_period_ms", "system information block period",
                       [](C& c) -> sim::SimTime& { return c.cell.sib1_period; }));
    t.push_back(ms_key("cell.nprach_period_ms", "random access occasion period",
                       [](C& c) -> sim::SimTime& { return c.cell.nprach_period; }));
    t.push_back(int_key("cell.preamble_pool", "preambles per access occasion",
                        [](C& c) -> int& { return c.cell.preamble_pool; }));
    t.push_back(ms_key("cell.rar_window_ms", "random access response window",
                       [](C& c) -> sim::SimTime& { return c.cell.rar_window; }));
    t.push_back(int_key("cell.max_ra_attempts", "access attempts before giving up",
                        [](C& c) -> int& { return c.cell.max_ra_attempts; }));
    t.push_back(ms_key("cell.backoff_max_ms", "uniform retry backoff upper bound",
                       [](C& c) -> sim::SimTime& { return c.cell.backoff_max; }));
    t.push_back(int_key("cell.ra_signaling_bytes", "bytes of msg3 and of msg4",
                        [](C& c) -> int& { return c.cell.ra_signaling_bytes; }));
    t.push_back(KeyInfo{
        "cell.timing_model", "resource_unit | peak_rate",
        "transmission time from transport blocks, or from a peak data rate",
        [](const C& c) {
          return c.cell.timing_model == radio::TimingModel::resource_unit
                     ? std::string("resource_unit")
                     : std::string("peak_rate");
        },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          if (v == "resource_unit") {
            c.cell.timing_model = radio::TimingModel::resource_unit;
            return std::nullopt;
          }
          if (v == "peak_rate") {
            c.cell.timing_model = radio::TimingModel::peak_rate;
            return std::nullopt;
          }
          return std::string("cell.timing_model: expected resource_unit or peak_rate");
        }});
    t.push_back(ms_key("cell.ul_resource_unit_ms", "uplink resource unit duration",
                       [](C& c) -> sim::SimTime& { return c.cell.ul_resource_unit; }));
    t.push_back(int_key("cell.ul_tbs_bits_per_ru", "uplink bits per resource unit",
                        [](C& c) -> int& { return c.cell.ul_tbs_bits_per_ru; }));
    t.push_back(ms_key("cell.dl_subframe_ms", "downlink subframe duration",
                       [](C& c) -> sim::SimTime& { return c.cell.dl_subframe; }));
    t.push_back(int_key("cell.dl_tbs_bits_per_subframe", "downlink bits per subframe",
                        [](C& c) -> int& { return c.cell.dl_tbs_bits_per_subframe; }));
    t.push_back(int_key("cell.rep_ce0", "repetitions at coverage level 0",
                        [](C& c) -> int& { return c.cell.repetitions[0]; }));
    t.push_back(int_key("cell.rep_ce1", "repetitions at coverage level 1",
                        [](C& c) -> int& { return c.cell.repetitions[1]; }));
    t.push_back(int_key("cell.rep_ce2", "repetitions at coverage level 2",
                        [](C& c) -> int& { return c.cell.repetitions[2]; }));
    t.push_back(KeyInfo{
        "cell.ul_peak_bps", "integer", "uplink peak rate (peak_rate model)",
        [](const C& c) { return std::to_string(c.cell.ul_peak_bps); },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          auto n = parse_ll(v);
          if (!n) return std::string("cell.ul_peak_bps: cannot parse '") + v + "'";
          c.cell.ul_peak_bps = static_cast<long>(*n);
          return std::nullopt;
        }});
    t.push_back(KeyInfo{
        "cell.dl_peak_bps", "integer", "downlink peak rate (peak_rate model)",
        [](const C& c) { return std::to_string(c.cell.dl_peak_bps); },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          auto n = parse_ll(v);
          if (!n) return std::string("cell.dl_peak_bps: cannot parse '") + v + "'";
          c.cell.dl_peak_bps = static_cast<long>(*n);
          return std::nullopt;
        }});
    t.push_back(bool_key("cell.cp_ciot",
                         "piggyback small pending uplink data on access completion",
                         [](C& c) -> bool& { return c.cell.cp_ciot; }));
    t.push_back(int_key("cell.cp_ciot_max_bytes",
                        "largest total PDU eligible for piggybacking",
                        [](C& c) -> int& { return c.cell.cp_ciot_max_bytes; }));
    t.push_back(ms_key("cell.connected_setup_ms",
                       "signaling time from access completion to connected",
                       [](C& c) -> sim::SimTime& { return c.cell.connected_setup; }));
    t.push_back(ms_key("cell.inactivity_ms",
                       "idle timer releasing the connection",
                       [](C& c) -> sim::SimTime& { return c.cell.inactivity; }));

    t.push_back(int_key("profile.header_ul_bytes",
                        "protocol overhead added to uplink app payloads",
                        [](C& c) -> int& { return c.profile.header_ul_bytes; }));
    t.push_back(int_key("profile.header_dl_bytes",
                        "protocol overhead added to downlink app payloads",
                        [](C& c) -> int& { return c.profile.header_dl_bytes; }));
    t.push_back(KeyInfo{
        "profile.endorse_response", "digest | full_proposal",
        "endorsement responses carry the proposal digest, or echo the payload",
        [](const C& c) {
          return c.profile.endorse_response ==
                         CalibrationProfile::EndorseResponse::digest
                     ? std::string("digest")
                     : std::string("full_proposal");
        },
        [](C& c, const std::string& v) -> std::optional<std::string> {
          using R = CalibrationProfile::EndorseResponse;
          if (v == "digest") { c.profile.endorse_response = R::digest; return std::nullopt; }
          if (v == "full_proposal") {
            c.profile.endorse_response = R::full_proposal;
            return std::nullopt;
          }
          return std::string("profile.endorse_response: expected digest or full_proposal");
        }});
    t.push_back(int_key("profile.baseline_ack_bytes",
                        "application bytes of the baseline server ack",
                        [](C& c) -> int& { return c.profile.baseline_ack_bytes; }));
    t.push_back(ms_key("profile.backhaul_ms", "one-way eNB to platform delay",
                       [](C& c) -> sim::SimTime& { return c.profile.backhaul; }));
    t.push_back(ms_key("profile.endorse_service_ms",
                       "peer-side proposal service time",
                       [](C& c) -> sim::SimTime& { return c.profile.endorse_service; }));
    t.push_back(ms_key("profile.batch_timeout_ms",
                       "block cut deadline from the oldest pending transaction",
                       [](C& c) -> sim::SimTime& { return c.profile.batch_timeout; }));
    t.push_back(ms_key("profile.block_proc_base_ms",
                       "fixed ordering and dissemination cost per block",
                       [](C& c) -> sim::SimTime& { return c.profile.block_proc_base; }));
    t.push_back(ms_key("profile.block_proc_per_tx_ms",
                       "ordering cost per slot of the configured block size",
                       [](C& c) -> sim::SimTime& { return c.profile.block_proc_per_tx; }));
    return t;
  }();
  return table;
}

}  // namespace detail

// Applies one "key = value" assignment.  Returns an error string, or nullopt.
inline std::optional<std::string> apply_key(ScenarioConfig& cfg,
                                            const std::string& key,
                                            const std::string& value) {
  for (const auto& info : detail::key_table())
    if (info.key == key) return info.set(cfg, value);
  return "unknown key: " + key;
}

// Flat "key = value" config text, one per line, '#' starts a comment.
// All violations are collected so a bad file is reported in one pass.
inline std::vector<std::string> parse_config_text(ScenarioConfig& cfg,
                                                  const std::string& text) {
  std::vector<std::string> violations;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      violations.push_back("line " + std::to_string(line_no) +
                           ": expected 'key = value'");
      continue;
    }
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      violations.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (auto err = apply_key(cfg, key, value))
      violations.push_back("line " + std::to_string(line_no) + ": " + *err);
  }
  return violations;
}

inline std::vector<std::string> parse_config_file(ScenarioConfig& cfg,
                                                  const std::string& path) {
  std::ifstream in(path);
  if (!in) return {"cannot open config file: " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(cfg, buf.str());
}

// Assembles a full configuration: defaults, then the named profile, then the
// file, then explicit overrides.  Throws ConfigError with every violation.
inline ScenarioConfig load_config(
    const std::string& config_path = "", const std::string& profile_name = "",
    const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  ScenarioConfig cfg;
  std::vector<std::string> violations;
  if (!profile_name.empty()) {
    try {
      apply_profile(cfg, profile_name);
    } catch (const ConfigError& e) {
      violations.push_back(e.what());
    }
  }
  if (!config_path.empty()) {
    auto v = parse_config_file(cfg, config_path);
    violations.insert(violations.end(), v.begin(), v.end());
  }
  for (const auto& [key, value] : overrides)
    if (auto err = apply_key(cfg, key, value)) violations.push_back(*err);
  auto v = cfg.validate();
  violations.insert(violations.end(), v.begin(), v.end());
  if (!violations.empty()) throw ConfigError(violations);
  return cfg;
}

// Human-readable reference of every key with its type and current default.
inline std::string explain_config() {
  ScenarioConfig defaults;
  std::ostringstream os;
  os << "Configuration keys (flat 'key = value' lines, '#' comments).\n"
     << "Precedence: defaults, then --profile, then the config file in line\n"
     << "order, then command-line overrides.  Durations are in milliseconds.\n\n";
  for (const auto& info : detail::key_table()) {
    os << info.key << " (" << info.type << ", default "
       << info.get(defaults) << ")\n    " << info.desc << "\n";
  }
  return os.str();
}

}  // namespace nbdlt::scenario

#endif
