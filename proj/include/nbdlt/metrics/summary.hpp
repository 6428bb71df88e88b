#ifndef NBDLT_METRICS_SUMMARY_HPP
#define NBDLT_METRICS_SUMMARY_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nbdlt/crypto/digest.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::metrics {

// Fixed-precision decimal so exports are byte-identical across runs.
inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string fmt6(std::optional<double> v) {
  return v ? fmt6(*v) : std::string{};
}

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  int p_bytes = 0;
  int endorsers = 0;    // 0 for baseline rows
  int block_size = 0;   // 0 for baseline rows
  std::string mode;     // "dlt" or "baseline"
  std::optional<double> ratio_mean;
  std::optional<double> e2e_mean_s;
  std::optional<double> e2e_p95_s;
  std::uint64_t generated = 0;
  std::uint64_t committed = 0;
  std::uint64_t rejected = 0;
  std::uint64_t dropped = 0;
  std::uint64_t ra_failures = 0;
  std::uint64_t blocks = 0;
};

inline constexpr const char* kSummaryHeader =
    "scenario,seed,P_bytes,E,b,mode,ratio_mean,e2e_mean_s,e2e_p95_s,"
    "committed,rejected,ra_failures,blocks";

inline void write_summary_row(std::ostream& os, const RunSummary& s) {
  os << s.scenario << ',' << s.seed << ',' << s.p_bytes << ',' << s.endorsers
     << ',' << s.block_size << ',' << s.mode << ',' << fmt6(s.ratio_mean) << ','
     << fmt6(s.e2e_mean_s) << ',' << fmt6(s.e2e_p95_s) << ',' << s.committed
     << ',' << s.rejected << ',' << s.ra_failures << ',' << s.blocks << '\n';
}

inline void write_summary_csv(std::ostream& os,
                              const std::vector<RunSummary>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& s : rows) write_summary_row(os, s);
}

// Per-transaction ledger written alongside every run.
struct PerTxRecord {
  crypto::Digest tx_id;
  std::string ue;
  sim::SimTime t_gen{0};
  std::optional<sim::SimTime> t_commit;
  std::optional<sim::SimTime> t_confirm;
  std::uint64_t ul_bytes = 0;
  std::uint64_t dl_bytes = 0;
};

inline constexpr const char* kPerTxHeader =
    "tx_id,ue,t_gen_us,t_commit_us,t_confirm_us,ul_bytes,dl_bytes";

inline void write_per_tx_csv(std::ostream& os,
                             const std::vector<PerTxRecord>& rows) {
  os << kPerTxHeader << '\n';
  for (const auto& r : rows) {
    os << r.tx_id.hex() << ',' << r.ue << ',' << r.t_gen.count() << ',';
    if (r.t_commit) os << r.t_commit->count();
    os << ',';
    if (r.t_confirm) os << r.t_confirm->count();
    os << ',' << r.ul_bytes << ',' << r.dl_bytes << '\n';
  }
}

}  // namespace nbdlt::metrics

#endif
