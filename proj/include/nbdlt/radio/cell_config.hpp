#ifndef NBDLT_RADIO_CELL_CONFIG_HPP
#define NBDLT_RADIO_CELL_CONFIG_HPP

#include <array>
#include <string>
#include <vector>

#include "nbdlt/sim/time.hpp"

namespace nbdlt::radio {

enum class TimingModel { resource_unit, peak_rate };

// Narrowband cell parameters.  Defaults model a single anchor carrier in
// standalone deployment with one shared uplink and one shared downlink.
struct CellConfig {
  sim::SimTime mib_period = sim::ms(640);
  sim::SimTime sib1_period = sim::ms(2560);

  sim::SimTime nprach_period = sim::ms(40);
  int preamble_pool = 48;
  sim::SimTime rar_window = sim::ms(10);
  int max_ra_attempts = 10;
  sim::SimTime backoff_max = sim::ms(256);
  int ra_signaling_bytes = 20;  // msg3 and msg4 each

  TimingModel timing_model = TimingModel::resource_unit;
  sim::SimTime ul_resource_unit = sim::ms(8);
  int ul_tbs_bits_per_ru = 256;
  sim::SimTime dl_subframe = sim::ms(1);
  int dl_tbs_bits_per_subframe = 224;
  std::array<int, 3> repetitions{1, 2, 8};  // per coverage-enhancement level
  long ul_peak_bps = 250000;
  long dl_peak_bps = 226700;

  bool cp_ciot = true;
  int cp_ciot_max_bytes = 100;

  sim::SimTime connected_setup = sim::ms(100);
  sim::SimTime inactivity = sim::seconds(20);

  std::vector<std::string> validate() const {
    std::vector<std::string> v;
    auto positive = [&](sim::SimTime t, const char* key) {
      if (t <= sim::us(0)) v.push_back(std::string(key) + " must be positive");
    };
    positive(mib_period, "cell.mib_period_ms");
    positive(sib1_period, "cell.sib1_period_ms");
    positive(nprach_period, "cell.nprach_period_ms");
    positive(rar_window, "cell.rar_window_ms");
    positive(ul_resource_unit, "cell.ul_resource_unit_ms");
    positive(dl_subframe, "cell.dl_subframe_ms");
    if (preamble_pool < 1) v.push_back("cell.preamble_pool must be at least 1");
    if (max_ra_attempts < 1) v.push_back("cell.max_ra_attempts must be at least 1");
    if (backoff_max < sim::us(0)) v.push_back("cell.backoff_max_ms must be non-negative");
    if (ra_signaling_bytes < 0) v.push_back("cell.ra_signaling_bytes must be non-negative");
    if (ul_tbs_bits_per_ru < 1) v.push_back("cell.ul_tbs_bits_per_ru must be at least 1");
    if (dl_tbs_bits_per_subframe < 1)
      v.push_back("cell.dl_tbs_bits_per_subframe must be at least 1");
    for (int r : repetitions)
      if (r < 1 || r > 1024)
        v.push_back("cell.repetitions entries must lie in [1, 1024]");
    if (ul_peak_bps < 1) v.push_back("cell.ul_peak_bps must be at least 1");
    if (dl_peak_bps < 1) v.push_back("cell.dl_peak_bps must be at least 1");
    if (cp_ciot_max_bytes < 0) v.push_back("cell.cp_ciot_max_bytes must be non-negative");
    if (connected_setup < sim::us(0))
      v.push_back("cell.connected_setup_ms must be non-negative");
    if (inactivity <= sim::us(0)) v.push_back("cell.inactivity_ms must be positive");
    return v;
  }
};

}  // namespace nbdlt::radio

#endif
