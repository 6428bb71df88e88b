#ifndef NBDLT_LEDGER_CONTRACT_HPP
#define NBDLT_LEDGER_CONTRACT_HPP

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nbdlt/error.hpp"

namespace nbdlt::ledger {

struct ContractConfig {
  double threshold = 1000.0;
  int window = 6;  // readings per sensor in the sliding mean
};

struct Alarm {
  std::string sensor;
  double mean = 0.0;
  int samples = 0;  // readings in the window when it fired
};

// Monitoring chaincode: keeps a sliding window of committed readings per
// sensor and raises an alarm when the window mean crosses above the
// threshold.  Evaluated once per committed block, over the sensors that block
// touched; a sensor re-arms only after its mean drops back to the threshold
// or below.
class WindowAverageContract {
 public:
  explicit WindowAverageContract(ContractConfig cfg) : cfg_(cfg) {
    require(cfg_.window >= 1, "contract: window must be at least 1");
  }

  void begin_block() { touched_.clear(); }

  void record(const std::string& sensor, double value) {
    auto& win = windows_[sensor];
    win.push_back(value);
    if (static_cast<int>(win.size()) > cfg_.window) win.pop_front();
    touched_.insert(sensor);
  }

  std::vector<Alarm> finish_block() {
    std::vector<Alarm> alarms;
    for (const auto& sensor : touched_) {
      const auto& win = windows_[sensor];
      double sum = 0;
      for (double v : win) sum += v;
      const double mean = sum / static_cast<double>(win.size());
      bool& armed_above = above_[sensor];
      if (mean > cfg_.threshold) {
        if (!armed_above) {
          alarms.push_back({sensor, mean, static_cast<int>(win.size())});
          armed_above = true;
        }
      } else {
        armed_above = false;
      }
    }
    touched_.clear();
    return alarms;
  }

  // Current window mean, for inspection.
  double window_mean(const std::string& sensor) const {
    auto it = windows_.find(sensor);
    require(it != windows_.end() && !it->second.empty(),
            "contract: no readings for sensor " + sensor);
    double sum = 0;
    for (double v : it->second) sum += v;
    return sum / static_cast<double>(it->second.size());
  }

 private:
  ContractConfig cfg_;
  std::map<std::string, std::deque<double>> windows_;
  std::map<std::string, bool> above_;
  std::set<std::string> touched_;
};

}  // namespace nbdlt::ledger

#endif
