#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trafficast/records.hpp"

namespace trafficast {

/// Knobs for a Metro-schema hourly series with the quirks of the real file:
/// weekday/weekend rush-hour shape, seasonal temperature, rain/snow bursts,
/// rare sensor glitches (0 K temperature, huge rain spike, zero-volume
/// hours), missing hours, one long outage, and duplicated timestamps that
/// carry a second weather label.
struct SyntheticConfig {
  std::string start = "2012-10-02 09:00:00";
  std::string end = "2018-09-30 23:00:00";
  std::uint64_t seed = 7;
  double missing_rate = 0.03;
  double duplicate_rate = 0.12;
  double zero_volume_rate = 0.002;
  bool long_outage = true;
};

/// Rows in file order (chronological, duplicates adjacent to their original).
std::vector<RawRecord> generate_metro_like(const SyntheticConfig& cfg);

}  // namespace trafficast
