#pragma once

#include <string>

#include <json.hpp>

#include "isoremesh/driver.hpp"
#include "isoremesh/metrics.hpp"

namespace isoremesh {

nlohmann::json to_json(const RemeshConfig& cfg);
nlohmann::json to_json(const PassStats& stats);
nlohmann::json to_json(const RunReport& report);
nlohmann::json to_json(const QualityReport& report);

// Header `bin_start_deg,bin_end_deg,count`, one row per bin.
std::string histogram_csv(const AngleHistogram& histogram);

}  // namespace isoremesh
