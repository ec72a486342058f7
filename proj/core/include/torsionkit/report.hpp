#pragma once

#include "torsionkit/pipeline.hpp"

#include <string>

namespace torsionkit {

// JSON object with the mode, degrees, monomial-keyed tables of both sides, verdict and timing.
std::string report_to_json(const TheoremReport& report, int indent = 2);
// A few human-readable lines.
std::string report_summary(const TheoremReport& report);

}  // namespace torsionkit
