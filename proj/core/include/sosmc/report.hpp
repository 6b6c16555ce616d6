#pragma once

#include <string>
#include <string_view>

#include "sosmc/smc.hpp"

namespace sosmc {

enum class ReportFormat { Text, Records };

/// Human-readable report (percent with one decimal) or stable key/value
/// records for scripting. Records round-trip through parseRecords.
std::string emitReport(const Estimate& estimate, ReportFormat format);

/// Inverse of the records format.
Estimate parseRecords(std::string_view text);

const char* verdictName(EstimateVerdict v);

}  // namespace sosmc
