#pragma once

#include <string>

#include "sparseseries/criterion.hpp"

namespace sparseseries {

/// Deterministic rendering: identical reports produce byte-identical output.
/// Intervals carry decimal bounds for reading plus exact hex bounds for the
/// round trip.
std::string render_report_json(const CriterionReport& report);
std::string render_report_csv(const CriterionReport& report);
std::string render_report_text(const CriterionReport& report);

CriterionReport parse_report_json(const std::string& text);

bool reports_equal(const CriterionReport& a, const CriterionReport& b);

}  // namespace sparseseries
