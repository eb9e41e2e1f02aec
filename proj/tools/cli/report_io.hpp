#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "polybound/bounds.hpp"
#include "polybound/gp.hpp"

namespace polybound {

// Reals that may be infinite or NaN are written as the strings "-inf", "inf", "nan".
void to_json(nlohmann::json& j, const GpStats& stats);
void from_json(const nlohmann::json& j, GpStats& stats);
void to_json(nlohmann::json& j, const BoundReport& report);
void from_json(const nlohmann::json& j, BoundReport& report);

}  // namespace polybound

namespace polybound::cli {

nlohmann::json real_to_json(double value);
double real_from_json(const nlohmann::json& j);

BoundStatus parse_bound_status(const std::string& text);
BoundKind parse_bound_kind(const std::string& text);
GpStatus parse_gp_status(const std::string& text);

/// Shortest round-trip text, with -inf/inf/nan spelled out.
std::string format_value(double value);

/// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& text);

void print_report_human(std::ostream& os, const BoundReport& report);

}  // namespace polybound::cli
