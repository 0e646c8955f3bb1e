#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/config.hpp"

namespace finsler {

nlohmann::json to_json(const PredicateVerdict& v);
nlohmann::json to_json(const ClassificationReport& r);

/// Per-(point, direction) records plus the aggregate classification.
nlohmann::json cmd_report(const ResolvedRun& run);

std::vector<std::string> table_quantities();
/// CSV (RFC 4180) with one row per sample of the requested quantity.
std::string cmd_table(const ResolvedRun& run, const std::string& quantity);

nlohmann::json cmd_classify(const ResolvedRun& run);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

}  // namespace finsler
