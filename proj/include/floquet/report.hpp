#pragma once

#include <string>

#include <json.hpp>

#include "floquet/job.hpp"

namespace floquet::app {

nlohmann::json toJson(Complex c);
nlohmann::json toJson(const FloquetSolution& sol);
nlohmann::json toJson(const MonodromyResult& m);
nlohmann::json toJson(const Row& row, const std::string& paramName);

/// {config, rows, meta}. Timing appears only when the config asked for it,
/// so identical configurations give byte-identical output.
nlohmann::json toJson(const Report& report);

/// One line per row: the sweep value, status, the exact, HB and monodromy exponents, S2, E and both HB branches.
std::string toCsv(const Report& report);

std::string exportCsv(const ExportResult& result);
nlohmann::json exportSummary(const ExportResult& result, const JobConfig& cfg);

nlohmann::json catalogJson();

/// Writes content to path (throws IoError), or to stdout when path is empty.
void writeOutput(const std::string& path, const std::string& content);

}  // namespace floquet::app
