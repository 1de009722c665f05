// Serialization of analysis results to CSV and JSON.
//
// CSV: a header row, then data rows; numbers in decimal ASCII with 17
// significant digits, absent values as empty cells, '\n' line endings.
// JSON: one object per run carrying "schema_version": "1"; keys are snake case.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ricker/center_manifold.hpp"
#include "ricker/fixed_points.hpp"
#include "ricker/model.hpp"
#include "ricker/nullclines.hpp"
#include "ricker/orbit_analysis.hpp"

namespace ricker {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// Locale-free %.17g rendering. Non-finite values give "nan", "inf", "-inf".
std::string format_number(double v);

std::string csv_cell(double v);
std::string csv_cell(std::size_t v);
std::string csv_cell(bool v);
std::string csv_cell(const std::string& v);
std::string csv_cell(const std::optional<double>& v);
std::string csv_cell(const std::optional<std::size_t>& v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::logic_error when the row width differs from the header.
  void add(std::vector<std::string> row);
};

void write_csv(std::ostream& out, const CsvTable& table);

/// Pretty-printed with two-space indent and a trailing newline.
void write_json(std::ostream& out, const Json& doc);

/// Top-level object with schema_version and command set.
Json json_document(const std::string& command);

Json to_json(const ModelParams& p);
Json to_json(const Coefficients& k);
Json to_json(State s);
Json to_json(const PositiveFixedPoint& p);
Json to_json(const StabilityReport& r);
Json to_json(const RectangleLevel& l);
Json to_json(const RectangleSequence& seq);
Json to_json(const PeriodResult& r);
Json to_json(const LyapunovEstimate& e);
Json to_json(const SweepRow& row);
Json to_json(const FlipReport& f);
Json to_json(const FlipVerification& v);
Json to_json(const std::optional<Interval>& w);

/// "l_m_n" key for a monomial index.
std::string monomial_key(const MonomialIndex& idx);

}  // namespace ricker
