#pragma once

// Run reports: JSON (top-level keys version, command, config, inputs,
// results, verdicts, timing_ms, in that order) and CSV (x,param,residual).
// Everything except timing_ms is a function of the inputs alone.

#include <exception>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "karamata/asymptotics.hpp"
#include "karamata/uniformity.hpp"

namespace karamata {

using Json = nlohmann::ordered_json;

const char* tool_version() noexcept;

/// One CSV row. A NaN param is written as an empty field.
struct Cell {
  double x;
  double param;
  double residual;
};

struct Report {
  std::string command;
  Json config = Json::object();
  Json inputs = Json::object();
  Json results = Json::object();
  Json verdicts = Json::object();
  std::vector<Cell> table;  // also embedded as results.table
  double timing_ms = 0.0;

  Json to_json() const;
};

/// Indented JSON with doubles at 17 significant digits; NaN and infinities
/// become null. Arrays of scalars stay on one line.
std::string json_text(const Json& value);
std::string csv_text(std::span<const Cell> cells);

enum class OutputFormat { json, csv, both };
OutputFormat parse_format(const std::string& text);

/// Writes `out` (json or csv), or `out`.json and `out`.csv for both.
void write_report(const Report& report, const std::string& out, OutputFormat format);

/// Parses a JSON config file; throws PreconditionError when unreadable.
Json load_config(const std::string& path);

/// 2 parse, 3 domain / precondition / unbound variable, 4 budget, 5 other.
int exit_code_for(const std::exception& e) noexcept;

Json to_json(const LimitVerdict& v);
Json to_json(const ScanReport& r);
std::vector<Cell> cells_of(const ScanReport& r);

}  // namespace karamata
