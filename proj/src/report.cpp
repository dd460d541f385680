#include "karamata/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "karamata/quad.hpp"

namespace karamata {
namespace {

std::string number_text(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void emit(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close_pad(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += number_text(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) {
        return is_scalar(e) || (e.is_array() && std::all_of(e.begin(), e.end(), is_scalar));
      });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        out += first ? "" : ",";
        if (!flat) out += "\n" + pad;
        else if (!first) out += ' ';
        emit(out, e, depth + 1);
        first = false;
      }
      if (!flat) out += "\n" + close_pad;
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        out += first ? "\n" : ",\n";
        out += pad + Json(key).dump() + ": ";
        emit(out, value, depth + 1);
        first = false;
      }
      out += "\n" + close_pad + '}';
      return;
    }
    default:
      out += j.dump();
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw PreconditionError("failed writing '" + path + "'");
}

}  // namespace

const char* tool_version() noexcept { return "0.1.0"; }

Json Report::to_json() const {
  Json j;
  j["version"] = tool_version();
  j["command"] = command;
  j["config"] = config;
  j["inputs"] = inputs;
  Json res = results;
  Json rows = Json::array();
  for (const Cell& c : table) rows.push_back(Json::array({c.x, c.param, c.residual}));
  res["table"] = {{"columns", {"x", "param", "residual"}}, {"rows", rows}};
  j["results"] = res;
  j["verdicts"] = verdicts;
  j["timing_ms"] = timing_ms;
  return j;
}

std::string json_text(const Json& value) {
  std::string out;
  emit(out, value, 0);
  out += '\n';
  return out;
}

std::string csv_text(std::span<const Cell> cells) {
  std::string out = "x,param,residual\n";
  for (const Cell& c : cells) {
    out += number_text(c.x);
    out += ',';
    if (!std::isnan(c.param)) out += number_text(c.param);
    out += ',';
    out += std::isfinite(c.residual) ? number_text(c.residual) : "";
    out += '\n';
  }
  return out;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "both") return OutputFormat::both;
  throw PreconditionError("format must be json, csv or both, got '" + text + "'");
}

void write_report(const Report& report, const std::string& out, OutputFormat format) {
  switch (format) {
    case OutputFormat::json: write_file(out, json_text(report.to_json())); break;
    case OutputFormat::csv: write_file(out, csv_text(report.table)); break;
    case OutputFormat::both:
      write_file(out + ".json", json_text(report.to_json()));
      write_file(out + ".csv", csv_text(report.table));
      break;
  }
}

Json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw PreconditionError("cannot read config '" + path + "'");
  Json j = Json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw PreconditionError("config '" + path + "' is not a JSON object");
  return j;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const BudgetExhausted*>(&e)) return 4;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const UnboundVariable*>(&e))
    return 3;
  return 5;
}

Json to_json(const LimitVerdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  switch (v.kind) {
    case LimitKind::converges: j["value"] = v.value; break;
    case LimitKind::diverges: j["sign"] = v.value; break;
    case LimitKind::oscillates: j["band"] = {v.band_lo, v.band_hi}; break;
    case LimitKind::inconclusive: break;
  }
  if (v.extrapolated) j["extrapolated"] = *v.extrapolated;
  j["sign_changes"] = v.sign_changes;
  j["tail_residuals"] = v.tail_residuals;
  return j;
}

Json to_json(const ScanReport& r) {
  Json j;
  j["xs"] = r.xs;
  j["params"] = r.params;
  j["suprema"] = r.suprema;
  j["argmax"] = r.argmax;
  j["refined"] = r.refined;
  if (!r.column_verdicts.empty()) {
    j["suprema_verdict"] = to_json(r.suprema_verdict);
    Json cols = Json::array();
    for (const auto& v : r.column_verdicts) cols.push_back(to_string(v.kind));
    j["column_kinds"] = cols;
  }
  j["verdict"] = to_string(r.verdict);
  if (r.witness) {
    j["witness"] = *r.witness;
    j["floor"] = r.floor;
  }
  if (r.certified_interval)
    j["certified_interval"] = {r.certified_interval->first, r.certified_interval->second};
  j["reason"] = r.reason;
  j["resolution"] = {{"x_samples", r.xs.size()}, {"param_samples", r.params.size()}};
  return j;
}

std::vector<Cell> cells_of(const ScanReport& r) {
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < r.xs.size(); ++i)
    for (std::size_t j = 0; j < r.params.size(); ++j)
      cells.push_back({r.xs[i], r.params[j], r.residuals[i][j]});
  return cells;
}

}  // namespace karamata
