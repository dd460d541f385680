#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "karamata/report.hpp"

using namespace karamata;

TEST_CASE("report JSON key order and table") {
  Report rep;
  rep.command = "uct scan";
  rep.config["count"] = 3;
  rep.inputs["g"] = "u/x";
  rep.results["note"] = "x";
  rep.verdicts["uniformity"] = "Uniform";
  rep.table = {{10.0, 0.5, 0.05}, {20.0, std::numeric_limits<double>::quiet_NaN(), 0.1}};
  rep.timing_ms = 1.5;
  const Json j = rep.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"version", "command", "config", "inputs", "results",
                                         "verdicts", "timing_ms"});
  CHECK(j["results"]["table"]["columns"] == Json::array({"x", "param", "residual"}));
  CHECK(j["results"]["table"]["rows"].size() == 2);

  const std::string text = json_text(j);
  CHECK(text.find("null") != std::string::npos);  // the NaN param
  CHECK(text.find("0.050000000000000003") != std::string::npos);
  CHECK(Json::parse(text)["command"] == "uct scan");

  CHECK(csv_text(rep.table) ==
        "x,param,residual\n10,0.5,0.050000000000000003\n20,,0.10000000000000001\n");
}

TEST_CASE("doubles survive a text round trip") {
  const double values[] = {0.1, 1.0 / 3.0, std::exp(1.0), 1e-300, 123456789.123456789};
  for (double v : values) {
    Json j = Json::array({v});
    CHECK(Json::parse(json_text(j))[0].get<double>() == v);
  }
  CHECK(json_text(Json::array({std::numeric_limits<double>::infinity()})) == "[null]\n");
}

TEST_CASE("formats and files") {
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(parse_format("both") == OutputFormat::both);
  CHECK_THROWS_AS(parse_format("xml"), PreconditionError);

  const auto dir = std::filesystem::temp_directory_path() / "karamata_report_test";
  std::filesystem::create_directories(dir);
  Report rep;
  rep.command = "apply-l";
  rep.table = {{2.0, std::nan(""), 1.0}};
  const std::string stem = (dir / "run").string();
  write_report(rep, stem, OutputFormat::both);
  CHECK(std::filesystem::exists(stem + ".json"));
  std::ifstream csv(stem + ".csv");
  std::stringstream ss;
  ss << csv.rdbuf();
  CHECK(ss.str() == "x,param,residual\n2,,1\n");
  CHECK_THROWS_AS(write_report(rep, (dir / "missing" / "x.json").string(), OutputFormat::json),
                  PreconditionError);

  const std::string cfg = (dir / "cfg.json").string();
  std::ofstream(cfg) << "{\"count\": 12}";
  CHECK(load_config(cfg)["count"] == 12);
  std::ofstream(cfg) << "[1, 2]";
  CHECK_THROWS_AS(load_config(cfg), PreconditionError);
  CHECK_THROWS_AS(load_config((dir / "nope.json").string()), PreconditionError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ParseError("bad", 0)) == 2);
  CHECK(exit_code_for(DomainError("bad", "ln(x)")) == 3);
  CHECK(exit_code_for(PreconditionError("bad")) == 3);
  CHECK(exit_code_for(UnboundVariable("y")) == 3);
  CHECK(exit_code_for(BudgetExhausted(QuadResult{})) == 4);
  CHECK(exit_code_for(std::runtime_error("other")) == 5);
}

TEST_CASE("limit verdict JSON") {
  LimitVerdict v;
  v.kind = LimitKind::oscillates;
  v.band_lo = -1;
  v.band_hi = 1;
  const Json j = to_json(v);
  CHECK(j["kind"] == to_string(LimitKind::oscillates));
  CHECK(j["band"] == Json::array({-1.0, 1.0}));
}
