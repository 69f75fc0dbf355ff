// Copyright 2026 The qpqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "qpq/analysis.hpp"

namespace qpq {

// Resolved invocation of one subcommand. The driver in tools/ fills this
// from flags; the cmd_* functions consume it and are what tests target.
struct RunConfig {
  std::string command;  // run | attack-eval | sweep | qram-verify

  int n = 0;
  std::string db_path;                      // --db
  std::optional<std::uint64_t> gen_db_seed; // --gen-db

  std::int64_t j = 1;
  std::string variant = "basic";    // basic | amp:<re,im,re,im> | two-query:<k>
  std::string strategy = "honest";  // honest | projective:... | coupling:<t>

  std::int64_t trials = 1000;
  std::uint64_t seed = 1;

  std::string format = "json";  // json | csv
  std::string out_path;         // empty writes to stdout
  bool verbose = false;         // include sigma* dumps in sweep reports

  int grid_points = 9;          // sweep: theta = linspace(0, pi/2, grid_points)
  std::int64_t check_states = 100;  // qram-verify: random states per width
  bool counts_only = false;         // qram-verify: skip state checks
};

// Each command returns its report as a json document; render_report turns
// it into the requested output format.
nlohmann::json cmd_run(const RunConfig& config);
nlohmann::json cmd_attack_eval(const RunConfig& config);
nlohmann::json cmd_sweep(const RunConfig& config);
nlohmann::json cmd_qram_verify(const RunConfig& config);

nlohmann::json run_command(const RunConfig& config);

std::string render_report(const nlohmann::json& report,
                          const std::string& format);

// Parses the --variant grammar into plan ingredients.
struct VariantSpec {
  Variant variant = Variant::Basic;
  std::optional<Complex> alpha;
  std::optional<Complex> beta;
  std::optional<std::int64_t> k;
};
VariantSpec parse_variant(const std::string& text);

// Round-trips for the sweep report (the lossless json form).
nlohmann::json tradeoff_report_to_json(const TradeoffReport& report,
                                       bool include_sigma);
TradeoffReport tradeoff_report_from_json(const nlohmann::json& doc);

// Executes the config end to end: runs the command, renders it, writes it
// to out_path or stdout. Returns the process exit code and, on failure,
// prints a json error object instead of a report.
int cli_main(const RunConfig& config);

// Decimal with 12 significant digits, the serialization rule for all report
// numerics.
double round_sig(double value);

}  // namespace qpq
