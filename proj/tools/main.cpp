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

#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qpq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis toolkit for quantum private queries"};
  app.require_subcommand(1);

  qpq::RunConfig config;

  const auto add_output = [&config](CLI::App* cmd) {
    cmd->add_option("--format", config.format, "report format: json or csv");
    cmd->add_option("--out", config.out_path,
                    "write the report to this file instead of stdout");
  };
  const auto add_db = [&config](CLI::App* cmd) {
    cmd->add_option("--n", config.n, "address width, N = 2^n records");
    cmd->add_option("--db", config.db_path, "database file to load");
    cmd->add_option("--gen-db", config.gen_db_seed,
                    "generate a random database from this seed (needs --n)");
  };

  CLI::App* run = app.add_subcommand(
      "run", "Sample protocol runs and report outcome rates");
  add_db(run);
  add_output(run);
  run->add_option("--j", config.j, "queried record index, 1..N-1");
  run->add_option("--variant", config.variant,
                  "basic | amp:<re,im,re,im> | two-query[:<k>]");
  run->add_option("--strategy", config.strategy,
                  "honest | projective:paper | projective:strict | "
                  "coupling:<theta>");
  run->add_option("--trials", config.trials, "number of sampled runs");
  run->add_option("--seed", config.seed, "random seed");

  CLI::App* attack = app.add_subcommand(
      "attack-eval",
      "Exact per-scenario pass probabilities, worst-case failure, and "
      "Holevo leakage for a strategy");
  add_db(attack);
  add_output(attack);
  attack->add_option("--j", config.j,
                     "record index for the detection summary, 1..N-1");
  attack->add_option("--strategy", config.strategy,
                     "honest | projective:paper | projective:strict | "
                     "coupling:<theta>");

  CLI::App* sweep = app.add_subcommand(
      "sweep",
      "Information-disturbance tradeoff of the coupling family over a "
      "theta grid");
  add_db(sweep);
  add_output(sweep);
  sweep->add_option("--grid-points", config.grid_points,
                    "grid size for theta in [0, pi/2]");
  sweep->add_flag("--verbose", config.verbose,
                  "include the averaged residual state at every grid point");

  CLI::App* qram = app.add_subcommand(
      "qram-verify",
      "Check the oracle decomposition against the direct oracle and report "
      "gate counts");
  add_output(qram);
  qram->add_option("--n", config.n, "largest width to verify")->required();
  qram->add_option("--check-states", config.check_states,
                   "random states tested per width");
  qram->add_flag("--counts-only", config.counts_only,
                 "skip state checks and only tabulate gate counts");
  qram->add_option("--seed", config.seed, "random seed for the test states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    nlohmann::json err;
    err["error"] = {{"kind", "usage"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  return qpq::cli_main(config);
}
