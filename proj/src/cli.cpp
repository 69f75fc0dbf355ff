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

#include "qpq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "qpq/version.hpp"

namespace qpq {

namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2.0;

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + " from \"" + text + "\"");
  }
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse " + what + " from \"" + text + "\"");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

Database resolve_db(const RunConfig& config) {
  if (config.gen_db_seed && !config.db_path.empty()) {
    throw ValidationError("pass either --db or --gen-db, not both");
  }
  if (config.gen_db_seed) {
    if (config.n < 1) {
      throw ValidationError("--gen-db needs --n to size the database");
    }
    return Database::random(config.n, *config.gen_db_seed);
  }
  if (!config.db_path.empty()) {
    Database db = Database::load(config.db_path);
    if (config.n != 0 && config.n != db.width()) {
      throw ValidationError("--n " + std::to_string(config.n) +
                            " contradicts the database width " +
                            std::to_string(db.width()));
    }
    return db;
  }
  throw ValidationError("a database is required: pass --db <file> or "
                        "--gen-db <seed> with --n");
}

std::string timing_mode_of(const std::string& strategy) {
  if (strategy == "projective:paper") return "paper";
  if (strategy == "projective:strict") return "strict";
  return "n/a";
}

void check_j(const Database& db, std::int64_t j) {
  if (j < 1 || j >= db.size()) {
    throw ValidationError("--j must lie in 1..N-1 (reference record 0 is "
                          "not queryable)");
  }
}

json config_echo(const RunConfig& config, int resolved_n) {
  json c;
  c["n"] = resolved_n;
  if (!config.db_path.empty()) c["db"] = config.db_path;
  if (config.gen_db_seed) c["gen_db_seed"] = *config.gen_db_seed;
  return c;
}

json base_report(const RunConfig& config, int resolved_n,
                 const std::string& timing_mode) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["version"] = kVersion;
  doc["command"] = config.command;
  doc["timing_mode"] = timing_mode;
  doc["config"] = config_echo(config, resolved_n);
  return doc;
}

json density_to_json(const DensityMatrix& rho) {
  json layout = json::array();
  for (const auto& reg : rho.layout().registers()) {
    layout.push_back({{"label", reg.label}, {"dim", reg.dim}});
  }
  json real = json::array();
  json imag = json::array();
  for (std::int64_t row = 0; row < rho.dim(); ++row) {
    json real_row = json::array();
    json imag_row = json::array();
    for (std::int64_t col = 0; col < rho.dim(); ++col) {
      real_row.push_back(round_sig(rho.matrix()(row, col).real()));
      imag_row.push_back(round_sig(rho.matrix()(row, col).imag()));
    }
    real.push_back(std::move(real_row));
    imag.push_back(std::move(imag_row));
  }
  return json{{"layout", std::move(layout)},
              {"real", std::move(real)},
              {"imag", std::move(imag)}};
}

DensityMatrix density_from_json(const json& doc) {
  std::vector<Register> regs;
  for (const auto& reg : doc.at("layout")) {
    regs.push_back(Register{reg.at("label").get<std::string>(),
                            reg.at("dim").get<std::int64_t>()});
  }
  RegisterLayout layout(regs);
  const auto& real = doc.at("real");
  const auto& imag = doc.at("imag");
  const std::int64_t dim = layout.total_dim();
  if (static_cast<std::int64_t>(real.size()) != dim ||
      static_cast<std::int64_t>(imag.size()) != dim) {
    throw ValidationError("density dump size does not match its layout");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (std::int64_t row = 0; row < dim; ++row) {
    for (std::int64_t col = 0; col < dim; ++col) {
      m(row, col) = Complex(real.at(row).at(col).get<double>(),
                            imag.at(row).at(col).get<double>());
    }
  }
  // Rounding the entries can leave hermiticity off by a hair; symmetrize
  // before the structural checks run.
  Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(layout), std::move(sym));
}

// ---------------------------------------------------------------------------
// CSV rendering

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

std::string csv_value(const json& value) {
  if (value.is_string()) return csv_escape(value.get<std::string>());
  return value.dump();
}

std::string csv_from_rows(const json& rows) {
  std::set<std::string> columns;
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.items()) {
      if (value.is_object() || value.is_array()) continue;
      columns.insert(key);
    }
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& column : columns) {
    if (!first) out << ',';
    out << csv_escape(column);
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& column : columns) {
      if (!first) out << ',';
      first = false;
      if (row.contains(column)) out << csv_value(row.at(column));
    }
    out << '\n';
  }
  return out.str();
}

void flatten_into(const json& object, const std::string& prefix, json& row) {
  for (const auto& [key, value] : object.items()) {
    if (value.is_object()) {
      flatten_into(value, prefix + key + ".", row);
    } else if (!value.is_array()) {
      row[prefix + key] = value;
    }
  }
}

std::string render_csv(const json& report) {
  const std::string command = report.at("command").get<std::string>();
  const json& results = report.at("results");
  if (command == "attack-eval") return csv_from_rows(results.at("pass_table"));
  if (command == "sweep") return csv_from_rows(results.at("points"));
  if (command == "qram-verify") return csv_from_rows(results.at("widths"));
  json row;
  flatten_into(results, "", row);
  return csv_from_rows(json::array({std::move(row)}));
}

}  // namespace

// ---------------------------------------------------------------------------

double round_sig(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.11e", value);
  return std::strtod(buffer, nullptr);
}

VariantSpec parse_variant(const std::string& text) {
  VariantSpec spec;
  if (text == "basic") {
    spec.variant = Variant::Basic;
    return spec;
  }
  if (text == "two-query") {
    spec.variant = Variant::TwoQuery;
    return spec;
  }
  const std::string two_query_prefix = "two-query:";
  if (text.rfind(two_query_prefix, 0) == 0) {
    spec.variant = Variant::TwoQuery;
    spec.k = parse_int(text.substr(two_query_prefix.size()),
                       "the partner index k");
    return spec;
  }
  const std::string amp_prefix = "amp:";
  if (text.rfind(amp_prefix, 0) == 0) {
    const auto parts = split(text.substr(amp_prefix.size()), ',');
    if (parts.size() != 4) {
      throw ValidationError("amp variant takes four numbers: "
                            "amp:<alpha_re>,<alpha_im>,<beta_re>,<beta_im>");
    }
    spec.variant = Variant::ArbitraryAmplitude;
    spec.alpha = Complex(parse_double(parts[0], "alpha_re"),
                         parse_double(parts[1], "alpha_im"));
    spec.beta = Complex(parse_double(parts[2], "beta_re"),
                        parse_double(parts[3], "beta_im"));
    return spec;
  }
  throw ValidationError("unknown variant \"" + text +
                        "\"; expected basic, amp:<re,im,re,im>, or "
                        "two-query[:<k>]");
}

json cmd_run(const RunConfig& config) {
  const Database db = resolve_db(config);
  check_j(db, config.j);
  const VariantSpec spec = parse_variant(config.variant);
  const auto strategy = parse_strategy(config.strategy);
  if (config.trials < 1) {
    throw ValidationError("--trials must be at least 1");
  }

  RandomSource rng(config.seed);
  std::int64_t detected = 0;
  std::int64_t correct = 0;
  std::int64_t consistent = 0;
  std::int64_t passed = 0;
  std::optional<CommCost> cost;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    const QueryPlan plan = plan_query(config.j, spec.variant, db.width(), rng,
                                      spec.alpha, spec.beta, spec.k);
    const RunResult run = run_protocol(db, plan, *strategy, rng);
    if (run.outcome.detected_cheating) ++detected;
    if (run.outcome.answer == db.record(config.j)) ++correct;
    if (run.outcome.plain_consistent) ++consistent;
    if (run.outcome.test_passed) ++passed;
    if (!cost) cost = comm_cost(run.transcript);
  }

  const double trials = static_cast<double>(config.trials);
  const double detection_rate = static_cast<double>(detected) / trials;
  const double half_width =
      1.959963984540054 *
      std::sqrt(detection_rate * (1.0 - detection_rate) / trials);

  json results;
  results["trials"] = config.trials;
  results["answer_correct_rate"] =
      round_sig(static_cast<double>(correct) / trials);
  results["plain_consistent_rate"] =
      round_sig(static_cast<double>(consistent) / trials);
  results["test_pass_rate"] = round_sig(static_cast<double>(passed) / trials);
  results["detection_rate"] = round_sig(detection_rate);
  results["detection_ci95_low"] =
      round_sig(std::max(0.0, detection_rate - half_width));
  results["detection_ci95_high"] =
      round_sig(std::min(1.0, detection_rate + half_width));
  results["comm"] = {{"total_qubits", cost->total_qubits},
                     {"gross_qubits", cost->gross_qubits},
                     {"db_calls_per_run", cost->db_calls},
                     {"qpq_db_calls", cost->qpq_db_calls},
                     {"classical_pir_calls", cost->classical_pir_calls},
                     {"spir_exchange", cost->spir_exchange}};

  json doc = base_report(config, db.width(), timing_mode_of(config.strategy));
  doc["config"]["j"] = config.j;
  doc["config"]["variant"] = config.variant;
  doc["config"]["strategy"] = config.strategy;
  doc["config"]["trials"] = config.trials;
  doc["config"]["seed"] = config.seed;
  doc["query_weights"] = kQueryWeightConvention;
  doc["results"] = std::move(results);
  return doc;
}

json cmd_attack_eval(const RunConfig& config) {
  const Database db = resolve_db(config);
  check_j(db, config.j);
  const auto strategy = parse_strategy(config.strategy);

  json table = json::array();
  double epsilon = 0.0;
  double pass_a_at_j = 0.0;
  double pass_b_at_j = 0.0;
  std::vector<WeightedState> per_j_items;
  const double p_j = 1.0 / static_cast<double>(db.size() - 1);

  for (std::int64_t j = 1; j < db.size(); ++j) {
    std::vector<DensityMatrix> sigmas;
    for (Scenario scenario : {Scenario::A, Scenario::B}) {
      auto cell = detail::evaluate_attack_cell(*strategy, db, j, scenario,
                                               detail::kWantSigma);
      const double fail = 1.0 - cell.pass_probability;
      epsilon = std::max(epsilon, fail);
      if (j == config.j) {
        (scenario == Scenario::A ? pass_a_at_j : pass_b_at_j) =
            cell.pass_probability;
      }
      table.push_back({{"scenario", to_string(scenario)},
                       {"j", j},
                       {"pass_probability", round_sig(cell.pass_probability)},
                       {"failure_probability", round_sig(fail)}});
      sigmas.push_back(std::move(*cell.sigma));
    }
    per_j_items.push_back(WeightedState{
        p_j, mix(Ensemble({{0.5, sigmas[0]}, {0.5, sigmas[1]}}))});
  }
  const double chi = holevo_chi(Ensemble(std::move(per_j_items)));

  json results;
  results["pass_table"] = std::move(table);
  results["epsilon"] = round_sig(epsilon);
  results["holevo_bits"] = round_sig(chi);
  results["detection"] = {
      {"j", config.j},
      {"exact", round_sig(1.0 - 0.5 * (pass_a_at_j + pass_b_at_j))}};

  json doc = base_report(config, db.width(), timing_mode_of(config.strategy));
  doc["config"]["j"] = config.j;
  doc["config"]["strategy"] = config.strategy;
  doc["query_weights"] = kQueryWeightConvention;
  doc["results"] = std::move(results);
  return doc;
}

json cmd_sweep(const RunConfig& config) {
  const Database db = resolve_db(config);
  if (config.grid_points < 1) {
    throw ValidationError("--grid-points must be at least 1");
  }
  std::vector<double> grid;
  for (int i = 0; i < config.grid_points; ++i) {
    grid.push_back(config.grid_points == 1
                       ? 0.0
                       : kHalfPi * static_cast<double>(i) /
                             static_cast<double>(config.grid_points - 1));
  }
  const TradeoffReport report = tradeoff_sweep(grid, db);

  json doc = base_report(config, db.width(), "n/a");
  doc["config"]["grid_points"] = config.grid_points;
  doc["config"]["verbose"] = config.verbose;
  doc["query_weights"] = kQueryWeightConvention;
  doc["results"] = tradeoff_report_to_json(report, config.verbose);
  return doc;
}

json cmd_qram_verify(const RunConfig& config) {
  if (config.n < 1) {
    throw ValidationError("--n is required: the largest width to verify");
  }
  if (!config.counts_only) {
    if (config.n > 6) {
      throw CapExceededError("state-level verification is limited to "
                             "n <= 6; pass --counts-only beyond that");
    }
    if (config.check_states < 1) {
      throw ValidationError("--check-states must be at least 1");
    }
  }

  RandomSource rng(config.seed);
  json widths = json::array();
  double worst_oracle = 0.0;
  double worst_involution = 0.0;
  double worst_roundtrip = 0.0;
  for (int w = 1; w <= config.n; ++w) {
    const GateCountReport counts = gate_count(w);
    json row;
    row["n"] = w;
    row["conventional_ops"] = counts.conventional_ops;
    row["addressing_ops"] = counts.addressing_ops;

    if (!config.counts_only) {
      const std::int64_t domain = std::int64_t{1} << w;
      const Database db = Database::random(w, rng.next_u64());
      const RegisterLayout qr({Register{"Q", domain}, Register{"R", 2}});
      const RegisterLayout qp({Register{"Q", domain}, Register{"P", domain}});

      auto random_state = [&rng](const RegisterLayout& layout) {
        Eigen::VectorXcd v(layout.total_dim());
        for (std::int64_t i = 0; i < v.size(); ++i) {
          v(i) = Complex(rng.normal(), rng.normal());
        }
        v /= v.norm();
        return StateVector(layout, std::move(v));
      };

      double oracle_dev = 0.0;
      double involution_dev = 0.0;
      double roundtrip_dev = 0.0;
      for (std::int64_t s = 0; s < config.check_states; ++s) {
        const StateVector psi = random_state(qr);
        const StateVector via = oracle_via_unary(psi, db);
        const StateVector direct = oracle_direct(psi, db);
        oracle_dev = std::max(
            oracle_dev, (via.amplitudes() - direct.amplitudes()).norm());

        // The oracle XORs a record bit, so applying it twice is the
        // identity.
        const StateVector twice = oracle_via_unary(via, db);
        involution_dev = std::max(
            involution_dev, (twice.amplitudes() - psi.amplitudes()).norm());

        const StateVector phi = random_state(qp);
        const StateVector back = unary_encode(
            unary_encode(phi, UnaryDirection::Forward),
            UnaryDirection::Reverse);
        roundtrip_dev = std::max(
            roundtrip_dev, (back.amplitudes() - phi.amplitudes()).norm());
      }
      row["states_checked"] = config.check_states;
      row["oracle_max_deviation"] = round_sig(oracle_dev);
      row["involution_max_deviation"] = round_sig(involution_dev);
      row["unary_roundtrip_max_deviation"] = round_sig(roundtrip_dev);
      worst_oracle = std::max(worst_oracle, oracle_dev);
      worst_involution = std::max(worst_involution, involution_dev);
      worst_roundtrip = std::max(worst_roundtrip, roundtrip_dev);
    }
    widths.push_back(std::move(row));
  }

  json results;
  results["widths"] = std::move(widths);
  if (!config.counts_only) {
    results["oracle_max_deviation"] = round_sig(worst_oracle);
    results["involution_max_deviation"] = round_sig(worst_involution);
    results["unary_roundtrip_max_deviation"] = round_sig(worst_roundtrip);
    results["tolerance"] = kStructuralTol;
    results["all_within_tolerance"] = worst_oracle <= kStructuralTol &&
                                      worst_involution <= kStructuralTol &&
                                      worst_roundtrip <= kStructuralTol;
  }

  json doc = base_report(config, config.n, "n/a");
  doc["config"]["seed"] = config.seed;
  doc["config"]["check_states"] = config.check_states;
  doc["config"]["counts_only"] = config.counts_only;
  doc["results"] = std::move(results);
  return doc;
}

json run_command(const RunConfig& config) {
  if (config.command == "run") return cmd_run(config);
  if (config.command == "attack-eval") return cmd_attack_eval(config);
  if (config.command == "sweep") return cmd_sweep(config);
  if (config.command == "qram-verify") return cmd_qram_verify(config);
  throw ValidationError("unknown command \"" + config.command + "\"");
}

std::string render_report(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "csv") return render_csv(report);
  throw ValidationError("unknown format \"" + format +
                        "\"; expected json or csv");
}

json tradeoff_report_to_json(const TradeoffReport& report,
                             bool include_sigma) {
  json points = json::array();
  for (const auto& point : report.points) {
    json p;
    p["theta"] = round_sig(point.theta);
    p["epsilon"] = round_sig(point.epsilon);
    p["fidelity_gap"] = round_sig(point.fidelity_gap);
    p["holevo_bits"] = round_sig(point.holevo_bits);
    if (include_sigma) p["sigma_star"] = density_to_json(point.sigma_star);
    points.push_back(std::move(p));
  }
  json doc;
  doc["n"] = report.n;
  doc["domain_size"] = report.domain_size;
  doc["points"] = std::move(points);
  doc["c_fidelity"] = round_sig(report.c_fidelity);
  doc["c_holevo"] = round_sig(report.c_holevo);
  doc["query_weights"] = report.query_weights;
  return doc;
}

TradeoffReport tradeoff_report_from_json(const json& doc) {
  TradeoffReport report;
  report.n = doc.at("n").get<int>();
  report.domain_size = doc.at("domain_size").get<std::int64_t>();
  report.c_fidelity = doc.at("c_fidelity").get<double>();
  report.c_holevo = doc.at("c_holevo").get<double>();
  report.query_weights = doc.at("query_weights").get<std::string>();
  for (const auto& p : doc.at("points")) {
    if (!p.contains("sigma_star")) {
      throw ValidationError("tradeoff report lacks sigma_star dumps; only "
                            "the verbose form round-trips");
    }
    report.points.push_back(TradeoffPoint{
        p.at("theta").get<double>(), p.at("epsilon").get<double>(),
        p.at("fidelity_gap").get<double>(), p.at("holevo_bits").get<double>(),
        density_from_json(p.at("sigma_star"))});
  }
  return report;
}

int cli_main(const RunConfig& config) {
  const auto emit_error = [](const std::string& kind,
                             const std::string& message) {
    json err;
    err["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << err.dump(2) << "\n";
  };
  try {
    const json report = run_command(config);
    const std::string text = render_report(report, config.format);
    if (config.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(config.out_path, std::ios::binary);
      if (!out) {
        throw IoError("cannot open \"" + config.out_path + "\" for writing");
      }
      out << text;
      if (!out) {
        throw IoError("failed writing report to \"" + config.out_path + "\"");
      }
    }
    return 0;
  } catch (const ValidationError& e) {
    emit_error("validation", e.what());
    return 2;
  } catch (const CapExceededError& e) {
    emit_error("cap_exceeded", e.what());
    return 3;
  } catch (const IoError& e) {
    emit_error("io", e.what());
    return 4;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}

}  // namespace qpq
