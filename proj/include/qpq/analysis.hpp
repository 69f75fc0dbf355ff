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
#include <variant>
#include <vector>

#include "qpq/adversary.hpp"

namespace qpq {

// How the probability-of-admissible-query weights are chosen for Bob's
// Holevo information: uniform over {1 .. N-1}. Record 0 is the protocol's
// fixed reference and is never queried, so it carries no weight. Reports
// carry this string so consumers see the convention in effect.
inline constexpr const char* kQueryWeightConvention =
    "uniform over admissible queries 1..N-1 (reference record 0 excluded)";

struct ExactMethod {};
struct MonteCarloMethod {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};
using DetectionMethod = std::variant<ExactMethod, MonteCarloMethod>;

// Probability that Alice flags the run, with the scenario drawn uniformly.
// Exact: 1 - mean over scenarios of the pass probability for (scenario, j).
// Monte Carlo: detection frequency over sampled basic-variant runs.
double detection_probability(const AttackStrategy& strategy, const Database& db,
                             std::int64_t j, const DetectionMethod& method);

// Worst-case failure probability max over scenarios and admissible j of
// P_l(j) = 1 - pass_probability(l, j).
double epsilon_of(const AttackStrategy& strategy, const Database& db);

// Reference residual state: the uniform average of sigma_l(j) over both
// scenarios and all admissible j.
DensityMatrix sigma_star_of(const AttackStrategy& strategy, const Database& db);

// Holevo information of Bob's residue about the query, in bits, over the
// ensemble {uniform j, sigma(j) = [sigma_A(j) + sigma_B(j)] / 2}.
double bob_information(const AttackStrategy& strategy, const Database& db);

struct TradeoffPoint {
  double theta = 0.0;
  double epsilon = 0.0;
  double fidelity_gap = 0.0;  // max over (l, j) of 1 - F(sigma_l(j), sigma*)
  double holevo_bits = 0.0;
  DensityMatrix sigma_star;
};

struct TradeoffReport {
  int n = 0;
  std::int64_t domain_size = 0;  // N
  std::vector<TradeoffPoint> points;
  // Smallest constants covering the grid: fidelity_gap <= c_fidelity *
  // epsilon^(1/4) and holevo_bits <= c_holevo * epsilon^(1/4) * log2(N).
  double c_fidelity = 0.0;
  double c_holevo = 0.0;
  std::string query_weights = kQueryWeightConvention;
};

// Evaluates the coupling-attack family on a theta grid.
TradeoffReport tradeoff_sweep(const std::vector<double>& theta_grid,
                              const Database& db);

struct ComplexityReport {
  int n = 0;
  std::int64_t qpq_qubits = 0;        // 2 * (n + 1)
  std::int64_t qpq_db_calls = 0;      // 2
  std::int64_t spir_exchange = 0;     // 2^n
  std::int64_t classical_db_calls = 0;  // 2^n
  GateCountReport qram_counts;
};

ComplexityReport complexity_report(int n);

}  // namespace qpq
