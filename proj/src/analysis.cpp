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

#include "qpq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace qpq {

namespace {

double pass_only(const AttackStrategy& strategy, const Database& db,
                 std::int64_t j, Scenario scenario) {
  return detail::evaluate_attack_cell(strategy, db, j, scenario, 0)
      .pass_probability;
}

void check_admissible(const Database& db, std::int64_t j) {
  if (j < 1 || j >= db.size()) {
    throw ValidationError("queried index must lie in 1..N-1");
  }
}

DensityMatrix sigma_cell(const AttackStrategy& strategy, const Database& db,
                         std::int64_t j, Scenario scenario) {
  auto cell =
      detail::evaluate_attack_cell(strategy, db, j, scenario, detail::kWantSigma);
  return std::move(*cell.sigma);
}

}  // namespace

double detection_probability(const AttackStrategy& strategy, const Database& db,
                             std::int64_t j, const DetectionMethod& method) {
  check_admissible(db, j);
  if (std::holds_alternative<ExactMethod>(method)) {
    const double pass_a = pass_only(strategy, db, j, Scenario::A);
    const double pass_b = pass_only(strategy, db, j, Scenario::B);
    return 1.0 - 0.5 * (pass_a + pass_b);
  }
  const auto& mc = std::get<MonteCarloMethod>(method);
  if (mc.trials < 1) {
    throw ValidationError("Monte Carlo detection needs at least one trial");
  }
  RandomSource rng(mc.seed);
  std::int64_t detected = 0;
  for (std::int64_t t = 0; t < mc.trials; ++t) {
    const QueryPlan plan = plan_query(j, Variant::Basic, db.width(), rng);
    if (sample_attack_run(strategy, db, plan, rng).detected_cheating) {
      ++detected;
    }
  }
  return static_cast<double>(detected) / static_cast<double>(mc.trials);
}

double epsilon_of(const AttackStrategy& strategy, const Database& db) {
  double eps = 0.0;
  for (std::int64_t j = 1; j < db.size(); ++j) {
    for (Scenario scenario : {Scenario::A, Scenario::B}) {
      eps = std::max(eps, 1.0 - pass_only(strategy, db, j, scenario));
    }
  }
  return eps;
}

DensityMatrix sigma_star_of(const AttackStrategy& strategy,
                            const Database& db) {
  std::vector<WeightedState> parts;
  const double weight = 1.0 / (2.0 * static_cast<double>(db.size() - 1));
  for (std::int64_t j = 1; j < db.size(); ++j) {
    for (Scenario scenario : {Scenario::A, Scenario::B}) {
      parts.push_back(
          WeightedState{weight, sigma_cell(strategy, db, j, scenario)});
    }
  }
  return mix(Ensemble(std::move(parts)));
}

double bob_information(const AttackStrategy& strategy, const Database& db) {
  std::vector<WeightedState> ensemble_items;
  const double p_j = 1.0 / static_cast<double>(db.size() - 1);
  for (std::int64_t j = 1; j < db.size(); ++j) {
    const DensityMatrix per_j =
        mix(Ensemble({{0.5, sigma_cell(strategy, db, j, Scenario::A)},
                      {0.5, sigma_cell(strategy, db, j, Scenario::B)}}));
    ensemble_items.push_back(WeightedState{p_j, per_j});
  }
  return holevo_chi(Ensemble(std::move(ensemble_items)));
}

TradeoffReport tradeoff_sweep(const std::vector<double>& theta_grid,
                              const Database& db) {
  if (theta_grid.empty()) {
    throw ValidationError("tradeoff sweep needs a nonempty angle grid");
  }
  TradeoffReport report;
  report.n = db.width();
  report.domain_size = db.size();
  const double log_n = std::log2(static_cast<double>(db.size()));

  for (double theta : theta_grid) {
    const auto strategy = coupling_attack(theta);

    std::vector<DensityMatrix> sigmas;
    double eps = 0.0;
    for (std::int64_t j = 1; j < db.size(); ++j) {
      for (Scenario scenario : {Scenario::A, Scenario::B}) {
        auto cell = detail::evaluate_attack_cell(*strategy, db, j, scenario,
                                                 detail::kWantSigma);
        eps = std::max(eps, 1.0 - cell.pass_probability);
        sigmas.push_back(std::move(*cell.sigma));
      }
    }

    const double weight = 1.0 / static_cast<double>(sigmas.size());
    std::vector<WeightedState> parts;
    for (const auto& sigma : sigmas) {
      parts.push_back(WeightedState{weight, sigma});
    }
    DensityMatrix sigma_star = mix(Ensemble(std::move(parts)));

    double gap = 0.0;
    for (const auto& sigma : sigmas) {
      gap = std::max(gap, 1.0 - fidelity(sigma, sigma_star));
    }

    // Per-j mixtures over scenarios feed the Holevo quantity; consecutive
    // sigma entries belong to the same j.
    std::vector<WeightedState> per_j;
    const double p_j = 1.0 / static_cast<double>(db.size() - 1);
    for (std::size_t i = 0; i + 1 < sigmas.size(); i += 2) {
      per_j.push_back(WeightedState{
          p_j, mix(Ensemble({{0.5, sigmas[i]}, {0.5, sigmas[i + 1]}}))});
    }
    const double chi = holevo_chi(Ensemble(std::move(per_j)));

    report.points.push_back(
        TradeoffPoint{theta, eps, gap, chi, std::move(sigma_star)});
  }

  for (const auto& point : report.points) {
    if (point.epsilon <= 0.0) continue;
    const double quartic = std::pow(point.epsilon, 0.25);
    report.c_fidelity =
        std::max(report.c_fidelity, point.fidelity_gap / quartic);
    report.c_holevo =
        std::max(report.c_holevo, point.holevo_bits / (quartic * log_n));
  }
  return report;
}

ComplexityReport complexity_report(int n) {
  ComplexityReport report;
  report.n = n;
  report.qpq_qubits = 2 * (static_cast<std::int64_t>(n) + 1);
  report.qpq_db_calls = 2;
  report.spir_exchange = std::int64_t{1} << n;
  report.classical_db_calls = std::int64_t{1} << n;
  report.qram_counts = gate_count(n);
  return report;
}

}  // namespace qpq
