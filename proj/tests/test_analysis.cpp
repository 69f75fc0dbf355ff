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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "qpq/analysis.hpp"

using namespace qpq;

namespace {

const double kPi = std::acos(-1.0);

std::vector<double> linspace_grid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    grid.push_back(kPi / 2 * i / (points - 1));
  }
  return grid;
}

}  // namespace

TEST_CASE("exact detection probability of the measure-and-resend attack") {
  auto paper = projective_both_strategy(ProjectiveMode::Paper);
  auto strict = projective_both_strategy(ProjectiveMode::Strict);
  for (int n = 1; n <= 3; ++n) {
    Database db = Database::random(n, 400 + static_cast<std::uint64_t>(n));
    for (std::int64_t j = 1; j < db.size(); ++j) {
      CHECK(detection_probability(*paper, db, j, ExactMethod{}) ==
            doctest::Approx(0.25).epsilon(1e-10));
      CHECK(detection_probability(*strict, db, j, ExactMethod{}) ==
            doctest::Approx(0.375).epsilon(1e-10));
    }
  }
}

TEST_CASE("monte carlo detection agrees with the exact value") {
  Database db = Database::random(2, 5);
  auto paper = projective_both_strategy(ProjectiveMode::Paper);
  const double exact = detection_probability(*paper, db, 1, ExactMethod{});
  const std::int64_t trials = 20000;
  const double sampled = detection_probability(
      *paper, db, 1, MonteCarloMethod{trials, 99});
  const double sigma = std::sqrt(exact * (1.0 - exact) / trials);
  CHECK(std::abs(sampled - exact) < 4.0 * sigma);

  // Same seed, same estimate; new seed, fresh draw.
  CHECK(detection_probability(*paper, db, 1, MonteCarloMethod{trials, 99}) ==
        sampled);
  CHECK_THROWS_AS(
      detection_probability(*paper, db, 1, MonteCarloMethod{0, 1}),
      ValidationError);
}

TEST_CASE("detection probability rejects inadmissible queries") {
  Database db = Database::random(2, 5);
  auto honest = honest_strategy();
  CHECK_THROWS_AS(detection_probability(*honest, db, 0, ExactMethod{}),
                  ValidationError);
  CHECK_THROWS_AS(detection_probability(*honest, db, 4, ExactMethod{}),
                  ValidationError);
  CHECK(detection_probability(*honest, db, 3, ExactMethod{}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("worst-case failure probability") {
  Database db = Database::random(2, 8);
  auto honest = honest_strategy();
  CHECK(epsilon_of(*honest, db) == doctest::Approx(0.0).epsilon(1e-12));
  for (const double theta : {0.2, 0.9, kPi / 2}) {
    auto strategy = coupling_attack(theta);
    CHECK(epsilon_of(*strategy, db) ==
          doctest::Approx(0.5 * (1.0 - std::cos(theta))).epsilon(1e-10));
  }
}

TEST_CASE("reference residual state averages every cell") {
  Database db = Database::random(2, 8);
  const std::int64_t domain = db.size();
  auto strategy = coupling_attack(kPi / 2);
  DensityMatrix sigma_star = sigma_star_of(*strategy, db);
  REQUIRE(sigma_star.dim() == domain * domain);
  CHECK(std::abs(sigma_star.matrix().trace() - Complex(1.0, 0.0)) < 1e-10);

  // Flat address-pair weights: both scenarios mix (j, j) at 1/2 with
  // (j, 0) or (0, j) at 1/4 each, averaged over the three addresses.
  for (std::int64_t j = 1; j < domain; ++j) {
    const double third = 1.0 / (domain - 1);
    CHECK(std::abs(sigma_star.matrix()(j * domain + j, j * domain + j) -
                   0.5 * third) < 1e-10);
    CHECK(std::abs(sigma_star.matrix()(j * domain, j * domain) -
                   0.25 * third) < 1e-10);
    CHECK(std::abs(sigma_star.matrix()(j, j) - 0.25 * third) < 1e-10);
  }
}

TEST_CASE("information gain of the strongest coupling") {
  // Copying the address outright leaves Bob a uniform flag over
  // {queried, reference}, worth log2(3) bits once averaged over scenarios.
  const double log2_3 = std::log2(3.0);
  Database db = Database::random(2, 12);
  auto full = coupling_attack(kPi / 2);
  CHECK(bob_information(*full, db) == doctest::Approx(log2_3).epsilon(1e-9));

  auto paper = projective_both_strategy(ProjectiveMode::Paper);
  CHECK(bob_information(*paper, db) == doctest::Approx(log2_3).epsilon(1e-9));

  auto honest = honest_strategy();
  CHECK(bob_information(*honest, db) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("tradeoff sweep over the coupling family") {
  Database db = Database::random(2, 3);
  const TradeoffReport report = tradeoff_sweep(linspace_grid(5), db);
  CHECK(report.n == 2);
  CHECK(report.domain_size == 4);
  CHECK(report.query_weights == std::string(kQueryWeightConvention));
  REQUIRE(report.points.size() == 5);

  // Honest endpoint is exactly null.
  CHECK(report.points.front().theta == doctest::Approx(0.0));
  CHECK(report.points.front().epsilon ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(report.points.front().fidelity_gap ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(report.points.front().holevo_bits ==
        doctest::Approx(0.0).epsilon(1e-9));

  for (std::size_t i = 1; i < report.points.size(); ++i) {
    const auto& prev = report.points[i - 1];
    const auto& point = report.points[i];
    CHECK(point.theta > prev.theta);
    CHECK(point.epsilon >= prev.epsilon - 1e-12);
    CHECK(point.fidelity_gap >= prev.fidelity_gap - 1e-12);
    CHECK(point.holevo_bits >= prev.holevo_bits - 1e-9);
    CHECK(point.epsilon ==
          doctest::Approx(0.5 * (1.0 - std::cos(point.theta)))
              .epsilon(1e-10));
    CHECK(std::abs(point.sigma_star.matrix().trace() - Complex(1.0, 0.0)) <
          1e-10);
  }

  const auto& last = report.points.back();
  CHECK(last.epsilon == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(last.holevo_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-9));

  // The covering constants are tight: some grid point attains them.
  CHECK(std::isfinite(report.c_fidelity));
  CHECK(std::isfinite(report.c_holevo));
  CHECK(report.c_fidelity > 0.0);
  CHECK(report.c_holevo > 0.0);
  double best_f = 0.0;
  double best_h = 0.0;
  for (const auto& point : report.points) {
    if (point.epsilon <= 0.0) continue;
    const double root = std::pow(point.epsilon, 0.25);
    best_f = std::max(best_f, point.fidelity_gap / root);
    best_h = std::max(best_h, point.holevo_bits / (root * 2.0));
    CHECK(point.fidelity_gap <= report.c_fidelity * root + 1e-12);
    CHECK(point.holevo_bits <= report.c_holevo * root * 2.0 + 1e-12);
  }
  CHECK(report.c_fidelity == doctest::Approx(best_f).epsilon(1e-10));
  CHECK(report.c_holevo == doctest::Approx(best_h).epsilon(1e-10));

  CHECK_THROWS_AS(tradeoff_sweep({}, db), ValidationError);
}

TEST_CASE("resource counts close forms") {
  for (const int n : {1, 3, 10, 20}) {
    const ComplexityReport report = complexity_report(n);
    CHECK(report.n == n);
    CHECK(report.qpq_qubits == 2 * (n + 1));
    CHECK(report.qpq_db_calls == 2);
    CHECK(report.spir_exchange == (std::int64_t{1} << n));
    CHECK(report.classical_db_calls == (std::int64_t{1} << n));
    CHECK(report.qram_counts.n == n);
    CHECK(report.qram_counts.conventional_ops ==
          (std::int64_t{1} << (n + 1)) - 2);
    CHECK(report.qram_counts.addressing_ops == n);
  }
  CHECK(complexity_report(10).qram_counts.conventional_ops == 2046);
}
