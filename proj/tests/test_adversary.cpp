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
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "qpq/adversary.hpp"
#include "qpq/protocol.hpp"

using namespace qpq;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string error_message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

Eigen::VectorXcd flat_basis(std::int64_t dim, std::int64_t index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(index) = 1.0;
  return v;
}

// Reference calculation for the measure-and-resend attack, written out
// branch by branch on raw vectors. The replies live on [Q, R] flattened as
// q * 2 + r. Alice accepts a branch with probability
// P(plain register still reads j) * |<honest superposition | reply>|^2.
struct PassPair {
  double scenario_a = 0.0;
  double scenario_b = 0.0;
};

PassPair projective_pass_reference(const Database& db, std::int64_t j,
                                   bool repair_blind_branch) {
  const std::int64_t dim = db.size() * 2;
  Eigen::VectorXcd honest_super = Eigen::VectorXcd::Zero(dim);
  honest_super(j * 2 + db.record(j)) = kInvSqrt2;
  honest_super(0) = kInvSqrt2;
  const Eigen::VectorXcd answered = flat_basis(dim, j * 2 + db.record(j));
  const Eigen::VectorXcd blind = flat_basis(dim, 0);

  const auto plain_keeps_j = [&](const Eigen::VectorXcd& reply) {
    return std::norm(reply(j * 2)) + std::norm(reply(j * 2 + 1));
  };
  const auto test_pass = [&](const Eigen::VectorXcd& reply) {
    return std::norm(honest_super.dot(reply));
  };

  PassPair result;

  // Plain first. Bob reads j off the first register, so when the second
  // measurement lands on the reference branch he can still assemble the
  // honest superposition before replying.
  result.scenario_a = 0.5 * plain_keeps_j(answered) * test_pass(answered) +
                      0.5 * plain_keeps_j(answered) * test_pass(honest_super);

  // Superposed first. A blind first measurement forces the reply out before
  // the plain register names the address; only the relaxed accounting lets
  // that reply become the honest superposition after the fact.
  const Eigen::VectorXcd blind_reply =
      repair_blind_branch ? honest_super : blind;
  result.scenario_b = 0.5 * test_pass(answered) * plain_keeps_j(answered) +
                      0.5 * test_pass(blind_reply) * plain_keeps_j(answered);
  return result;
}

}  // namespace

TEST_CASE("parse_strategy round trips the supported names") {
  CHECK(parse_strategy("honest")->honest());
  CHECK(parse_strategy("honest")->name() == "honest");
  CHECK(parse_strategy("projective:paper")->name() == "projective:paper");
  CHECK(parse_strategy("projective:strict")->name() == "projective:strict");
  CHECK(parse_strategy("projective:paper")->branching());

  auto coupling = parse_strategy("coupling:0.75");
  CHECK(parse_strategy(coupling->name())->name() == coupling->name());
  CHECK_FALSE(coupling->honest());
  CHECK_FALSE(coupling->branching());

  CHECK_THROWS_AS(parse_strategy("projective"), ValidationError);
  CHECK_THROWS_AS(parse_strategy("coupling:abc"), ValidationError);
  CHECK_THROWS_AS(parse_strategy("coupling:0.5x"), ValidationError);
  CHECK_THROWS_AS(parse_strategy("coupling:-0.1"), ValidationError);
  CHECK_THROWS_AS(parse_strategy("coupling:3.2"), ValidationError);
  const std::string msg =
      error_message_of([] { parse_strategy("nonsense"); });
  CHECK(msg.find("projective:strict") != std::string::npos);
}

TEST_CASE("measure-and-resend pass probabilities match the reference") {
  for (int n = 1; n <= 3; ++n) {
    Database db = Database::random(n, 1000 + static_cast<std::uint64_t>(n));
    for (const ProjectiveMode mode :
         {ProjectiveMode::Paper, ProjectiveMode::Strict}) {
      auto strategy = projective_both_strategy(mode);
      for (std::int64_t j = 1; j < db.size(); ++j) {
        const PassPair expected = projective_pass_reference(
            db, j, mode == ProjectiveMode::Paper);
        const auto cell_a =
            simulate_attack_exact(*strategy, db, j, Scenario::A);
        const auto cell_b =
            simulate_attack_exact(*strategy, db, j, Scenario::B);
        CHECK(cell_a.pass_probability ==
              doctest::Approx(expected.scenario_a).epsilon(1e-12));
        CHECK(cell_b.pass_probability ==
              doctest::Approx(expected.scenario_b).epsilon(1e-12));
        // The closed forms behind the reference.
        CHECK(expected.scenario_a == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(expected.scenario_b ==
              doctest::Approx(mode == ProjectiveMode::Paper ? 0.75 : 0.5)
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("measure-and-resend branches carry Bob's records") {
  Database db = Database::random(2, 7);
  auto strategy = projective_both_strategy(ProjectiveMode::Paper);
  const std::int64_t j = 1;
  const std::int64_t domain = db.size();

  auto branches_a =
      strategy->enumerate_branches(db, detail::attack_plan(2, j, Scenario::A));
  double total = 0.0;
  for (const auto& branch : branches_a) total += branch.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Scenario A measures j on the first register, then j or 0 on the second.
  std::vector<std::int64_t> records_a;
  for (const auto& branch : branches_a) {
    if (branch.weight > 1e-12) {
      records_a.push_back(branch.record_index);
      CHECK(branch.learned_index == j);
      CHECK(branch.responses.size() == 2);
    }
  }
  REQUIRE(records_a.size() == 2);
  CHECK(((records_a[0] == j * domain + j && records_a[1] == j * domain) ||
         (records_a[1] == j * domain + j && records_a[0] == j * domain)));

  // Scenario B can measure the reference branch first; it still learns j
  // from the plain register.
  auto branches_b =
      strategy->enumerate_branches(db, detail::attack_plan(2, j, Scenario::B));
  for (const auto& branch : branches_b) {
    if (branch.weight > 1e-12) {
      CHECK(branch.learned_index == j);
      CHECK((branch.record_index == j * domain + j ||
             branch.record_index == j));
    }
  }
}

TEST_CASE("coupling attack pass probability follows the rotation angle") {
  const double kPi = std::acos(-1.0);
  for (int n = 1; n <= 2; ++n) {
    Database db = Database::random(n, 30 + static_cast<std::uint64_t>(n));
    for (const double theta : {0.0, 0.3, kPi / 4, 1.2, kPi / 2}) {
      auto strategy = coupling_attack(theta);
      const double expected = 0.5 * (1.0 + std::cos(theta));
      for (std::int64_t j = 1; j < db.size(); ++j) {
        for (const Scenario scenario : {Scenario::A, Scenario::B}) {
          const auto cell = simulate_attack_exact(*strategy, db, j, scenario);
          CHECK(cell.pass_probability ==
                doctest::Approx(expected).epsilon(1e-10));
        }
      }
    }
  }
  CHECK_THROWS_AS(coupling_attack(-0.2), ValidationError);
  CHECK_THROWS_AS(coupling_attack(2.0), ValidationError);
}

TEST_CASE("coupling unitaries are unitary and cached per database") {
  auto strategy = coupling_attack(0.4);
  for (int n = 1; n <= 2; ++n) {
    Database db = Database::random(n, 5);
    for (const UnitaryMatrix* u :
         {&strategy->first_unitary(db), &strategy->second_unitary(db)}) {
      const Eigen::MatrixXcd& m = u->matrix();
      const Eigen::MatrixXcd gram = m.adjoint() * m;
      const Eigen::MatrixXcd identity =
          Eigen::MatrixXcd::Identity(m.rows(), m.cols());
      CHECK((gram - identity).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  Database flips(1, {0, 1});
  Database flat(1, {0, 0});
  const UnitaryMatrix& cached_once = strategy->first_unitary(flips);
  const UnitaryMatrix& cached_twice = strategy->first_unitary(flips);
  CHECK(&cached_once == &cached_twice);
  const Eigen::MatrixXcd before = cached_once.matrix();
  const Eigen::MatrixXcd after = strategy->first_unitary(flat).matrix();
  CHECK((before - after).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("unitary dilation agrees with branch enumeration") {
  for (int n = 1; n <= 2; ++n) {
    Database db = Database::random(n, 900 + static_cast<std::uint64_t>(n));
    auto strict = projective_both_strategy(ProjectiveMode::Strict);
    auto paper = projective_both_strategy(ProjectiveMode::Paper);
    for (std::int64_t j = 1; j < db.size(); ++j) {
      for (const Scenario scenario : {Scenario::A, Scenario::B}) {
        const auto by_branch = detail::evaluate_attack_cell(
            *strict, db, j, scenario, detail::kWantSigma | detail::kWantRho);
        const auto by_unitary = detail::evaluate_attack_cell(
            *strict, db, j, scenario, detail::kWantSigma | detail::kWantRho,
            /*force_dilation=*/true);
        CHECK(by_branch.pass_probability ==
              doctest::Approx(by_unitary.pass_probability).epsilon(1e-10));
        CHECK((by_branch.rho->matrix() - by_unitary.rho->matrix())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        // The circuit form defers Bob's measurement, so his residue keeps
        // coherences between address pairs; measuring it recovers the
        // branch record distribution on the diagonal.
        CHECK((by_branch.sigma->matrix().diagonal() -
               by_unitary.sigma->matrix().diagonal())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
      }
      // The relaxed mode only has a circuit form when the plain register
      // arrives first; the late repair has no unitary realization.
      const auto paper_branch = detail::evaluate_attack_cell(
          *paper, db, j, Scenario::A, detail::kWantRho);
      const auto paper_unitary = detail::evaluate_attack_cell(
          *paper, db, j, Scenario::A, detail::kWantRho,
          /*force_dilation=*/true);
      CHECK(paper_branch.pass_probability ==
            doctest::Approx(paper_unitary.pass_probability).epsilon(1e-10));
      CHECK((paper_branch.rho->matrix() - paper_unitary.rho->matrix())
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("honest strategy passes every cell, also as a dilation") {
  Database db = Database::random(2, 11);
  auto honest = honest_strategy();
  const AttackAssessment assessment = assess_attack_exact(*honest, db);
  CHECK(assessment.entries.size() == 6);  // 3 addresses, 2 scenarios
  for (const auto& entry : assessment.entries) {
    CHECK(entry.pass_probability == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto dilated = detail::evaluate_attack_cell(
      *honest, db, 1, Scenario::B, 0, /*force_dilation=*/true);
  CHECK(dilated.pass_probability == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dilated.sigma == nullptr);
  CHECK(dilated.rho == nullptr);
}

TEST_CASE("residual states record which addresses Bob saw") {
  Database db = Database::random(2, 21);
  const std::int64_t j = 2;
  const std::int64_t domain = db.size();

  for (const auto& strategy :
       {projective_both_strategy(ProjectiveMode::Paper),
        coupling_attack(std::acos(-1.0) / 2)}) {
    const auto cell = simulate_attack_exact(*strategy, db, j, Scenario::A);
    const Eigen::MatrixXcd& sigma = cell.sigma.matrix();
    REQUIRE(sigma.rows() == domain * domain);
    CHECK(std::abs(sigma(j * domain + j, j * domain + j) - 0.5) < 1e-10);
    CHECK(std::abs(sigma(j * domain, j * domain) - 0.5) < 1e-10);
    double off_mass = 0.0;
    for (Eigen::Index row = 0; row < sigma.rows(); ++row) {
      for (Eigen::Index col = 0; col < sigma.cols(); ++col) {
        if (row == col) continue;
        off_mass += std::abs(sigma(row, col));
      }
    }
    CHECK(off_mass < 1e-10);
    CHECK(std::abs(cell.rho.matrix().trace() - Complex(1.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("width caps on the exact attack paths") {
  auto projective = projective_both_strategy(ProjectiveMode::Strict);

  // The dilation stores one amplitude per address pair and runs out of
  // ancilla room past n = 3.
  Database wide(4, std::vector<std::uint8_t>(16, 0));
  CHECK_THROWS_AS(projective->first_unitary(wide), CapExceededError);
  const std::string msg = error_message_of(
      [&] { projective->first_unitary(wide); });
  CHECK(msg.find("branch-based") != std::string::npos);

  // Branch enumeration carries further but stops at n = 5.
  Database wider(6, std::vector<std::uint8_t>(64, 0));
  CHECK_THROWS_AS(simulate_attack_exact(*projective, wider, 1, Scenario::A),
                  CapExceededError);

  // The coupling family keeps its ancilla at N^2 as well.
  auto coupling = coupling_attack(0.8);
  CHECK_THROWS_AS(coupling->first_unitary(wide), CapExceededError);

  // Joint-space simulation refuses oversized private ancillas.
  auto big = custom_unitary_strategy(UnitaryMatrix::identity(512),
                                     UnitaryMatrix::identity(512), 128,
                                     "big-identity");
  Database db1 = Database::random(1, 3);
  RandomSource rng(2);
  CHECK_THROWS_AS(run_protocol(db1, detail::attack_plan(1, 1, Scenario::A),
                               *big, rng),
                  CapExceededError);
}

TEST_CASE("custom strategies validate their shapes") {
  CHECK_THROWS_AS(custom_unitary_strategy(UnitaryMatrix::identity(4),
                                          UnitaryMatrix::identity(4), 0, "x"),
                  ValidationError);
  CHECK_THROWS_AS(custom_unitary_strategy(UnitaryMatrix::identity(4),
                                          UnitaryMatrix::identity(8), 1, "x"),
                  DimensionError);
  CHECK_THROWS_AS(custom_unitary_strategy(UnitaryMatrix::identity(8),
                                          UnitaryMatrix::identity(8), 3, "x"),
                  DimensionError);

  auto ok = custom_unitary_strategy(UnitaryMatrix::identity(8),
                                    UnitaryMatrix::identity(8), 2, "idle");
  CHECK(ok->ancilla_dim(1) == 2);
  CHECK_THROWS_AS(ok->ancilla_dim(2), DimensionError);
  CHECK(ok->name() == "idle");

  // An identity pair never writes the answer bit, so the reply cannot
  // project onto the honest pair when the record is 1.
  Database db(1, {0, 1});
  const auto cell = simulate_attack_exact(*ok, db, 1, Scenario::A);
  CHECK(cell.pass_probability == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("attack machinery rejects the three-register variant") {
  Database db = Database::random(2, 13);
  auto strategy = projective_both_strategy(ProjectiveMode::Paper);
  QueryPlan plan;
  plan.n = 2;
  plan.j = 1;
  plan.variant = Variant::TwoQuery;
  plan.reference = 2;
  plan.alpha = Complex(kInvSqrt2, 0.0);
  plan.beta = Complex(kInvSqrt2, 0.0);
  plan.superposed_slot = 0;
  plan.scenario = Scenario::B;
  plan.validate();

  RandomSource rng(6);
  CHECK_THROWS_AS(sample_attack_run(*strategy, db, plan, rng),
                  ValidationError);
  CHECK_THROWS_AS(strategy->enumerate_branches(db, plan), ValidationError);
  auto coupling = coupling_attack(0.5);
  CHECK_THROWS_AS(run_protocol(db, plan, *coupling, rng), ValidationError);
}

TEST_CASE("sampled attack runs expose the learned trade") {
  Database db = Database::random(1, 17);
  auto strategy = projective_both_strategy(ProjectiveMode::Strict);
  RandomSource rng(23);
  int detections = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    QueryPlan plan = plan_query(1, Variant::Basic, 1, rng);
    ProtocolOutcome outcome = sample_attack_run(*strategy, db, plan, rng);
    if (outcome.detected_cheating) ++detections;
  }
  const double rate = static_cast<double>(detections) / trials;
  // Exact rate is 3/8; allow five sigma.
  CHECK(std::abs(rate - 0.375) < 5.0 * std::sqrt(0.375 * 0.625 / trials));
}
