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
#include <memory>
#include <vector>

#include "doctest.h"
#include "qpq/adversary.hpp"
#include "qpq/protocol.hpp"

using namespace qpq;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

QueryPlan basic_plan(int n, std::int64_t j, Scenario scenario) {
  QueryPlan plan;
  plan.n = n;
  plan.j = j;
  plan.variant = Variant::Basic;
  plan.alpha = Complex(kInvSqrt2, 0.0);
  plan.beta = Complex(kInvSqrt2, 0.0);
  plan.scenario = scenario;
  plan.superposed_slot = scenario == Scenario::A ? 1 : 0;
  plan.validate();
  return plan;
}

QueryPlan two_query_plan(int n, std::int64_t j, std::int64_t k, int slot) {
  QueryPlan plan;
  plan.n = n;
  plan.j = j;
  plan.variant = Variant::TwoQuery;
  plan.reference = k;
  plan.alpha = Complex(kInvSqrt2, 0.0);
  plan.beta = Complex(kInvSqrt2, 0.0);
  plan.superposed_slot = slot;
  plan.scenario = slot == 0 ? Scenario::B : Scenario::A;
  plan.validate();
  return plan;
}

// A strategy that hands back replies on the wrong registers.
class MalformedStrategy final : public AttackStrategy {
 public:
  std::string name() const override { return "malformed"; }
  bool branching() const override { return true; }
  std::int64_t ancilla_dim(int) const override { return 1; }

  class Responder final : public BranchResponder {
   public:
    StateVector respond(const StateVector& query, RandomSource&) override {
      return query;  // missing the R register entirely
    }
    void finalize(std::vector<StateVector>&) override {}
    std::int64_t record_index() const override { return 0; }
    std::int64_t learned_index() const override { return 0; }
  };

  std::unique_ptr<BranchResponder> make_responder(
      const Database&, const QueryPlan&) const override {
    return std::make_unique<Responder>();
  }

  std::vector<AttackBranch> enumerate_branches(
      const Database& db, const QueryPlan& plan) const override {
    AttackBranch branch;
    branch.weight = 1.0;
    for (const auto& query : alice_prepare(plan, plan.n)) {
      branch.responses.push_back(query);
    }
    (void)db;
    return {branch};
  }

 protected:
  UnitaryPair build_unitaries(const Database&) const override {
    UnitaryMatrix id = UnitaryMatrix::identity(2);
    return UnitaryPair{id, id};
  }
};

}  // namespace

TEST_CASE("plan validation catches bad inputs") {
  CHECK_THROWS_AS(basic_plan(2, 0, Scenario::A), ValidationError);
  CHECK_THROWS_AS(basic_plan(2, 4, Scenario::A), ValidationError);
  CHECK_THROWS_AS(basic_plan(0, 1, Scenario::A), ValidationError);
  CHECK_NOTHROW(basic_plan(2, 3, Scenario::B));

  // Basic must carry the balanced amplitudes.
  QueryPlan lop = basic_plan(2, 1, Scenario::A);
  lop.alpha = Complex(0.6, 0.0);
  lop.beta = Complex(0.8, 0.0);
  CHECK_THROWS_AS(lop.validate(), ValidationError);

  // Amplitudes must be normalized for the arbitrary variant.
  QueryPlan amp = basic_plan(2, 1, Scenario::A);
  amp.variant = Variant::ArbitraryAmplitude;
  amp.alpha = Complex(1.0, 0.0);
  amp.beta = Complex(1.0, 0.0);
  CHECK_THROWS_AS(amp.validate(), ValidationError);

  // Scenario label must match the superposed slot.
  QueryPlan twisted = basic_plan(2, 1, Scenario::A);
  twisted.superposed_slot = 0;
  CHECK_THROWS_AS(twisted.validate(), ValidationError);

  // Two-query partner must be admissible and distinct.
  CHECK_THROWS_AS(two_query_plan(2, 1, 1, 0), ValidationError);
  CHECK_THROWS_AS(two_query_plan(2, 1, 0, 0), ValidationError);
  CHECK_NOTHROW(two_query_plan(2, 1, 3, 2));
}

TEST_CASE("plan_query draws are reproducible and in range") {
  RandomSource rng(77);
  RandomSource rng_replay(77);
  for (int t = 0; t < 50; ++t) {
    QueryPlan a = plan_query(3, Variant::Basic, 3, rng);
    QueryPlan b = plan_query(3, Variant::Basic, 3, rng_replay);
    CHECK(a.scenario == b.scenario);
    CHECK(a.seed == b.seed);
    CHECK(a.superposed_slot == (a.scenario == Scenario::A ? 1 : 0));
  }
}

TEST_CASE("plan_query spreads the two-query randomness") {
  RandomSource rng(31);
  int slot_counts[3] = {0, 0, 0};
  bool saw_scenario_a = false;
  bool saw_scenario_b = false;
  for (int t = 0; t < 600; ++t) {
    QueryPlan plan = plan_query(2, Variant::TwoQuery, 2, rng);
    REQUIRE(plan.reference >= 1);
    REQUIRE(plan.reference <= 3);
    REQUIRE(plan.reference != plan.j);
    REQUIRE(plan.superposed_slot >= 0);
    REQUIRE(plan.superposed_slot <= 2);
    ++slot_counts[plan.superposed_slot];
    // The label is derived from the slot.
    CHECK(plan.scenario ==
          (plan.superposed_slot == 0 ? Scenario::B : Scenario::A));
    saw_scenario_a = saw_scenario_a || plan.scenario == Scenario::A;
    saw_scenario_b = saw_scenario_b || plan.scenario == Scenario::B;
  }
  for (int slot = 0; slot < 3; ++slot) {
    CHECK(slot_counts[slot] > 120);  // ~200 expected per slot
  }
  CHECK(saw_scenario_a);
  CHECK(saw_scenario_b);
}

TEST_CASE("plan_query rejects parameters for the wrong variant") {
  RandomSource rng(1);
  CHECK_THROWS_AS(
      plan_query(1, Variant::Basic, 2, rng, Complex(0.6, 0.0)),
      ValidationError);
  CHECK_THROWS_AS(plan_query(1, Variant::Basic, 2, rng, std::nullopt,
                             std::nullopt, std::int64_t{2}),
                  ValidationError);
  CHECK_NOTHROW(plan_query(1, Variant::ArbitraryAmplitude, 2, rng,
                           Complex(0.6, 0.0), Complex(0.8, 0.0)));
}

TEST_CASE("alice_prepare emits the plan's registers in send order") {
  QueryPlan a = basic_plan(2, 3, Scenario::A);
  auto sends_a = alice_prepare(a, 2);
  REQUIRE(sends_a.size() == 2);
  // Plain first: |3>.
  CHECK(std::abs(sends_a[0].amplitude(3) - Complex(1.0, 0.0)) < 1e-12);
  // Superposed second: (|3> + |0>)/sqrt2.
  CHECK(std::abs(sends_a[1].amplitude(3) - Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(sends_a[1].amplitude(0) - Complex(kInvSqrt2, 0.0)) < 1e-12);

  QueryPlan b = basic_plan(2, 3, Scenario::B);
  auto sends_b = alice_prepare(b, 2);
  CHECK(std::abs(sends_b[0].amplitude(0) - Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(sends_b[1].amplitude(3) - Complex(1.0, 0.0)) < 1e-12);

  QueryPlan two = two_query_plan(2, 1, 2, 1);
  auto sends_two = alice_prepare(two, 2);
  REQUIRE(sends_two.size() == 3);
  // Plain j first, superposed in slot 1, plain k last.
  CHECK(std::abs(sends_two[0].amplitude(1) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(sends_two[1].amplitude(1) - Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(sends_two[1].amplitude(2) - Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(sends_two[2].amplitude(2) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("query overlap facts from explicit expansion") {
  // Computed by hand here: the plain query |j> against (|j> + |0>)/sqrt2
  // has inner product 1/sqrt2, and the two send orderings of the pair
  // overlap in exactly 1/2.
  const int n = 3;
  const std::int64_t domain = 8;
  const std::int64_t j = 5;
  Eigen::VectorXcd plain = Eigen::VectorXcd::Zero(domain);
  plain(j) = 1.0;
  Eigen::VectorXcd super = Eigen::VectorXcd::Zero(domain);
  super(j) = kInvSqrt2;
  super(0) = kInvSqrt2;

  const Complex direct = plain.dot(super);  // conjugating dot
  CHECK(std::abs(std::abs(direct) - kInvSqrt2) < 1e-12);

  // Library states agree.
  QueryPlan plan = basic_plan(n, j, Scenario::A);
  auto sends = alice_prepare(plan, n);
  CHECK(std::abs(std::abs(overlap(sends[0], sends[1])) - kInvSqrt2) < 1e-12);

  // Ordered pairs: S_A = plain (x) super, S_B = super (x) plain.
  Eigen::VectorXcd ordered_a(domain * domain);
  Eigen::VectorXcd ordered_b(domain * domain);
  ordered_a.setZero();
  ordered_b.setZero();
  for (std::int64_t x = 0; x < domain; ++x) {
    for (std::int64_t y = 0; y < domain; ++y) {
      ordered_a(x * domain + y) = plain(x) * super(y);
      ordered_b(x * domain + y) = super(x) * plain(y);
    }
  }
  const Complex pair_overlap = ordered_a.dot(ordered_b);
  CHECK(std::abs(std::abs(pair_overlap) - 0.5) < 1e-12);
}

TEST_CASE("honest reference states carry the record values") {
  QueryPlan plan = basic_plan(2, 3, Scenario::A);
  HonestReference ref = build_honest_reference(plan, {1});
  // Superposed reference: (|3,1> + |0,0>)/sqrt2 on [Q, R]; flat q*2+r.
  CHECK(std::abs(ref.superposed.amplitude(3 * 2 + 1) -
                 Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(ref.superposed.amplitude(0) - Complex(kInvSqrt2, 0.0)) <
        1e-12);
  REQUIRE(ref.plain.size() == 1);
  CHECK(std::abs(ref.plain[0].amplitude(3 * 2 + 1) - Complex(1.0, 0.0)) <
        1e-12);

  // The superposed reply overlaps the plain-answer branch in |alpha|^2 and
  // the reference branch in |beta|^2; both are 1/2 for the basic variant.
  StateVector answer_branch = ref.plain[0];
  CHECK(std::norm(overlap(ref.superposed, answer_branch)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  RegisterLayout qr({Register{"Q", 4}, Register{"R", 2}});
  StateVector zero_branch = StateVector::basis(qr, 0);
  CHECK(std::norm(overlap(ref.superposed, zero_branch)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Two-query reference: (|j, a_j> + |k, a_k>)/sqrt2.
  QueryPlan two = two_query_plan(2, 1, 2, 0);
  HonestReference tref = build_honest_reference(two, {1, 0});
  CHECK(std::abs(tref.superposed.amplitude(1 * 2 + 1) -
                 Complex(kInvSqrt2, 0.0)) < 1e-12);
  CHECK(std::abs(tref.superposed.amplitude(2 * 2 + 0) -
                 Complex(kInvSqrt2, 0.0)) < 1e-12);
}

TEST_CASE("transcript enforces alternation and finalize") {
  CHECK_THROWS_AS(Transcript(0), ValidationError);
  Transcript t(2);
  CHECK_THROWS_AS(t.record_reply({Register{"Q1", 4}, Register{"R1", 2}}),
                  ValidationError);
  t.record_send({Register{"Q1", 4}});
  CHECK_THROWS_AS(t.record_send({Register{"Q2", 4}}), ValidationError);
  CHECK_THROWS_AS(t.total_qubits(), ValidationError);
  CHECK_THROWS_AS(t.finalize(), ValidationError);
  t.record_reply({Register{"Q1", 4}, Register{"R1", 2}});
  t.add_db_calls(1);
  t.finalize();
  CHECK(t.total_qubits() == 3);
  CHECK(t.gross_qubits() == 6);
  CHECK(t.db_calls() == 1);
  CHECK_THROWS_AS(t.add_db_calls(1), ValidationError);
}

TEST_CASE("transcript totals") {
  Transcript t(3);
  t.record_send({Register{"Q1", 8}});
  t.add_db_calls(1);
  t.record_reply({Register{"Q1", 8}, Register{"R1", 2}});
  t.record_send({Register{"Q2", 8}});
  t.add_db_calls(1);
  t.record_reply({Register{"Q2", 8}, Register{"R2", 2}});
  t.finalize();
  CHECK(t.total_qubits() == 8);
  CHECK(t.gross_qubits() == 16);
  CHECK(t.db_calls() == 2);
  CHECK_THROWS_AS(t.record_send({Register{"Q3", 8}}), ValidationError);
}

TEST_CASE("honest runs accept and answer correctly in every variant") {
  Database db = Database::random(3, 42);
  auto honest = honest_strategy();
  RandomSource rng(5);

  std::vector<QueryPlan> plans;
  for (std::int64_t j = 1; j < db.size(); ++j) {
    plans.push_back(basic_plan(3, j, Scenario::A));
    plans.push_back(basic_plan(3, j, Scenario::B));
    const std::int64_t k = j == 1 ? 2 : 1;
    for (int slot = 0; slot < 3; ++slot) {
      plans.push_back(two_query_plan(3, j, k, slot));
    }
  }
  for (const auto& plan : plans) {
    RunResult run = run_protocol(db, plan, *honest, rng);
    CHECK(run.outcome.answer == db.record(plan.j));
    CHECK(run.outcome.plain_consistent);
    CHECK(run.outcome.test_passed);
    CHECK_FALSE(run.outcome.detected_cheating);

    ExactRunResult exact = run_protocol_exact(db, plan, *honest);
    CHECK(exact.accept_prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.detection_prob == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(exact.answer_correct_prob == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("arbitrary amplitudes stay honest-complete") {
  Database db = Database::random(2, 9);
  auto honest = honest_strategy();
  const Complex alpha(std::sqrt(0.3), 0.0);
  const Complex beta(0.0, std::sqrt(0.7));
  QueryPlan plan;
  plan.n = 2;
  plan.j = 2;
  plan.variant = Variant::ArbitraryAmplitude;
  plan.alpha = alpha;
  plan.beta = beta;
  plan.scenario = Scenario::B;
  plan.superposed_slot = 0;
  plan.validate();
  ExactRunResult exact = run_protocol_exact(db, plan, *honest);
  CHECK(exact.accept_prob == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("plain readout flags a swapped index") {
  QueryPlan plan = basic_plan(2, 1, Scenario::A);
  RegisterLayout qr({Register{"Q", 4}, Register{"R", 2}});
  RandomSource rng(3);
  PlainReadout good =
      alice_extract_answer(StateVector::basis(qr, 1 * 2 + 1), plan, rng);
  CHECK(good.consistent);
  CHECK(good.index == 1);
  CHECK(good.answer == 1);

  PlainReadout bad =
      alice_extract_answer(StateVector::basis(qr, 2 * 2 + 0), plan, rng);
  CHECK_FALSE(bad.consistent);
  CHECK(bad.index == 2);
}

TEST_CASE("superposition test probabilities") {
  QueryPlan plan = basic_plan(2, 3, Scenario::A);
  HonestReference ref = build_honest_reference(plan, {1});
  RegisterLayout qr({Register{"Q", 4}, Register{"R", 2}});

  CHECK(superposition_pass_probability(ref.superposed, ref) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(superposition_pass_probability(ref.plain[0], ref) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(superposition_pass_probability(StateVector::basis(qr, 2 * 2), ref) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Mixture of honest and collapsed replies.
  DensityMatrix mixture = mix(Ensemble({{0.5, to_density(ref.superposed)},
                                        {0.5, to_density(ref.plain[0])}}));
  CHECK(superposition_pass_probability(mixture, ref) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // Sampled test agrees in the extremes.
  RandomSource rng(8);
  CHECK(alice_test_superposition(ref.superposed, ref, rng));
  CHECK_FALSE(alice_test_superposition(StateVector::basis(qr, 2 * 2), ref,
                                       rng));
}

TEST_CASE("communication costs per variant") {
  Database db = Database::random(3, 42);
  auto honest = honest_strategy();
  RandomSource rng(17);

  RunResult basic = run_protocol(db, basic_plan(3, 1, Scenario::A), *honest,
                                 rng);
  CommCost c = comm_cost(basic.transcript);
  CHECK(c.total_qubits == 8);
  CHECK(c.gross_qubits == 16);
  CHECK(c.db_calls == 2);
  CHECK(c.qpq_db_calls == 2);
  CHECK(c.classical_pir_calls == 8);
  CHECK(c.spir_exchange == 8);

  RunResult two = run_protocol(db, two_query_plan(3, 1, 2, 0), *honest, rng);
  CommCost ct = comm_cost(two.transcript);
  CHECK(ct.total_qubits == 12);
  CHECK(ct.gross_qubits == 24);
  CHECK(ct.db_calls == 3);

  Transcript unfinished(3);
  CHECK_THROWS_AS(comm_cost(unfinished), ValidationError);
}

TEST_CASE("malformed replies are flagged as cheating") {
  Database db = Database::random(2, 6);
  MalformedStrategy strategy;
  QueryPlan plan = basic_plan(2, 1, Scenario::A);
  RandomSource rng(4);
  RunResult run = run_protocol(db, plan, strategy, rng);
  CHECK(run.outcome.detected_cheating);
  CHECK_FALSE(run.outcome.test_passed);
  CHECK_FALSE(run.outcome.plain_consistent);
  CHECK(run.outcome.answer == -1);

  ExactRunResult exact = run_protocol_exact(db, plan, strategy);
  CHECK(exact.detection_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.accept_prob == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("database width must match the plan") {
  Database db = Database::random(2, 6);
  auto honest = honest_strategy();
  RandomSource rng(4);
  CHECK_THROWS_AS(run_protocol(db, basic_plan(3, 1, Scenario::A), *honest,
                               rng),
                  ValidationError);
}

TEST_CASE("scenario and variant names") {
  CHECK(to_string(Scenario::A) == "A");
  CHECK(to_string(Scenario::B) == "B");
  CHECK(to_string(Variant::Basic) == "basic");
  CHECK(to_string(Variant::ArbitraryAmplitude) == "arbitrary-amplitude");
  CHECK(to_string(Variant::TwoQuery) == "two-query");
}
