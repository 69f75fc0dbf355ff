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

#include "qpq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpq/adversary.hpp"

namespace qpq {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

// Outcome weights below this are treated as unreachable when enumerating
// measurement results exactly.
constexpr double kWeightFloor = 1e-15;

RegisterLayout reply_layout(std::int64_t domain) {
  return RegisterLayout(
      {Register{"Q", domain}, Register{"R", 2}});
}

bool is_unit(double x) { return std::abs(x - 1.0) <= kStructuralTol; }

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Basic: return "basic";
    case Variant::ArbitraryAmplitude: return "arbitrary-amplitude";
    case Variant::TwoQuery: return "two-query";
  }
  throw ValidationError("unknown variant");
}

std::string to_string(Scenario s) {
  return s == Scenario::A ? "A" : "B";
}

// ---------------------------------------------------------------------------
// QueryPlan

void QueryPlan::validate() const {
  if (n < 1 || n > 62) {
    throw ValidationError("plan width n must lie in [1, 62]");
  }
  const std::int64_t domain = domain_size();
  if (j < 1 || j > domain - 1) {
    throw ValidationError("query index j = " + std::to_string(j) +
                          " must lie in [1, " + std::to_string(domain - 1) +
                          "]");
  }
  if (variant == Variant::TwoQuery) {
    if (reference < 1 || reference > domain - 1 || reference == j) {
      throw ValidationError("two-query partner k = " +
                            std::to_string(reference) +
                            " must lie in [1, " + std::to_string(domain - 1) +
                            "] and differ from j");
    }
  } else if (reference != 0) {
    throw ValidationError("reference index must be 0 outside the two-query "
                          "variant");
  }
  if (!is_unit(std::norm(alpha) + std::norm(beta))) {
    throw ValidationError("superposition amplitudes must satisfy |alpha|^2 + "
                          "|beta|^2 = 1");
  }
  if (variant == Variant::Basic &&
      (std::abs(alpha - Complex(kInvSqrt2, 0.0)) > kStructuralTol ||
       std::abs(beta - Complex(kInvSqrt2, 0.0)) > kStructuralTol)) {
    throw ValidationError("basic variant fixes alpha = beta = 1/sqrt(2)");
  }
  if (superposed_slot < 0 || superposed_slot >= send_count()) {
    throw ValidationError("superposed register slot out of range");
  }
  const bool super_first = superposed_slot == 0;
  if ((scenario == Scenario::B) != super_first) {
    throw ValidationError("scenario label does not match the superposed "
                          "register's slot");
  }
}

QueryPlan plan_query(std::int64_t j, Variant variant, int n, RandomSource& rng,
                     std::optional<Complex> alpha, std::optional<Complex> beta,
                     std::optional<std::int64_t> k) {
  QueryPlan plan;
  plan.n = n;
  plan.j = j;
  plan.variant = variant;
  if (variant == Variant::ArbitraryAmplitude) {
    plan.alpha = alpha.value_or(Complex(kInvSqrt2, 0.0));
    plan.beta = beta.value_or(Complex(kInvSqrt2, 0.0));
  } else {
    if (alpha || beta) {
      throw ValidationError("amplitudes can only be chosen for the "
                            "arbitrary-amplitude variant");
    }
    plan.alpha = Complex(kInvSqrt2, 0.0);
    plan.beta = Complex(kInvSqrt2, 0.0);
  }

  if (variant == Variant::TwoQuery) {
    const std::int64_t domain = plan.domain_size();
    if (k) {
      plan.reference = *k;
    } else {
      // Uniform over {1..N-1} minus j, by skipping j in a shifted draw.
      if (domain < 3) {
        throw ValidationError("two-query variant needs at least two "
                              "admissible indices (n >= 2)");
      }
      std::int64_t draw = rng.uniform_int(1, domain - 2);
      plan.reference = draw < j ? draw : draw + 1;
    }
    plan.superposed_slot = static_cast<int>(rng.uniform_int(0, 2));
    plan.scenario = plan.superposed_slot == 0 ? Scenario::B : Scenario::A;
  } else {
    if (k) {
      throw ValidationError("partner index k only applies to the two-query "
                            "variant");
    }
    plan.scenario = rng.uniform_int(0, 1) == 0 ? Scenario::A : Scenario::B;
    plan.superposed_slot = plan.scenario == Scenario::A ? 1 : 0;
  }
  plan.seed = rng.next_u64();
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------------------
// Preparation

std::vector<StateVector> alice_prepare(const QueryPlan& plan, int n) {
  plan.validate();
  if (plan.n != n) {
    throw ValidationError("plan was made for width " + std::to_string(plan.n) +
                          ", not " + std::to_string(n));
  }
  const RegisterLayout q = RegisterLayout::single("Q", plan.domain_size());

  std::vector<StateVector> plain;
  plain.push_back(StateVector::basis(q, plan.j));
  StateVector superposed = StateVector::basis(q, 0);
  if (plan.variant == Variant::TwoQuery) {
    plain.push_back(StateVector::basis(q, plan.reference));
    superposed = StateVector::superposition(
        q, {{plan.j, Complex(kInvSqrt2, 0.0)},
            {plan.reference, Complex(kInvSqrt2, 0.0)}});
  } else {
    std::vector<std::pair<std::int64_t, Complex>> terms;
    if (std::abs(plan.alpha) > 0.0) terms.emplace_back(plan.j, plan.alpha);
    if (std::abs(plan.beta) > 0.0) terms.emplace_back(0, plan.beta);
    superposed = StateVector::superposition(q, terms);
  }

  std::vector<StateVector> ordered;
  std::size_t next_plain = 0;
  for (int slot = 0; slot < plan.send_count(); ++slot) {
    if (slot == plan.superposed_slot) {
      ordered.push_back(superposed);
    } else {
      ordered.push_back(plain[next_plain++]);
    }
  }
  return ordered;
}

HonestReference build_honest_reference(const QueryPlan& plan,
                                       const std::vector<int>& answers) {
  plan.validate();
  const std::size_t plain_count = plan.variant == Variant::TwoQuery ? 2 : 1;
  if (answers.size() != plain_count) {
    throw ValidationError("expected " + std::to_string(plain_count) +
                          " answer bit(s), got " +
                          std::to_string(answers.size()));
  }
  for (int a : answers) {
    if (a != 0 && a != 1) {
      throw ValidationError("answer bits must be 0 or 1");
    }
  }
  const RegisterLayout qr = reply_layout(plan.domain_size());
  std::vector<StateVector> plain;
  plain.push_back(StateVector::basis(qr, plan.j * 2 + answers[0]));

  std::vector<std::pair<std::int64_t, Complex>> terms;
  if (plan.variant == Variant::TwoQuery) {
    plain.push_back(StateVector::basis(qr, plan.reference * 2 + answers[1]));
    terms = {{plan.j * 2 + answers[0], Complex(kInvSqrt2, 0.0)},
             {plan.reference * 2 + answers[1], Complex(kInvSqrt2, 0.0)}};
  } else {
    if (std::abs(plan.alpha) > 0.0) {
      terms.emplace_back(plan.j * 2 + answers[0], plan.alpha);
    }
    if (std::abs(plan.beta) > 0.0) {
      terms.emplace_back(0, plan.beta);
    }
  }
  return HonestReference{std::move(plain),
                         StateVector::superposition(qr, terms)};
}

// ---------------------------------------------------------------------------
// Transcript

Transcript::Transcript(int n) : n_(n) {
  if (n < 1) {
    throw ValidationError("transcript width must be positive");
  }
}

void Transcript::record_send(std::vector<Register> registers) {
  if (finalized_) {
    throw ValidationError("transcript is already finalized");
  }
  if (awaiting_reply_) {
    throw ValidationError("cannot send the next register before the previous "
                          "reply is recorded");
  }
  messages_.push_back(TranscriptMessage{Direction::ToBob, std::move(registers),
                                        n_ + 1});
  awaiting_reply_ = true;
}

void Transcript::record_reply(std::vector<Register> registers) {
  if (finalized_) {
    throw ValidationError("transcript is already finalized");
  }
  if (!awaiting_reply_) {
    throw ValidationError("no outstanding query to reply to");
  }
  messages_.push_back(TranscriptMessage{Direction::ToAlice,
                                        std::move(registers), n_ + 1});
  awaiting_reply_ = false;
}

void Transcript::add_db_calls(std::int64_t calls) {
  if (finalized_) {
    throw ValidationError("transcript is already finalized");
  }
  db_calls_ += calls;
}

void Transcript::finalize() {
  if (awaiting_reply_) {
    throw ValidationError("cannot finalize with an unanswered query");
  }
  finalized_ = true;
}

void Transcript::require_finalized(const char* what) const {
  if (!finalized_) {
    throw ValidationError(std::string(what) +
                          " requires a finalized transcript");
  }
}

std::int64_t Transcript::total_qubits() const {
  require_finalized("total_qubits");
  std::int64_t sends = 0;
  for (const auto& m : messages_) {
    if (m.direction == Direction::ToBob) ++sends;
  }
  return sends * (n_ + 1);
}

std::int64_t Transcript::gross_qubits() const {
  require_finalized("gross_qubits");
  std::int64_t sum = 0;
  for (const auto& m : messages_) sum += m.qubit_count;
  return sum;
}

std::int64_t Transcript::db_calls() const {
  require_finalized("db_calls");
  return db_calls_;
}

// ---------------------------------------------------------------------------
// Alice's readouts

PlainReadout alice_extract_answer(const StateVector& response,
                                  const QueryPlan& plan, RandomSource& rng) {
  auto q_result = measure_computational(response, "Q", rng);
  auto r_result = measure_computational(q_result.collapsed, "R", rng);
  return PlainReadout{q_result.outcome, static_cast<int>(r_result.outcome),
                      q_result.outcome == plan.j};
}

double superposition_pass_probability(const StateVector& response,
                                      const HonestReference& reference) {
  return std::norm(overlap(reference.superposed, response));
}

double superposition_pass_probability(const DensityMatrix& response,
                                      const HonestReference& reference) {
  const StateVector& psi = reference.superposed;
  if (!(response.layout() == psi.layout())) {
    throw DimensionError("response layout " + response.layout().describe() +
                         " does not match the reference layout " +
                         psi.layout().describe());
  }
  const Complex value =
      (psi.amplitudes().adjoint() * response.matrix() * psi.amplitudes())(0);
  return std::clamp(value.real(), 0.0, 1.0);
}

bool alice_test_superposition(const StateVector& response,
                              const HonestReference& reference,
                              RandomSource& rng) {
  return rng.bernoulli(superposition_pass_probability(response, reference));
}

// ---------------------------------------------------------------------------
// Session engine

namespace {

struct SessionSetup {
  std::vector<StateVector> queries;       // in send order, each on [Q]
  std::vector<std::size_t> plain_slots;   // send indices of plain queries
  std::vector<std::int64_t> plain_expect; // expected Q readouts, send order
};

SessionSetup make_setup(const Database& db, const QueryPlan& plan) {
  if (db.width() != plan.n) {
    throw ValidationError("database width " + std::to_string(db.width()) +
                          " does not match plan width " +
                          std::to_string(plan.n));
  }
  SessionSetup setup;
  setup.queries = alice_prepare(plan, plan.n);
  for (std::size_t slot = 0; slot < setup.queries.size(); ++slot) {
    if (static_cast<int>(slot) == plan.superposed_slot) continue;
    setup.plain_slots.push_back(slot);
    setup.plain_expect.push_back(setup.plain_slots.size() == 1
                                     ? plan.j
                                     : plan.reference);
  }
  return setup;
}

std::vector<Register> send_registers(int send_index, std::int64_t domain) {
  const std::string tag = std::to_string(send_index + 1);
  return {Register{"Q" + tag, domain}};
}

std::vector<Register> reply_registers(int send_index, std::int64_t domain) {
  const std::string tag = std::to_string(send_index + 1);
  return {Register{"Q" + tag, domain}, Register{"R" + tag, 2}};
}

bool reply_shape_ok(const StateVector& reply, std::int64_t domain) {
  return reply.layout() == reply_layout(domain);
}

ProtocolOutcome violation_outcome() {
  // A reply that does not even carry the agreed registers is maximal
  // evidence of cheating; Alice aborts her readout.
  return ProtocolOutcome{-1, false, false, true};
}

// Runs the message loop for strategies whose replies stay separable across
// messages (the honest oracle and measure-and-resend strategies), returning
// the delivered replies.
struct ProductSession {
  std::vector<StateVector> responses;
  Transcript transcript;
  bool shape_violation = false;
};

ProductSession run_product_session(const Database& db, const QueryPlan& plan,
                                   const AttackStrategy& strategy,
                                   RandomSource& rng) {
  const SessionSetup setup = make_setup(db, plan);
  const std::int64_t domain = plan.domain_size();
  ProductSession session{{}, Transcript(plan.n), false};

  std::unique_ptr<BranchResponder> responder;
  if (strategy.branching()) {
    responder = strategy.make_responder(db, plan);
  }

  for (std::size_t slot = 0; slot < setup.queries.size(); ++slot) {
    session.transcript.record_send(
        send_registers(static_cast<int>(slot), domain));
    StateVector reply = responder
                            ? responder->respond(setup.queries[slot], rng)
                            : oracle_direct(tensor(setup.queries[slot],
                                                   StateVector::basis(
                                                       RegisterLayout::single(
                                                           "R", 2),
                                                       0)),
                                            db);
    session.transcript.add_db_calls(strategy.db_calls_per_reply());
    session.transcript.record_reply(
        reply_registers(static_cast<int>(slot), domain));
    if (!reply_shape_ok(reply, domain)) {
      session.shape_violation = true;
    }
    session.responses.push_back(std::move(reply));
  }
  if (responder) {
    responder->finalize(session.responses);
    for (const auto& reply : session.responses) {
      if (!reply_shape_ok(reply, domain)) session.shape_violation = true;
    }
  }
  session.transcript.finalize();
  return session;
}

ProtocolOutcome read_out_product(const QueryPlan& plan, const Database& db,
                                 const SessionSetup& setup,
                                 const std::vector<StateVector>& responses,
                                 RandomSource& rng) {
  (void)db;
  std::vector<int> answers;
  bool consistent = true;
  for (std::size_t p = 0; p < setup.plain_slots.size(); ++p) {
    const StateVector& reply = responses[setup.plain_slots[p]];
    auto q_result = measure_computational(reply, "Q", rng);
    auto r_result = measure_computational(q_result.collapsed, "R", rng);
    answers.push_back(static_cast<int>(r_result.outcome));
    consistent = consistent && q_result.outcome == setup.plain_expect[p];
  }
  const HonestReference reference = build_honest_reference(plan, answers);
  const bool passed = alice_test_superposition(
      responses[static_cast<std::size_t>(plan.superposed_slot)], reference,
      rng);
  return ProtocolOutcome{answers[0], consistent, passed,
                         !(passed && consistent)};
}

// Joint-space session for unitary strategies: the attack may entangle the
// two replies and Bob's ancilla, so the whole system evolves as one state.
struct JointSession {
  StateVector state;
  Transcript transcript;
};

void check_joint_caps(const QueryPlan& plan, const AttackStrategy& strategy) {
  if (plan.variant == Variant::TwoQuery) {
    throw ValidationError("adversarial strategies are only modeled for the "
                          "two-register variants");
  }
  if (plan.n > kMaxAttackWidth) {
    throw CapExceededError("joint attack simulation is limited to n <= " +
                           std::to_string(kMaxAttackWidth) + "; address " +
                           "register dimension " +
                           std::to_string(plan.domain_size()) +
                           " exceeds it");
  }
  const std::int64_t ancilla = strategy.ancilla_dim(plan.n);
  if (ancilla < 1 || ancilla > kMaxAncillaDim) {
    throw CapExceededError("ancilla dimension " + std::to_string(ancilla) +
                           " exceeds the cap " +
                           std::to_string(kMaxAncillaDim));
  }
  const std::int64_t joint =
      plan.domain_size() * 2 * plan.domain_size() * 2 * ancilla;
  if (joint > kMaxJointDim) {
    throw CapExceededError("joint space dimension " + std::to_string(joint) +
                           " exceeds the cap " + std::to_string(kMaxJointDim));
  }
}

JointSession run_joint_session(const Database& db, const QueryPlan& plan,
                               const AttackStrategy& strategy) {
  check_joint_caps(plan, strategy);
  const SessionSetup setup = make_setup(db, plan);
  const std::int64_t domain = plan.domain_size();
  const std::int64_t ancilla = strategy.ancilla_dim(plan.n);

  const RegisterLayout r_layout = RegisterLayout::single("R", 2);
  StateVector state = tensor(setup.queries[0].renamed("Q", "Q1"),
                             StateVector::basis(r_layout, 0).renamed("R", "R1"));
  state = tensor(state, setup.queries[1].renamed("Q", "Q2"));
  state = tensor(state, StateVector::basis(r_layout, 0).renamed("R", "R2"));
  state = tensor(state,
                 StateVector::basis(RegisterLayout::single("B", ancilla), 0));

  Transcript transcript(plan.n);
  const UnitaryMatrix& u1 = strategy.first_unitary(db);
  const UnitaryMatrix& u2 = strategy.second_unitary(db);
  const std::int64_t expected_dim = domain * 2 * ancilla;
  if (u1.dim() != expected_dim || u2.dim() != expected_dim) {
    throw DimensionError("strategy unitaries must act on Q x R x B (dim " +
                         std::to_string(expected_dim) + ")");
  }

  transcript.record_send(send_registers(0, domain));
  state = apply_unitary(state, u1, {"Q1", "R1", "B"});
  transcript.add_db_calls(strategy.db_calls_per_reply());
  transcript.record_reply(reply_registers(0, domain));

  transcript.record_send(send_registers(1, domain));
  state = apply_unitary(state, u2, {"Q2", "R2", "B"});
  transcript.add_db_calls(strategy.db_calls_per_reply());
  transcript.record_reply(reply_registers(1, domain));

  transcript.finalize();
  return JointSession{std::move(state), std::move(transcript)};
}

ProtocolOutcome read_out_joint(const QueryPlan& plan,
                               const SessionSetup& setup, StateVector state,
                               RandomSource& rng) {
  const std::size_t plain_slot = setup.plain_slots[0];
  const std::string q_label = "Q" + std::to_string(plain_slot + 1);
  const std::string r_label = "R" + std::to_string(plain_slot + 1);
  auto q_result = measure_computational(state, q_label, rng);
  auto r_result = measure_computational(q_result.collapsed, r_label, rng);
  const bool consistent = q_result.outcome == setup.plain_expect[0];
  const int answer = static_cast<int>(r_result.outcome);

  const HonestReference reference = build_honest_reference(plan, {answer});
  const std::string sq = "Q" + std::to_string(plan.superposed_slot + 1);
  const std::string sr = "R" + std::to_string(plan.superposed_slot + 1);
  const double pass_p = projection_probability(r_result.collapsed, {sq, sr},
                                               reference.superposed);
  const bool passed = rng.bernoulli(pass_p);
  return ProtocolOutcome{answer, consistent, passed, !(passed && consistent)};
}

}  // namespace

RunResult run_protocol(const Database& db, const QueryPlan& plan,
                       const AttackStrategy& strategy, RandomSource& rng) {
  if (strategy.honest() || strategy.branching()) {
    ProductSession session = run_product_session(db, plan, strategy, rng);
    if (session.shape_violation) {
      return RunResult{violation_outcome(), std::move(session.transcript)};
    }
    const SessionSetup setup = make_setup(db, plan);
    ProtocolOutcome outcome =
        read_out_product(plan, db, setup, session.responses, rng);
    return RunResult{outcome, std::move(session.transcript)};
  }
  JointSession session = run_joint_session(db, plan, strategy);
  const SessionSetup setup = make_setup(db, plan);
  ProtocolOutcome outcome =
      read_out_joint(plan, setup, std::move(session.state), rng);
  return RunResult{outcome, std::move(session.transcript)};
}

// ---------------------------------------------------------------------------
// Exact twin

namespace {

struct ExactAccumulator {
  double answer_correct = 0.0;
  double consistent = 0.0;
  double test_pass = 0.0;
  double accept = 0.0;

  void add(double weight, bool consistent_here, double pass_p,
           bool answer_correct_here) {
    if (weight <= kWeightFloor) return;
    test_pass += weight * pass_p;
    if (consistent_here) {
      consistent += weight;
      accept += weight * pass_p;
    }
    if (answer_correct_here) answer_correct += weight;
  }
};

// Enumerates the joint (Q, R) readout of pure replies on [Q, R]; each entry
// is (flat index q*2+r, probability).
std::vector<std::pair<std::int64_t, double>> reply_outcomes(
    const StateVector& reply) {
  std::vector<std::pair<std::int64_t, double>> outcomes;
  for (std::int64_t i = 0; i < reply.dim(); ++i) {
    const double p = std::norm(reply.amplitudes()(i));
    if (p > kWeightFloor) outcomes.emplace_back(i, p);
  }
  return outcomes;
}

void accumulate_product_branch(const QueryPlan& plan, const Database& db,
                               const SessionSetup& setup, double branch_weight,
                               const std::vector<StateVector>& responses,
                               ExactAccumulator& acc) {
  const std::int64_t domain = plan.domain_size();
  for (const auto& reply : responses) {
    if (!reply_shape_ok(reply, domain)) {
      // Malformed replies are flagged with certainty; nothing passes.
      acc.add(branch_weight, false, 0.0, false);
      return;
    }
  }
  const StateVector& super_reply =
      responses[static_cast<std::size_t>(plan.superposed_slot)];

  // Walk the product distribution of the plain readouts.
  std::vector<std::vector<std::pair<std::int64_t, double>>> outcome_sets;
  for (std::size_t slot : setup.plain_slots) {
    outcome_sets.push_back(reply_outcomes(responses[slot]));
  }
  std::vector<std::size_t> pick(outcome_sets.size(), 0);
  while (true) {
    double weight = branch_weight;
    bool consistent = true;
    std::vector<int> answers;
    for (std::size_t p = 0; p < outcome_sets.size(); ++p) {
      const auto& [flat, prob] = outcome_sets[p][pick[p]];
      weight *= prob;
      consistent = consistent && (flat / 2) == setup.plain_expect[p];
      answers.push_back(static_cast<int>(flat % 2));
    }
    if (weight > kWeightFloor) {
      const HonestReference reference = build_honest_reference(plan, answers);
      const double pass_p =
          superposition_pass_probability(super_reply, reference);
      acc.add(weight, consistent, pass_p,
              answers[0] == db.record(plan.j));
    }
    std::size_t level = 0;
    while (level < pick.size() && ++pick[level] == outcome_sets[level].size()) {
      pick[level++] = 0;
    }
    if (level == pick.size()) break;
  }
}

}  // namespace

ExactRunResult run_protocol_exact(const Database& db, const QueryPlan& plan,
                                  const AttackStrategy& strategy) {
  ExactAccumulator acc;
  Transcript transcript(plan.n);

  if (strategy.honest() || strategy.branching()) {
    std::vector<AttackBranch> branches;
    if (strategy.branching()) {
      branches = strategy.enumerate_branches(db, plan);
    } else {
      const SessionSetup setup = make_setup(db, plan);
      AttackBranch honest_branch;
      honest_branch.weight = 1.0;
      for (const auto& query : setup.queries) {
        honest_branch.responses.push_back(oracle_direct(
            tensor(query,
                   StateVector::basis(RegisterLayout::single("R", 2), 0)),
            db));
      }
      branches.push_back(std::move(honest_branch));
    }

    // The transcript is the same for every branch; replay it once.
    const SessionSetup setup = make_setup(db, plan);
    const std::int64_t domain = plan.domain_size();
    for (std::size_t slot = 0; slot < setup.queries.size(); ++slot) {
      transcript.record_send(send_registers(static_cast<int>(slot), domain));
      transcript.add_db_calls(strategy.db_calls_per_reply());
      transcript.record_reply(reply_registers(static_cast<int>(slot), domain));
    }
    transcript.finalize();

    double total_weight = 0.0;
    for (const auto& branch : branches) total_weight += branch.weight;
    if (std::abs(total_weight - 1.0) > 1e-9) {
      throw Error("strategy branch weights sum to " +
                  std::to_string(total_weight) + ", not 1");
    }
    for (const auto& branch : branches) {
      accumulate_product_branch(plan, db, setup, branch.weight,
                                branch.responses, acc);
    }
  } else {
    JointSession session = run_joint_session(db, plan, strategy);
    transcript = std::move(session.transcript);
    const SessionSetup setup = make_setup(db, plan);
    const std::size_t plain_slot = setup.plain_slots[0];
    const std::string q_label = "Q" + std::to_string(plain_slot + 1);
    const std::string r_label = "R" + std::to_string(plain_slot + 1);
    const std::string sq = "Q" + std::to_string(plan.superposed_slot + 1);
    const std::string sr = "R" + std::to_string(plan.superposed_slot + 1);

    const auto q_probs = outcome_distribution(session.state, q_label);
    for (std::int64_t q = 0; q < static_cast<std::int64_t>(q_probs.size());
         ++q) {
      if (q_probs[static_cast<std::size_t>(q)] <= kWeightFloor) continue;
      auto [after_q, q_mass] = collapse_onto(session.state, q_label, q);
      const auto r_probs = outcome_distribution(after_q, r_label);
      for (int r = 0; r < 2; ++r) {
        if (r_probs[static_cast<std::size_t>(r)] <= kWeightFloor) continue;
        auto [leaf, r_mass] = collapse_onto(after_q, r_label, r);
        const double weight = q_mass * r_mass;
        const HonestReference reference = build_honest_reference(plan, {r});
        const double pass_p =
            projection_probability(leaf, {sq, sr}, reference.superposed);
        acc.add(weight, q == setup.plain_expect[0], pass_p,
                r == db.record(plan.j));
      }
    }
  }

  // Accumulated weights can drift past the endpoints by a few ulps.
  const auto clamp01 = [](double p) { return std::clamp(p, 0.0, 1.0); };
  ExactRunResult result{std::move(transcript), clamp01(acc.answer_correct),
                        clamp01(acc.consistent), clamp01(acc.test_pass),
                        clamp01(acc.accept), clamp01(1.0 - acc.accept)};
  return result;
}

// ---------------------------------------------------------------------------
// Costs

CommCost comm_cost(const Transcript& transcript) {
  if (!transcript.finalized()) {
    throw ValidationError("comm_cost requires a finalized transcript");
  }
  const std::int64_t domain = std::int64_t{1} << transcript.n();
  CommCost cost;
  cost.total_qubits = transcript.total_qubits();
  cost.gross_qubits = transcript.gross_qubits();
  cost.db_calls = transcript.db_calls();
  cost.qpq_db_calls = 2;
  cost.classical_pir_calls = domain;
  cost.spir_exchange = domain;
  return cost;
}

}  // namespace qpq
