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
#include <vector>

#include "qpq/qram.hpp"
#include "qpq/states.hpp"

namespace qpq {

class AttackStrategy;

// Which registers Alice sends, and how the superposed one is built.
enum class Variant {
  Basic,               // plain |j> and (|j> + |0>)/sqrt(2)
  ArbitraryAmplitude,  // plain |j> and alpha|j> + beta|0>
  TwoQuery,            // plain |j>, plain |k>, and (|j> + |k>)/sqrt(2)
};

// Send order of the two-register variants. Scenario A sends the plain query
// first; scenario B sends the superposed query first. For the two-query
// variant the label is derived from the superposed register's slot: B when
// it goes first, A otherwise.
enum class Scenario { A, B };

std::string to_string(Variant v);
std::string to_string(Scenario s);

// Everything Alice fixes before the first register leaves her lab.
struct QueryPlan {
  int n = 0;                  // address width, N = 2^n
  std::int64_t j = 0;         // queried record, 1 <= j <= N-1
  Variant variant = Variant::Basic;
  std::int64_t reference = 0; // r = 0, or k for the two-query variant
  Complex alpha{0.0, 0.0};
  Complex beta{0.0, 0.0};
  Scenario scenario = Scenario::A;
  int superposed_slot = 0;    // send index of the superposed register
  std::uint64_t seed = 0;     // drawn from the planning rng, recorded for replay

  int send_count() const { return variant == Variant::TwoQuery ? 3 : 2; }
  std::int64_t domain_size() const { return std::int64_t{1} << n; }
  void validate() const;
};

// Draws the random choices of one protocol run plus a replay seed. Draw
// order from `rng` is fixed for reproducibility: the partner index k (two-
// query variant, unless pinned), then the scenario (or the superposed
// register's slot for two-query), then the replay seed.
QueryPlan plan_query(std::int64_t j, Variant variant, int n, RandomSource& rng,
                     std::optional<Complex> alpha = std::nullopt,
                     std::optional<Complex> beta = std::nullopt,
                     std::optional<std::int64_t> k = std::nullopt);

// The query registers in send order, each a state on one register "Q" of
// dimension N.
std::vector<StateVector> alice_prepare(const QueryPlan& plan, int n);

// What Bob's honest replies should look like, on registers [Q, R]. Alice
// can only build this after reading the plain replies, because the
// superposed reference involves the record values.
struct HonestReference {
  std::vector<StateVector> plain;  // per plain query, in send order
  StateVector superposed;
};

// answers[i] is the record bit for the i-th plain query in send order
// (one entry for basic/arbitrary, two for two-query).
HonestReference build_honest_reference(const QueryPlan& plan,
                                       const std::vector<int>& answers);

enum class Direction { ToBob, ToAlice };

struct TranscriptMessage {
  Direction direction = Direction::ToBob;
  std::vector<Register> registers;
  std::int64_t qubit_count = 0;  // n + 1 per message by convention
};

// Message ledger of one run. Sends and replies must alternate, starting
// with a send; the cost accessors are only available once the transcript is
// finalized.
class Transcript {
 public:
  explicit Transcript(int n);

  void record_send(std::vector<Register> registers);
  void record_reply(std::vector<Register> registers);
  void add_db_calls(std::int64_t calls);
  void finalize();

  int n() const { return n_; }
  bool finalized() const { return finalized_; }
  const std::vector<TranscriptMessage>& messages() const { return messages_; }

  // Qubits Alice committed to the channel: sends * (n + 1).
  std::int64_t total_qubits() const;
  // Qubits moved in both directions: 2 * sends * (n + 1).
  std::int64_t gross_qubits() const;
  std::int64_t db_calls() const;

 private:
  void require_finalized(const char* what) const;

  int n_ = 0;
  bool finalized_ = false;
  bool awaiting_reply_ = false;
  std::int64_t db_calls_ = 0;
  std::vector<TranscriptMessage> messages_;
};

struct ProtocolOutcome {
  int answer = -1;                     // recovered record bit
  bool plain_consistent = false;       // plain replies carried the queried indices
  bool test_passed = false;            // superposition test accepted
  bool detected_cheating = false;      // NOT (test_passed AND plain_consistent)
};

struct RunResult {
  ProtocolOutcome outcome;
  Transcript transcript;
};

// One sampled protocol run against the given responder strategy. All
// randomness (measurement outcomes, strategy-internal sampling) comes from
// `rng`.
RunResult run_protocol(const Database& db, const QueryPlan& plan,
                       const AttackStrategy& strategy, RandomSource& rng);

// Exact distribution of the same run: probabilities instead of samples.
// accept_prob is P(test passes AND plain replies consistent); Alice flags
// cheating with probability 1 - accept_prob.
struct ExactRunResult {
  Transcript transcript;
  double answer_correct_prob = 0.0;
  double plain_consistent_prob = 0.0;
  double test_pass_prob = 0.0;
  double accept_prob = 0.0;
  double detection_prob = 0.0;
};

ExactRunResult run_protocol_exact(const Database& db, const QueryPlan& plan,
                                  const AttackStrategy& strategy);

// Reads one plain reply on registers [Q, R]: measures Q (checking it still
// holds plan.j) and R (the record bit).
struct PlainReadout {
  std::int64_t index = 0;
  int answer = 0;
  bool consistent = false;
};

PlainReadout alice_extract_answer(const StateVector& response,
                                  const QueryPlan& plan, RandomSource& rng);

// Projective test of the superposed reply against the honest reference.
// Returns the sampled accept/reject; the _probability forms expose the
// exact acceptance chance.
bool alice_test_superposition(const StateVector& response,
                              const HonestReference& reference,
                              RandomSource& rng);
double superposition_pass_probability(const StateVector& response,
                                      const HonestReference& reference);
double superposition_pass_probability(const DensityMatrix& response,
                                      const HonestReference& reference);

// Communication and query costs of a finished run, next to the classical
// baselines for the same database size.
struct CommCost {
  std::int64_t total_qubits = 0;        // sends * (n + 1)
  std::int64_t gross_qubits = 0;        // both directions: 2 * sends * (n + 1)
  std::int64_t db_calls = 0;            // oracle uses in this run
  std::int64_t qpq_db_calls = 0;        // protocol constant: 2 per basic use
  std::int64_t classical_pir_calls = 0; // N records touched per classical query
  std::int64_t spir_exchange = 0;       // N, symmetric PIR ships the database
};

CommCost comm_cost(const Transcript& transcript);

}  // namespace qpq
