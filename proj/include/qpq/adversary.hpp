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
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qpq/protocol.hpp"
#include "qpq/qram.hpp"
#include "qpq/states.hpp"

namespace qpq {

// Size limits for exact adversary simulation. The joint space Alice + Bob
// is (2N)^2 * ancilla_dim; keeping it at or below 2^17 bounds memory and
// keeps spectral computations fast.
inline constexpr int kMaxAttackWidth = 5;
inline constexpr std::int64_t kMaxAncillaDim = 64;
inline constexpr std::int64_t kMaxJointDim = std::int64_t{1} << 17;

// One classical branch of a measure-and-resend strategy: the probability
// that Bob's measurements take this path, the replies he returns (each on
// registers [Q, R], in send order), and what he keeps.
struct AttackBranch {
  double weight = 0.0;
  std::vector<StateVector> responses;
  std::int64_t record_index = 0;  // flat index into Bob's record space
  std::int64_t learned_index = 0; // Bob's guess of the queried address
};

// Stateful per-run responder for sampled runs of a measure-and-resend
// strategy. respond() consumes the incoming query register (a state on [Q])
// and returns the reply on [Q, R]; finalize() may rewrite earlier replies
// for strategies that repair a blind first answer after the second query
// reveals the address (Alice only examines the replies after the run, so
// the rewrite models Bob holding the physical registers hostage until the
// exchange completes).
class BranchResponder {
 public:
  virtual ~BranchResponder() = default;
  virtual StateVector respond(const StateVector& query, RandomSource& rng) = 0;
  virtual void finalize(std::vector<StateVector>& responses) = 0;
  virtual std::int64_t record_index() const = 0;
  virtual std::int64_t learned_index() const = 0;
};

// A cheating (or honest) Bob. Strategies come in two flavors:
//
//  * unitary strategies act on [Q, R, ancilla B] with one unitary per
//    incoming register and are simulated on the joint space;
//  * branching (measure-and-resend) strategies measure each incoming
//    register and resend fresh states; they are described exactly by
//    enumerate_branches() and sampled through make_responder().
//
// Branching strategies still expose unitaries: the dilation that copies the
// measured address into the ancilla before responding. For the repair
// timing mode the rewrite of an already-delivered reply admits no unitary
// realization, so the exposed dilation is the strict-timing one; exact
// analyses of branching strategies therefore always go through the branch
// enumeration, and the dilation is validated against it where they agree.
class AttackStrategy {
 public:
  virtual ~AttackStrategy() = default;

  virtual std::string name() const = 0;
  virtual bool honest() const { return false; }
  virtual bool branching() const { return false; }

  // Dimension of Bob's private ancilla for width n (1 means no ancilla).
  virtual std::int64_t ancilla_dim(int n) const = 0;

  struct UnitaryPair {
    UnitaryMatrix first;
    UnitaryMatrix second;
  };

  // U1 and U2 on [Q, R, B] for the first and second incoming register,
  // built once per database and cached.
  const UnitaryPair& unitaries(const Database& db) const;
  const UnitaryMatrix& first_unitary(const Database& db) const;
  const UnitaryMatrix& second_unitary(const Database& db) const;

  // Oracle calls consumed per generated reply.
  virtual std::int64_t db_calls_per_reply() const { return 1; }

  // Branching interface; throws ValidationError unless branching().
  virtual std::unique_ptr<BranchResponder> make_responder(
      const Database& db, const QueryPlan& plan) const;
  virtual std::vector<AttackBranch> enumerate_branches(
      const Database& db, const QueryPlan& plan) const;

 protected:
  virtual UnitaryPair build_unitaries(const Database& db) const = 0;

 private:
  struct UnitaryCache;
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const UnitaryCache> cache_;
};

// Honest Bob: the oracle itself, no ancilla.
std::unique_ptr<AttackStrategy> honest_strategy();

// Bob measures every incoming register in the computational basis and
// resends what the measured addresses dictate. The mode sets the timing
// model for the branch where his first measurement returns 0 (the blind
// branch): Strict forces him to answer |0, 0> before seeing the second
// register; Paper lets that answer be repaired into the honest
// superposition once the second measurement reveals the address, which is
// the accounting behind the 1/4 detection figure.
enum class ProjectiveMode { Paper, Strict };
std::unique_ptr<AttackStrategy> projective_both_strategy(ProjectiveMode mode);

// Bob runs the honest oracle, then rotates a fresh ancilla slice by theta
// conditioned on the address register, entangling himself with the query.
// theta in [0, pi/2]; theta = 0 is honest, theta = pi/2 copies the address
// outright.
std::unique_ptr<AttackStrategy> coupling_attack(double theta);

// Arbitrary unitary pair acting on [Q, R, B].
std::unique_ptr<AttackStrategy> custom_unitary_strategy(UnitaryMatrix first,
                                                        UnitaryMatrix second,
                                                        std::int64_t ancilla_dim,
                                                        std::string name);

// Parses "honest", "projective:paper", "projective:strict",
// "coupling:<theta>" (theta in radians).
std::unique_ptr<AttackStrategy> parse_strategy(const std::string& text);

// Exact joint simulation of one (scenario, j) cell of the basic variant:
// Alice's final reduced state rho on [Q1, R1, Q2, R2], Bob's residual
// sigma, and <honest|rho|honest> where |honest> is the ordered pair of
// honest replies built from the true record values.
struct AttackAssessmentEntry {
  Scenario scenario = Scenario::A;
  std::int64_t j = 0;
  DensityMatrix rho;
  DensityMatrix sigma;
  double pass_probability = 0.0;
};

AttackAssessmentEntry simulate_attack_exact(const AttackStrategy& strategy,
                                            const Database& db, std::int64_t j,
                                            Scenario scenario);

// Both scenarios for every j in 1..N-1.
struct AttackAssessment {
  std::vector<AttackAssessmentEntry> entries;
};

AttackAssessment assess_attack_exact(const AttackStrategy& strategy,
                                     const Database& db);

// One sampled protocol run under `plan` with Bob playing `strategy`.
ProtocolOutcome sample_attack_run(const AttackStrategy& strategy,
                                  const Database& db, const QueryPlan& plan,
                                  RandomSource& rng);

namespace detail {

inline constexpr unsigned kWantSigma = 1;
inline constexpr unsigned kWantRho = 2;

struct AttackCellResult {
  double pass_probability = 0.0;
  std::unique_ptr<DensityMatrix> sigma;
  std::unique_ptr<DensityMatrix> rho;
};

// Core of the exact analysis. Branching strategies are evaluated by branch
// enumeration unless force_dilation is set; everything else runs on the
// joint space.
AttackCellResult evaluate_attack_cell(const AttackStrategy& strategy,
                                      const Database& db, std::int64_t j,
                                      Scenario scenario, unsigned wants,
                                      bool force_dilation = false);

// The basic-variant plan for one assessment cell.
QueryPlan attack_plan(int n, std::int64_t j, Scenario scenario);

}  // namespace detail

}  // namespace qpq
