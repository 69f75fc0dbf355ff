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

#include "qpq/adversary.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace qpq {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

RegisterLayout qr_layout(std::int64_t domain) {
  return RegisterLayout({Register{"Q", domain}, Register{"R", 2}});
}

StateVector basis_qr(std::int64_t domain, std::int64_t q, std::int64_t r) {
  return StateVector::basis(qr_layout(domain), q * 2 + r);
}

// The honest superposed reply (|w, A_w> + |0, 0>)/sqrt(2) for address w.
StateVector repair_state(const Database& db, std::int64_t w) {
  return StateVector::superposition(
      qr_layout(db.size()),
      {{w * 2 + db.record(w), Complex(kInvSqrt2, 0.0)},
       {0, Complex(kInvSqrt2, 0.0)}});
}

// Any unitary W with W e_source = target (used to complete per-branch
// response preparation into a full unitary).
Eigen::MatrixXcd unitary_sending(std::int64_t source,
                                 const Eigen::VectorXcd& target) {
  const auto dim = target.size();
  const Complex ts = target(source);
  const double mag = std::abs(ts);
  const Complex phase = mag > 0.0 ? ts / mag : Complex(1.0, 0.0);
  // Rotate the target so its source component is real; then a Householder
  // reflection swaps it with e_source, and the phase comes back as a global
  // factor.
  Eigen::VectorXcd aligned = target / phase;
  Eigen::VectorXcd v = -aligned;
  v(source) += 1.0;
  const double vnorm2 = v.squaredNorm();
  Eigen::MatrixXcd w;
  if (vnorm2 < 1e-28) {
    w = Eigen::MatrixXcd::Identity(dim, dim);
  } else {
    w = Eigen::MatrixXcd::Identity(dim, dim) -
        (2.0 / vnorm2) * (v * v.adjoint());
  }
  return phase * w;
}

// Permutation image of the oracle on [Q, R] (flat index q*2 + r).
std::vector<std::int64_t> oracle_image(const Database& db) {
  std::vector<std::int64_t> image(static_cast<std::size_t>(db.size() * 2));
  for (std::int64_t q = 0; q < db.size(); ++q) {
    for (std::int64_t r = 0; r < 2; ++r) {
      image[static_cast<std::size_t>(q * 2 + r)] = q * 2 + (r ^ db.record(q));
    }
  }
  return image;
}

void check_two_register_plan(const QueryPlan& plan) {
  if (plan.variant == Variant::TwoQuery) {
    throw ValidationError("adversarial strategies are only modeled for the "
                          "two-register variants");
  }
}

// ---------------------------------------------------------------------------
// Honest

class HonestStrategy final : public AttackStrategy {
 public:
  std::string name() const override { return "honest"; }
  bool honest() const override { return true; }
  std::int64_t ancilla_dim(int) const override { return 1; }

 protected:
  UnitaryPair build_unitaries(const Database& db) const override {
    UnitaryMatrix oracle = UnitaryMatrix::permutation(oracle_image(db));
    return UnitaryPair{oracle, oracle};
  }
};

// ---------------------------------------------------------------------------
// Projective double measurement

class ProjectiveResponder final : public BranchResponder {
 public:
  ProjectiveResponder(const Database& db, ProjectiveMode mode)
      : db_(&db), mode_(mode) {}

  StateVector respond(const StateVector& query, RandomSource& rng) override {
    if (seen_ >= 2) {
      throw ValidationError("projective responder handles two messages");
    }
    const std::int64_t w = measure_computational(query, "Q", rng).outcome;
    (seen_ == 0 ? w1_ : w2_) = w;
    ++seen_;
    if (w != 0) {
      return basis_qr(db_->size(), w, db_->record(w));
    }
    if (seen_ == 2 && w1_ != 0) {
      // Second message read 0; the first already revealed the address, so
      // the honest-looking superposition can be prepared outright.
      return repair_state(*db_, w1_);
    }
    return basis_qr(db_->size(), 0, 0);
  }

  void finalize(std::vector<StateVector>& responses) override {
    if (mode_ == ProjectiveMode::Paper && w1_ == 0 && w2_ != 0) {
      responses[0] = repair_state(*db_, w2_);
    }
  }

  std::int64_t record_index() const override {
    return w1_ * db_->size() + w2_;
  }
  std::int64_t learned_index() const override { return w1_ != 0 ? w1_ : w2_; }

 private:
  const Database* db_;
  ProjectiveMode mode_;
  int seen_ = 0;
  std::int64_t w1_ = 0;
  std::int64_t w2_ = 0;
};

class ProjectiveStrategy final : public AttackStrategy {
 public:
  explicit ProjectiveStrategy(ProjectiveMode mode) : mode_(mode) {}

  std::string name() const override {
    return mode_ == ProjectiveMode::Paper ? "projective:paper"
                                          : "projective:strict";
  }
  bool branching() const override { return true; }

  // Record space: the pair of measured addresses, one slot per message.
  std::int64_t ancilla_dim(int n) const override {
    const std::int64_t domain = std::int64_t{1} << n;
    return domain * domain;
  }

  std::unique_ptr<BranchResponder> make_responder(
      const Database& db, const QueryPlan& plan) const override {
    check_two_register_plan(plan);
    return std::make_unique<ProjectiveResponder>(db, mode_);
  }

  std::vector<AttackBranch> enumerate_branches(
      const Database& db, const QueryPlan& plan) const override {
    check_two_register_plan(plan);
    const auto queries = alice_prepare(plan, plan.n);
    const auto p1 = outcome_distribution(queries[0], "Q");
    const auto p2 = outcome_distribution(queries[1], "Q");
    const std::int64_t domain = db.size();

    std::vector<AttackBranch> branches;
    for (std::int64_t w1 = 0; w1 < domain; ++w1) {
      if (p1[static_cast<std::size_t>(w1)] <= 0.0) continue;
      for (std::int64_t w2 = 0; w2 < domain; ++w2) {
        if (p2[static_cast<std::size_t>(w2)] <= 0.0) continue;
        AttackBranch branch;
        branch.weight = p1[static_cast<std::size_t>(w1)] *
                        p2[static_cast<std::size_t>(w2)];
        branch.record_index = w1 * domain + w2;
        branch.learned_index = w1 != 0 ? w1 : w2;

        StateVector first = w1 != 0 ? basis_qr(domain, w1, db.record(w1))
                                    : basis_qr(domain, 0, 0);
        StateVector second = w2 != 0
                                 ? basis_qr(domain, w2, db.record(w2))
                                 : (w1 != 0 ? repair_state(db, w1)
                                            : basis_qr(domain, 0, 0));
        if (mode_ == ProjectiveMode::Paper && w1 == 0 && w2 != 0) {
          first = repair_state(db, w2);
        }
        branch.responses.push_back(std::move(first));
        branch.responses.push_back(std::move(second));
        branches.push_back(std::move(branch));
      }
    }
    return branches;
  }

 protected:
  // Strict-timing dilation: copy the address into the ancilla slot for the
  // message, then prepare the response the measured branch dictates. The
  // Paper-mode rewrite of an already-delivered reply has no unitary
  // realization, so both modes expose this same dilation.
  UnitaryPair build_unitaries(const Database& db) const override {
    const std::int64_t domain = db.size();
    const std::int64_t ancilla = domain * domain;
    if (ancilla > kMaxAncillaDim) {
      throw CapExceededError(
          "projective dilation needs ancilla dimension " +
          std::to_string(ancilla) + ", above the cap " +
          std::to_string(kMaxAncillaDim) + "; use the branch-based exact "
          "analysis instead");
    }
    const std::int64_t qr = domain * 2;
    const std::int64_t total = qr * ancilla;
    const Eigen::MatrixXcd oracle =
        UnitaryMatrix::permutation(oracle_image(db)).matrix();

    // First message: |q,r>|w1,w2> -> oracle|q,r> |w1 xor q, w2>.
    Eigen::MatrixXcd u1 = Eigen::MatrixXcd::Zero(total, total);
    for (std::int64_t q = 0; q < domain; ++q) {
      for (std::int64_t r = 0; r < 2; ++r) {
        for (std::int64_t w1 = 0; w1 < domain; ++w1) {
          for (std::int64_t w2 = 0; w2 < domain; ++w2) {
            const std::int64_t in = (q * 2 + r) * ancilla + (w1 * domain + w2);
            const std::int64_t b_out = (w1 ^ q) * domain + w2;
            for (std::int64_t qr_out = 0; qr_out < qr; ++qr_out) {
              const Complex amp = oracle(qr_out, q * 2 + r);
              if (amp != Complex(0.0, 0.0)) {
                u1(qr_out * ancilla + b_out, in) = amp;
              }
            }
          }
        }
      }
    }

    // Second message: copy q into the second slot, then per-(w1, w2)
    // response preparation on [Q, R].
    std::vector<Eigen::MatrixXcd> blind_prep(
        static_cast<std::size_t>(domain));
    for (std::int64_t w1 = 1; w1 < domain; ++w1) {
      blind_prep[static_cast<std::size_t>(w1)] =
          unitary_sending(0, repair_state(db, w1).amplitudes());
    }
    Eigen::MatrixXcd u2 = Eigen::MatrixXcd::Zero(total, total);
    for (std::int64_t q = 0; q < domain; ++q) {
      for (std::int64_t r = 0; r < 2; ++r) {
        for (std::int64_t w1 = 0; w1 < domain; ++w1) {
          for (std::int64_t w2 = 0; w2 < domain; ++w2) {
            const std::int64_t in = (q * 2 + r) * ancilla + (w1 * domain + w2);
            const std::int64_t w2_new = w2 ^ q;
            const std::int64_t b_out = w1 * domain + w2_new;
            const Eigen::MatrixXcd& v =
                (w2_new == 0 && w1 != 0)
                    ? blind_prep[static_cast<std::size_t>(w1)]
                    : oracle;
            for (std::int64_t qr_out = 0; qr_out < qr; ++qr_out) {
              const Complex amp = v(qr_out, q * 2 + r);
              if (amp != Complex(0.0, 0.0)) {
                u2(qr_out * ancilla + b_out, in) = amp;
              }
            }
          }
        }
      }
    }
    return UnitaryPair{UnitaryMatrix(std::move(u1)),
                       UnitaryMatrix(std::move(u2))};
  }

 private:
  ProjectiveMode mode_;
};

// ---------------------------------------------------------------------------
// Coupling family

class CouplingStrategy final : public AttackStrategy {
 public:
  explicit CouplingStrategy(double theta) : theta_(theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0 + 1e-12)) {
      throw ValidationError("coupling angle must lie in [0, pi/2]");
    }
  }

  std::string name() const override {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "coupling:%.12g", theta_);
    return buffer;
  }

  // One domain-sized slice per message: B = B1 (x) B2.
  std::int64_t ancilla_dim(int n) const override {
    const std::int64_t domain = std::int64_t{1} << n;
    return domain * domain;
  }

  double theta() const { return theta_; }

 protected:
  UnitaryPair build_unitaries(const Database& db) const override {
    const std::int64_t domain = db.size();
    if (ancilla_dim(db.width()) > kMaxAncillaDim) {
      throw CapExceededError("coupling ancilla dimension " +
                             std::to_string(ancilla_dim(db.width())) +
                             " exceeds the cap " +
                             std::to_string(kMaxAncillaDim) +
                             " (family limited to n <= 3)");
    }
    return UnitaryPair{build_one(db, 0), build_one(db, 1)};
  }

 private:
  // Oracle on [Q, R], then within slice `slot` of B the rotation
  // |0> -> cos |0> + sin |q>, |q> -> -sin |0> + cos |q>, controlled on the
  // address q (identity for q = 0).
  UnitaryMatrix build_one(const Database& db, int slot) const {
    const std::int64_t domain = db.size();
    const std::int64_t ancilla = domain * domain;
    const std::int64_t total = domain * 2 * ancilla;
    const double c = std::cos(theta_);
    const double s = std::sin(theta_);

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(total, total);
    for (std::int64_t q = 0; q < domain; ++q) {
      for (std::int64_t r = 0; r < 2; ++r) {
        const std::int64_t qr_out = q * 2 + (r ^ db.record(q));
        for (std::int64_t b1 = 0; b1 < domain; ++b1) {
          for (std::int64_t b2 = 0; b2 < domain; ++b2) {
            const std::int64_t in = (q * 2 + r) * ancilla + (b1 * domain + b2);
            const std::int64_t slice = slot == 0 ? b1 : b2;
            const std::int64_t other = slot == 0 ? b2 : b1;
            auto flat = [&](std::int64_t new_slice) {
              const std::int64_t nb1 = slot == 0 ? new_slice : other;
              const std::int64_t nb2 = slot == 0 ? other : new_slice;
              return qr_out * ancilla + (nb1 * domain + nb2);
            };
            if (q == 0 || (slice != 0 && slice != q)) {
              u(flat(slice), in) = 1.0;
            } else if (slice == 0) {
              u(flat(0), in) = c;
              u(flat(q), in) = s;
            } else {  // slice == q
              u(flat(0), in) = -s;
              u(flat(q), in) = c;
            }
          }
        }
      }
    }
    return detail::make_unitary_trusted(std::move(u));
  }

  double theta_;
};

// ---------------------------------------------------------------------------
// Custom unitaries

class CustomStrategy final : public AttackStrategy {
 public:
  CustomStrategy(UnitaryMatrix first, UnitaryMatrix second,
                 std::int64_t ancilla, std::string name)
      : pair_{std::move(first), std::move(second)},
        ancilla_(ancilla),
        name_(std::move(name)) {
    if (ancilla_ < 1) {
      throw ValidationError("ancilla dimension must be at least 1");
    }
    if (pair_.first.dim() != pair_.second.dim()) {
      throw DimensionError("the two attack unitaries must share a dimension");
    }
    if (pair_.first.dim() % (2 * ancilla_) != 0) {
      throw DimensionError("attack unitary dimension must equal "
                           "2 * N * ancilla_dim");
    }
  }

  std::string name() const override { return name_; }
  std::int64_t ancilla_dim(int n) const override {
    const std::int64_t domain = std::int64_t{1} << n;
    if (pair_.first.dim() != domain * 2 * ancilla_) {
      throw DimensionError("attack unitaries sized for dimension " +
                           std::to_string(pair_.first.dim()) +
                           " cannot serve width n = " + std::to_string(n));
    }
    return ancilla_;
  }

 protected:
  UnitaryPair build_unitaries(const Database&) const override { return pair_; }

 private:
  UnitaryPair pair_;
  std::int64_t ancilla_;
  std::string name_;
};

}  // namespace

// ---------------------------------------------------------------------------
// AttackStrategy base

struct AttackStrategy::UnitaryCache {
  int n;
  std::vector<std::uint8_t> records;
  UnitaryPair pair;
};

const AttackStrategy::UnitaryPair& AttackStrategy::unitaries(
    const Database& db) const {
  std::scoped_lock lock(cache_mutex_);
  if (!cache_ || cache_->n != db.width() || cache_->records != db.records()) {
    cache_ = std::make_shared<const UnitaryCache>(
        UnitaryCache{db.width(), db.records(), build_unitaries(db)});
  }
  return cache_->pair;
}

const UnitaryMatrix& AttackStrategy::first_unitary(const Database& db) const {
  return unitaries(db).first;
}

const UnitaryMatrix& AttackStrategy::second_unitary(const Database& db) const {
  return unitaries(db).second;
}

std::unique_ptr<BranchResponder> AttackStrategy::make_responder(
    const Database&, const QueryPlan&) const {
  throw ValidationError("strategy " + name() + " has no branch sampler");
}

std::vector<AttackBranch> AttackStrategy::enumerate_branches(
    const Database&, const QueryPlan&) const {
  throw ValidationError("strategy " + name() + " has no branch enumeration");
}

// ---------------------------------------------------------------------------
// Factories

std::unique_ptr<AttackStrategy> honest_strategy() {
  return std::make_unique<HonestStrategy>();
}

std::unique_ptr<AttackStrategy> projective_both_strategy(ProjectiveMode mode) {
  return std::make_unique<ProjectiveStrategy>(mode);
}

std::unique_ptr<AttackStrategy> coupling_attack(double theta) {
  return std::make_unique<CouplingStrategy>(theta);
}

std::unique_ptr<AttackStrategy> custom_unitary_strategy(UnitaryMatrix first,
                                                        UnitaryMatrix second,
                                                        std::int64_t ancilla_dim,
                                                        std::string name) {
  return std::make_unique<CustomStrategy>(std::move(first), std::move(second),
                                          ancilla_dim, std::move(name));
}

std::unique_ptr<AttackStrategy> parse_strategy(const std::string& text) {
  if (text == "honest") return honest_strategy();
  if (text == "projective:paper") {
    return projective_both_strategy(ProjectiveMode::Paper);
  }
  if (text == "projective:strict") {
    return projective_both_strategy(ProjectiveMode::Strict);
  }
  const std::string coupling_prefix = "coupling:";
  if (text.rfind(coupling_prefix, 0) == 0) {
    const std::string arg = text.substr(coupling_prefix.size());
    try {
      std::size_t used = 0;
      const double theta = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return coupling_attack(theta);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("cannot parse coupling angle from \"" + arg +
                            "\"");
    }
  }
  throw ValidationError(
      "unknown strategy \"" + text +
      "\"; expected honest, projective:paper, projective:strict, or "
      "coupling:<theta>");
}

// ---------------------------------------------------------------------------
// Exact analysis

namespace detail {

QueryPlan attack_plan(int n, std::int64_t j, Scenario scenario) {
  QueryPlan plan;
  plan.n = n;
  plan.j = j;
  plan.variant = Variant::Basic;
  plan.reference = 0;
  plan.alpha = Complex(kInvSqrt2, 0.0);
  plan.beta = Complex(kInvSqrt2, 0.0);
  plan.scenario = scenario;
  plan.superposed_slot = scenario == Scenario::A ? 1 : 0;
  plan.seed = 0;
  plan.validate();
  return plan;
}

namespace {

// Honest replies in send order, built from the true record values.
std::vector<StateVector> honest_replies(const Database& db,
                                        const QueryPlan& plan) {
  const HonestReference reference =
      build_honest_reference(plan, {db.record(plan.j)});
  std::vector<StateVector> ordered;
  for (int slot = 0; slot < plan.send_count(); ++slot) {
    ordered.push_back(slot == plan.superposed_slot ? reference.superposed
                                                   : reference.plain[0]);
  }
  return ordered;
}

AttackCellResult evaluate_branching(const AttackStrategy& strategy,
                                    const Database& db, const QueryPlan& plan,
                                    unsigned wants) {
  if (plan.n > kMaxAttackWidth) {
    throw CapExceededError("exact branching analysis is limited to n <= " +
                           std::to_string(kMaxAttackWidth) +
                           "; address register dimension " +
                           std::to_string(plan.domain_size()) + " exceeds it");
  }
  const auto branches = strategy.enumerate_branches(db, plan);
  const auto honest = honest_replies(db, plan);
  const std::int64_t domain = db.size();
  const std::int64_t record_space = strategy.ancilla_dim(plan.n);

  AttackCellResult result;
  Eigen::MatrixXcd sigma;
  Eigen::MatrixXcd rho;
  if (wants & kWantSigma) {
    sigma = Eigen::MatrixXcd::Zero(record_space, record_space);
  }
  if (wants & kWantRho) {
    const std::int64_t alice_dim = (domain * 2) * (domain * 2);
    rho = Eigen::MatrixXcd::Zero(alice_dim, alice_dim);
  }

  for (const auto& branch : branches) {
    double pass = branch.weight;
    for (std::size_t slot = 0; slot < honest.size(); ++slot) {
      pass *= std::norm(overlap(honest[slot], branch.responses[slot]));
    }
    result.pass_probability += pass;

    if (wants & kWantSigma) {
      sigma(branch.record_index, branch.record_index) += branch.weight;
    }
    if (wants & kWantRho) {
      const StateVector joint =
          tensor(branch.responses[0].renamed("Q", "Q1").renamed("R", "R1"),
                 branch.responses[1].renamed("Q", "Q2").renamed("R", "R2"));
      rho += branch.weight *
             (joint.amplitudes() * joint.amplitudes().adjoint());
    }
  }

  if (wants & kWantSigma) {
    result.sigma = std::make_unique<DensityMatrix>(make_density_trusted(
        RegisterLayout::single("B", record_space), std::move(sigma)));
  }
  if (wants & kWantRho) {
    const RegisterLayout alice_layout(
        {Register{"Q1", domain}, Register{"R1", 2}, Register{"Q2", domain},
         Register{"R2", 2}});
    result.rho = std::make_unique<DensityMatrix>(
        make_density_trusted(alice_layout, std::move(rho)));
  }
  return result;
}

AttackCellResult evaluate_dilated(const AttackStrategy& strategy,
                                  const Database& db, const QueryPlan& plan,
                                  unsigned wants) {
  if (plan.n > kMaxAttackWidth) {
    throw CapExceededError("exact joint analysis is limited to n <= " +
                           std::to_string(kMaxAttackWidth) +
                           "; address register dimension " +
                           std::to_string(plan.domain_size()) + " exceeds it");
  }
  const std::int64_t domain = plan.domain_size();
  const std::int64_t ancilla = strategy.ancilla_dim(plan.n);
  if (ancilla < 1 || ancilla > kMaxAncillaDim) {
    throw CapExceededError("ancilla dimension " + std::to_string(ancilla) +
                           " exceeds the cap " + std::to_string(kMaxAncillaDim));
  }
  if (domain * 2 * domain * 2 * ancilla > kMaxJointDim) {
    throw CapExceededError(
        "joint space dimension " +
        std::to_string(domain * 2 * domain * 2 * ancilla) +
        " exceeds the cap " + std::to_string(kMaxJointDim));
  }

  const auto queries = alice_prepare(plan, plan.n);
  const RegisterLayout r_layout = RegisterLayout::single("R", 2);
  StateVector state =
      tensor(queries[0].renamed("Q", "Q1"),
             StateVector::basis(r_layout, 0).renamed("R", "R1"));
  state = tensor(state, queries[1].renamed("Q", "Q2"));
  state = tensor(state, StateVector::basis(r_layout, 0).renamed("R", "R2"));
  state = tensor(state,
                 StateVector::basis(RegisterLayout::single("B", ancilla), 0));

  const auto& pair = strategy.unitaries(db);
  const std::int64_t expected = domain * 2 * ancilla;
  if (pair.first.dim() != expected || pair.second.dim() != expected) {
    throw DimensionError("strategy unitaries must act on Q x R x B (dim " +
                         std::to_string(expected) + ")");
  }
  state = apply_unitary(state, pair.first, {"Q1", "R1", "B"});
  state = apply_unitary(state, pair.second, {"Q2", "R2", "B"});

  const auto honest = honest_replies(db, plan);
  const StateVector honest_joint =
      tensor(honest[0].renamed("Q", "Q1").renamed("R", "R1"),
             honest[1].renamed("Q", "Q2").renamed("R", "R2"));

  AttackCellResult result;
  result.pass_probability = projection_probability(
      state, {"Q1", "R1", "Q2", "R2"}, honest_joint);
  if (wants & kWantSigma) {
    result.sigma =
        std::make_unique<DensityMatrix>(reduced_density(state, {"B"}));
  }
  if (wants & kWantRho) {
    result.rho = std::make_unique<DensityMatrix>(
        reduced_density(state, {"Q1", "R1", "Q2", "R2"}));
  }
  return result;
}

}  // namespace

AttackCellResult evaluate_attack_cell(const AttackStrategy& strategy,
                                      const Database& db, std::int64_t j,
                                      Scenario scenario, unsigned wants,
                                      bool force_dilation) {
  const QueryPlan plan = attack_plan(db.width(), j, scenario);
  if (strategy.branching() && !force_dilation) {
    return evaluate_branching(strategy, db, plan, wants);
  }
  return evaluate_dilated(strategy, db, plan, wants);
}

}  // namespace detail

AttackAssessmentEntry simulate_attack_exact(const AttackStrategy& strategy,
                                            const Database& db, std::int64_t j,
                                            Scenario scenario) {
  auto cell = detail::evaluate_attack_cell(
      strategy, db, j, scenario, detail::kWantSigma | detail::kWantRho);
  return AttackAssessmentEntry{scenario, j, std::move(*cell.rho),
                               std::move(*cell.sigma),
                               cell.pass_probability};
}

AttackAssessment assess_attack_exact(const AttackStrategy& strategy,
                                     const Database& db) {
  AttackAssessment assessment;
  for (std::int64_t j = 1; j < db.size(); ++j) {
    for (Scenario scenario : {Scenario::A, Scenario::B}) {
      assessment.entries.push_back(
          simulate_attack_exact(strategy, db, j, scenario));
    }
  }
  return assessment;
}

ProtocolOutcome sample_attack_run(const AttackStrategy& strategy,
                                  const Database& db, const QueryPlan& plan,
                                  RandomSource& rng) {
  return run_protocol(db, plan, strategy, rng).outcome;
}

}  // namespace qpq
