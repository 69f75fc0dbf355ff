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

#include "qpq/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace qpq {

namespace {

constexpr double kSpectralFloor = 1e-12;

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// Offsets of every joint value of `positions` (digits ordered as given,
// first position most significant) within the flat index space of `layout`.
std::vector<std::int64_t> offsets_for_positions(
    const RegisterLayout& layout, const std::vector<std::size_t>& positions) {
  std::int64_t count = 1;
  for (std::size_t p : positions) count *= layout.at(p).dim;
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(count), 0);
  std::int64_t repeat = count;
  for (std::size_t p : positions) {
    const std::int64_t dim = layout.at(p).dim;
    const std::int64_t stride = layout.stride_at(p);
    repeat /= dim;
    std::int64_t idx = 0;
    while (idx < count) {
      for (std::int64_t v = 0; v < dim; ++v) {
        const std::int64_t add = v * stride;
        for (std::int64_t r = 0; r < repeat; ++r) offsets[idx++] += add;
      }
    }
  }
  return offsets;
}

std::vector<std::size_t> positions_of_labels(
    const RegisterLayout& layout, const std::vector<std::string>& labels) {
  std::vector<std::size_t> positions;
  positions.reserve(labels.size());
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw ValidationError("duplicate register label " + quoted(label) +
                            " in target list");
    }
    positions.push_back(layout.position_of(label));
  }
  return positions;
}

std::vector<std::size_t> complement_positions(
    const RegisterLayout& layout, const std::vector<std::size_t>& positions) {
  std::vector<bool> used(layout.register_count(), false);
  for (std::size_t p : positions) used[p] = true;
  std::vector<std::size_t> rest;
  for (std::size_t p = 0; p < layout.register_count(); ++p) {
    if (!used[p]) rest.push_back(p);
  }
  return rest;
}

Eigen::VectorXd clamped_eigenvalues(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed to converge");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < kSpectralFloor) values(i) = 0.0;
  }
  return values;
}

}  // namespace

// ---------------------------------------------------------------------------
// RegisterLayout

RegisterLayout::RegisterLayout(std::vector<Register> registers)
    : registers_(std::move(registers)) {
  std::set<std::string> seen;
  for (const auto& reg : registers_) {
    if (reg.label.empty()) {
      throw ValidationError("register label must be nonempty");
    }
    if (reg.dim < 1) {
      throw ValidationError("register " + quoted(reg.label) +
                            " has nonpositive dimension");
    }
    if (!seen.insert(reg.label).second) {
      throw ValidationError("duplicate register label " + quoted(reg.label));
    }
  }
  rebuild_strides();
}

RegisterLayout RegisterLayout::single(std::string label, std::int64_t dim) {
  return RegisterLayout({Register{std::move(label), dim}});
}

void RegisterLayout::rebuild_strides() {
  strides_.assign(registers_.size(), 1);
  total_dim_ = 1;
  for (std::size_t p = registers_.size(); p-- > 0;) {
    strides_[p] = total_dim_;
    if (registers_[p].dim > std::numeric_limits<std::int64_t>::max() / total_dim_) {
      throw CapExceededError("layout dimension overflows 64-bit index space");
    }
    total_dim_ *= registers_[p].dim;
  }
}

const Register& RegisterLayout::at(std::size_t position) const {
  if (position >= registers_.size()) {
    throw ValidationError("register position out of range");
  }
  return registers_[position];
}

bool RegisterLayout::has(const std::string& label) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.label == label; });
}

std::size_t RegisterLayout::position_of(const std::string& label) const {
  for (std::size_t p = 0; p < registers_.size(); ++p) {
    if (registers_[p].label == label) return p;
  }
  throw ValidationError("no register labeled " + quoted(label) + " in layout " +
                        describe());
}

std::int64_t RegisterLayout::dim_of(const std::string& label) const {
  return registers_[position_of(label)].dim;
}

std::int64_t RegisterLayout::stride_at(std::size_t position) const {
  if (position >= strides_.size()) {
    throw ValidationError("register position out of range");
  }
  return strides_[position];
}

std::int64_t RegisterLayout::stride_of(const std::string& label) const {
  return strides_[position_of(label)];
}

std::int64_t RegisterLayout::digit_at(std::size_t position,
                                      std::int64_t flat_index) const {
  return (flat_index / stride_at(position)) % registers_[position].dim;
}

std::int64_t RegisterLayout::index_of_digits(
    const std::vector<std::int64_t>& digits) const {
  if (digits.size() != registers_.size()) {
    throw DimensionError("digit count does not match register count");
  }
  std::int64_t index = 0;
  for (std::size_t p = 0; p < digits.size(); ++p) {
    if (digits[p] < 0 || digits[p] >= registers_[p].dim) {
      throw ValidationError("digit out of range for register " +
                            quoted(registers_[p].label));
    }
    index += digits[p] * strides_[p];
  }
  return index;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Register> merged = registers_;
  merged.insert(merged.end(), other.registers_.begin(), other.registers_.end());
  return RegisterLayout(std::move(merged));
}

RegisterLayout RegisterLayout::renamed(const std::string& old_label,
                                       const std::string& new_label) const {
  std::vector<Register> regs = registers_;
  regs[position_of(old_label)].label = new_label;
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::subset(
    const std::vector<std::string>& labels) const {
  std::vector<Register> regs;
  regs.reserve(labels.size());
  for (const auto& label : labels) regs.push_back(registers_[position_of(label)]);
  return RegisterLayout(std::move(regs));
}

RegisterLayout RegisterLayout::complement(
    const std::vector<std::string>& labels) const {
  const auto positions = positions_of_labels(*this, labels);
  std::vector<Register> regs;
  for (std::size_t p : complement_positions(*this, positions)) {
    regs.push_back(registers_[p]);
  }
  return RegisterLayout(std::move(regs));
}

std::string RegisterLayout::describe() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t p = 0; p < registers_.size(); ++p) {
    if (p > 0) out << ", ";
    out << registers_[p].label << ":" << registers_[p].dim;
  }
  out << "]";
  return out.str();
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(RegisterLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.total_dim()) {
    throw DimensionError("amplitude vector length " +
                         std::to_string(amplitudes_.size()) +
                         " does not match layout dimension " +
                         std::to_string(layout_.total_dim()));
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kStructuralTol) {
    throw ValidationError("state vector squared norm " + std::to_string(norm2) +
                          " is not 1");
  }
}

StateVector StateVector::basis(RegisterLayout layout, std::int64_t index) {
  if (index < 0 || index >= layout.total_dim()) {
    throw ValidationError("basis index " + std::to_string(index) +
                          " out of range for layout " + layout.describe());
  }
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(layout.total_dim());
  amp(index) = 1.0;
  return StateVector(std::move(layout), std::move(amp));
}

StateVector StateVector::superposition(
    RegisterLayout layout,
    const std::vector<std::pair<std::int64_t, Complex>>& terms) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(layout.total_dim());
  for (const auto& [index, coeff] : terms) {
    if (index < 0 || index >= layout.total_dim()) {
      throw ValidationError("basis index " + std::to_string(index) +
                            " out of range for layout " + layout.describe());
    }
    amp(index) += coeff;
  }
  return StateVector(std::move(layout), std::move(amp));
}

Complex StateVector::amplitude(std::int64_t index) const {
  if (index < 0 || index >= dim()) {
    throw ValidationError("amplitude index out of range");
  }
  return amplitudes_(index);
}

StateVector StateVector::renamed(const std::string& old_label,
                                 const std::string& new_label) const {
  return StateVector(layout_.renamed(old_label, new_label), amplitudes_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density matrix must be square");
  }
  if (matrix_.rows() != layout_.total_dim()) {
    throw DimensionError("density matrix dimension " +
                         std::to_string(matrix_.rows()) +
                         " does not match layout dimension " +
                         std::to_string(layout_.total_dim()));
  }
  const double herm_gap = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_gap > kStructuralTol) {
    throw ValidationError("density matrix is not hermitian (gap " +
                          std::to_string(herm_gap) + ")");
  }
  const double trace_gap = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_gap > kStructuralTol) {
    throw ValidationError("density matrix trace differs from 1 by " +
                          std::to_string(trace_gap));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed to converge");
  }
  if (solver.eigenvalues().minCoeff() < -kStructuralTol) {
    throw ValidationError("density matrix has negative eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  }
}

namespace detail {

DensityMatrix make_density_trusted(RegisterLayout layout, Eigen::MatrixXcd m) {
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(layout),
                       std::move(m));
}

UnitaryMatrix make_unitary_trusted(Eigen::MatrixXcd m) {
  return UnitaryMatrix(UnitaryMatrix::Trusted{}, std::move(m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd matrix)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw DimensionError("unitary matrix must be square and nonempty");
  }
  const Eigen::MatrixXcd gram = matrix_.adjoint() * matrix_;
  const double gap =
      (gram - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (gap > kStructuralTol) {
    throw ValidationError("matrix is not unitary (deviation " +
                          std::to_string(gap) + ")");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::int64_t dim) {
  return detail::make_unitary_trusted(Eigen::MatrixXcd::Identity(dim, dim));
}

UnitaryMatrix UnitaryMatrix::permutation(
    const std::vector<std::int64_t>& image) {
  const auto dim = static_cast<std::int64_t>(image.size());
  std::vector<bool> hit(image.size(), false);
  for (std::int64_t v : image) {
    if (v < 0 || v >= dim || hit[static_cast<std::size_t>(v)]) {
      throw ValidationError("permutation image is not a bijection");
    }
    hit[static_cast<std::size_t>(v)] = true;
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) m(image[j], j) = 1.0;
  return detail::make_unitary_trusted(std::move(m));
}

// ---------------------------------------------------------------------------
// Ensemble

Ensemble::Ensemble(std::vector<WeightedState> items) : items_(std::move(items)) {
  if (items_.empty()) {
    throw ValidationError("ensemble must contain at least one state");
  }
  double total = 0.0;
  for (const auto& item : items_) {
    if (item.probability < -kStructuralTol || item.probability > 1.0 + kStructuralTol) {
      throw ValidationError("ensemble probability " +
                            std::to_string(item.probability) +
                            " outside [0, 1]");
    }
    if (!(item.state.layout() == items_.front().state.layout())) {
      throw DimensionError("ensemble states must share one register layout");
    }
    total += item.probability;
  }
  if (std::abs(total - 1.0) > kStructuralTol) {
    throw ValidationError("ensemble probabilities sum to " +
                          std::to_string(total) + ", not 1");
  }
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor(const StateVector& a, const StateVector& b) {
  RegisterLayout layout = a.layout().concat(b.layout());
  Eigen::VectorXcd amp(layout.total_dim());
  const std::int64_t bdim = b.dim();
  for (std::int64_t i = 0; i < a.dim(); ++i) {
    amp.segment(i * bdim, bdim) = a.amplitudes()(i) * b.amplitudes();
  }
  return StateVector(std::move(layout), std::move(amp));
}

StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          const std::vector<std::string>& targets) {
  const RegisterLayout& layout = state.layout();
  if (targets.empty()) {
    throw ValidationError("apply_unitary requires at least one target");
  }
  const auto positions = positions_of_labels(layout, targets);
  std::int64_t udim = 1;
  for (std::size_t p : positions) udim *= layout.at(p).dim;
  if (udim != u.dim()) {
    throw DimensionError("unitary dimension " + std::to_string(u.dim()) +
                         " does not match target dimension " +
                         std::to_string(udim));
  }
  const auto target_offsets = offsets_for_positions(layout, positions);
  const auto rest_offsets =
      offsets_for_positions(layout, complement_positions(layout, positions));

  Eigen::VectorXcd out(state.dim());
  Eigen::VectorXcd slice(udim);
  for (std::int64_t base : rest_offsets) {
    for (std::int64_t t = 0; t < udim; ++t) {
      slice(t) = state.amplitudes()(base + target_offsets[t]);
    }
    Eigen::VectorXcd mapped = u.matrix() * slice;
    for (std::int64_t t = 0; t < udim; ++t) {
      out(base + target_offsets[t]) = mapped(t);
    }
  }
  return StateVector(layout, std::move(out));
}

std::vector<double> outcome_distribution(const StateVector& state,
                                         const std::string& target) {
  const RegisterLayout& layout = state.layout();
  const std::size_t position = layout.position_of(target);
  const std::int64_t dim = layout.at(position).dim;
  std::vector<double> probs(static_cast<std::size_t>(dim), 0.0);
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    probs[static_cast<std::size_t>(layout.digit_at(position, i))] +=
        std::norm(state.amplitudes()(i));
  }
  return probs;
}

std::pair<StateVector, double> collapse_onto(const StateVector& state,
                                             const std::string& target,
                                             std::int64_t outcome) {
  const RegisterLayout& layout = state.layout();
  const std::size_t position = layout.position_of(target);
  if (outcome < 0 || outcome >= layout.at(position).dim) {
    throw ValidationError("measurement outcome out of range for register " +
                          target);
  }
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(state.dim());
  double mass = 0.0;
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    if (layout.digit_at(position, i) == outcome) {
      amp(i) = state.amplitudes()(i);
      mass += std::norm(state.amplitudes()(i));
    }
  }
  if (mass < 1e-300) {
    throw ValidationError("cannot collapse onto outcome of probability 0");
  }
  amp /= std::sqrt(mass);
  return {StateVector(layout, std::move(amp)), mass};
}

MeasurementResult measure_computational(const StateVector& state,
                                        const std::string& target,
                                        RandomSource& rng) {
  const auto probs = outcome_distribution(state, target);
  const double roll = rng.uniform();
  double acc = 0.0;
  std::int64_t outcome = static_cast<std::int64_t>(probs.size()) - 1;
  for (std::size_t o = 0; o < probs.size(); ++o) {
    acc += probs[o];
    if (roll < acc) {
      outcome = static_cast<std::int64_t>(o);
      break;
    }
  }
  // Guard against landing on an outcome whose probability is exactly zero
  // when accumulated rounding pushes acc past roll.
  while (outcome > 0 && probs[static_cast<std::size_t>(outcome)] <= 0.0) {
    --outcome;
  }
  auto [collapsed, probability] = collapse_onto(state, target, outcome);
  return MeasurementResult{outcome, probability, std::move(collapsed)};
}

DensityMatrix to_density(const StateVector& state) {
  Eigen::MatrixXcd m = state.amplitudes() * state.amplitudes().adjoint();
  return detail::make_density_trusted(state.layout(), std::move(m));
}

DensityMatrix mix(const Ensemble& ensemble) {
  const auto& items = ensemble.items();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(items.front().state.dim(),
                                                items.front().state.dim());
  for (const auto& item : items) {
    acc += item.probability * item.state.matrix();
  }
  return detail::make_density_trusted(items.front().state.layout(),
                                      std::move(acc));
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  const RegisterLayout& layout = rho.layout();
  const auto keep_positions = positions_of_labels(layout, keep);
  // Kept registers stay in layout order, so tracing is independent of the
  // order in which labels are listed.
  auto ordered = keep_positions;
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::string> ordered_labels;
  ordered_labels.reserve(ordered.size());
  for (std::size_t p : ordered) ordered_labels.push_back(layout.at(p).label);

  const auto keep_offsets = offsets_for_positions(layout, ordered);
  const auto trace_offsets =
      offsets_for_positions(layout, complement_positions(layout, ordered));
  const auto out_dim = static_cast<std::int64_t>(keep_offsets.size());

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  for (std::int64_t a = 0; a < out_dim; ++a) {
    for (std::int64_t b = 0; b < out_dim; ++b) {
      Complex sum = 0.0;
      for (std::int64_t t : trace_offsets) {
        sum += rho.matrix()(keep_offsets[a] + t, keep_offsets[b] + t);
      }
      out(a, b) = sum;
    }
  }
  return detail::make_density_trusted(layout.subset(ordered_labels),
                                      std::move(out));
}

DensityMatrix reduced_density(const StateVector& state,
                              const std::vector<std::string>& keep) {
  const RegisterLayout& layout = state.layout();
  const auto keep_positions = positions_of_labels(layout, keep);
  auto ordered = keep_positions;
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::string> ordered_labels;
  ordered_labels.reserve(ordered.size());
  for (std::size_t p : ordered) ordered_labels.push_back(layout.at(p).label);

  const auto keep_offsets = offsets_for_positions(layout, ordered);
  const auto trace_offsets =
      offsets_for_positions(layout, complement_positions(layout, ordered));
  const auto out_dim = static_cast<std::int64_t>(keep_offsets.size());

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  for (std::int64_t t : trace_offsets) {
    for (std::int64_t a = 0; a < out_dim; ++a) {
      const Complex va = state.amplitudes()(keep_offsets[a] + t);
      if (va == Complex(0.0, 0.0)) continue;
      for (std::int64_t b = 0; b < out_dim; ++b) {
        out(a, b) += va * std::conj(state.amplitudes()(keep_offsets[b] + t));
      }
    }
  }
  return detail::make_density_trusted(layout.subset(ordered_labels),
                                      std::move(out));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("fidelity requires states of equal dimension");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rho_solver(rho.matrix());
  if (rho_solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed to converge");
  }
  Eigen::VectorXd vals = rho_solver.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    vals(i) = vals(i) < kSpectralFloor ? 0.0 : std::sqrt(vals(i));
  }
  const Eigen::MatrixXcd sqrt_rho = rho_solver.eigenvectors() *
                                    vals.asDiagonal() *
                                    rho_solver.eigenvectors().adjoint();
  const Eigen::MatrixXcd inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  // inner is hermitian PSD up to rounding; its clamped eigenvalues give
  // F = sum_i sqrt(lambda_i).
  const Eigen::MatrixXcd sym = 0.5 * (inner + inner.adjoint());
  const Eigen::VectorXd lam = clamped_eigenvalues(sym);
  double f = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) f += std::sqrt(lam(i));
  return std::clamp(f, 0.0, 1.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd lam = clamped_eigenvalues(rho.matrix());
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > 0.0) s -= lam(i) * std::log2(lam(i));
  }
  return std::max(s, 0.0);
}

double holevo_chi(const Ensemble& ensemble) {
  double avg_entropy = 0.0;
  for (const auto& item : ensemble.items()) {
    if (item.probability > 0.0) {
      avg_entropy += item.probability * von_neumann_entropy(item.state);
    }
  }
  const double mix_entropy = von_neumann_entropy(mix(ensemble));
  return std::max(mix_entropy - avg_entropy, 0.0);
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (!(a.layout() == b.layout())) {
    throw DimensionError("overlap requires identical register layouts, got " +
                         a.layout().describe() + " and " +
                         b.layout().describe());
  }
  return a.amplitudes().dot(b.amplitudes());
}

double projection_probability(const StateVector& state,
                              const std::vector<std::string>& targets,
                              const StateVector& psi) {
  const RegisterLayout& layout = state.layout();
  const auto positions = positions_of_labels(layout, targets);
  std::int64_t tdim = 1;
  for (std::size_t p : positions) tdim *= layout.at(p).dim;
  if (tdim != psi.dim()) {
    throw DimensionError("projector state dimension " +
                         std::to_string(psi.dim()) +
                         " does not match target dimension " +
                         std::to_string(tdim));
  }
  const auto target_offsets = offsets_for_positions(layout, positions);
  const auto rest_offsets =
      offsets_for_positions(layout, complement_positions(layout, positions));
  double total = 0.0;
  for (std::int64_t base : rest_offsets) {
    Complex inner = 0.0;
    for (std::int64_t t = 0; t < tdim; ++t) {
      inner += std::conj(psi.amplitudes()(t)) *
               state.amplitudes()(base + target_offsets[t]);
    }
    total += std::norm(inner);
  }
  return std::min(total, 1.0);
}

UnitaryMatrix random_unitary(std::int64_t dim, RandomSource& rng) {
  if (dim < 1) {
    throw ValidationError("random_unitary requires dim >= 1");
  }
  Eigen::MatrixXcd g(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t c = 0; c < dim; ++c) {
      g(r, c) = Complex(rng.normal(), rng.normal());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (std::int64_t c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    q.col(c) *= phase;
  }
  return detail::make_unitary_trusted(std::move(q));
}

}  // namespace qpq
