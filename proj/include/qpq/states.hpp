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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpq/layout.hpp"
#include "qpq/random.hpp"

namespace qpq {

using Complex = std::complex<double>;

// Tolerance used by all structural validity checks (normalization,
// hermiticity, unit trace, unitarity).
inline constexpr double kStructuralTol = 1e-10;

class DensityMatrix;
class UnitaryMatrix;

namespace detail {
DensityMatrix make_density_trusted(RegisterLayout layout, Eigen::MatrixXcd m);
UnitaryMatrix make_unitary_trusted(Eigen::MatrixXcd m);
}  // namespace detail

// Pure state on a labeled register product. The amplitude vector is indexed
// by the layout's flat basis index and is kept normalized: the squared norm
// stays within kStructuralTol of 1.
class StateVector {
 public:
  StateVector(RegisterLayout layout, Eigen::VectorXcd amplitudes);

  static StateVector basis(RegisterLayout layout, std::int64_t index);

  // Normalized combination of computational basis terms; the squared
  // magnitudes of the coefficients must already sum to 1.
  static StateVector superposition(
      RegisterLayout layout,
      const std::vector<std::pair<std::int64_t, Complex>>& terms);

  const RegisterLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::int64_t dim() const { return amplitudes_.size(); }
  Complex amplitude(std::int64_t index) const;

  StateVector renamed(const std::string& old_label,
                      const std::string& new_label) const;

 private:
  RegisterLayout layout_;
  Eigen::VectorXcd amplitudes_;
};

// Mixed state on a labeled register product. Public construction checks
// hermiticity, unit trace, and positive semidefiniteness (eigenvalues above
// -kStructuralTol); operations inside the library that preserve these
// properties by construction skip the spectral check.
class DensityMatrix {
 public:
  DensityMatrix(RegisterLayout layout, Eigen::MatrixXcd matrix);

  const RegisterLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::int64_t dim() const { return matrix_.rows(); }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, RegisterLayout layout, Eigen::MatrixXcd matrix)
      : layout_(std::move(layout)), matrix_(std::move(matrix)) {}

  friend DensityMatrix detail::make_density_trusted(RegisterLayout,
                                                    Eigen::MatrixXcd);

  RegisterLayout layout_;
  Eigen::MatrixXcd matrix_;
};

// Square matrix checked to satisfy U+ U = I within kStructuralTol.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Eigen::MatrixXcd matrix);

  static UnitaryMatrix identity(std::int64_t dim);

  // Unitary built from a permutation: column j is the basis vector
  // e_{image[j]}, so basis state |j> maps to |image[j]>.
  static UnitaryMatrix permutation(const std::vector<std::int64_t>& image);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  std::int64_t dim() const { return matrix_.rows(); }

 private:
  struct Trusted {};
  UnitaryMatrix(Trusted, Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}

  friend UnitaryMatrix detail::make_unitary_trusted(Eigen::MatrixXcd);

  Eigen::MatrixXcd matrix_;
};

// Finite ensemble {(p_i, rho_i)} with a shared layout; probabilities lie in
// [0, 1] and sum to 1 within kStructuralTol.
struct WeightedState {
  double probability = 0.0;
  DensityMatrix state;
};

class Ensemble {
 public:
  explicit Ensemble(std::vector<WeightedState> items);

  const std::vector<WeightedState>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<WeightedState> items_;
};

struct MeasurementResult {
  std::int64_t outcome = 0;
  double probability = 0.0;
  StateVector collapsed;
};

// Kronecker product; the result layout is a's registers followed by b's.
StateVector tensor(const StateVector& a, const StateVector& b);

// Applies u to the named registers (in the order given, leftmost label most
// significant in u's index space) and identity elsewhere.
StateVector apply_unitary(const StateVector& state, const UnitaryMatrix& u,
                          const std::vector<std::string>& targets);

// Computational-basis measurement of one register: samples an outcome from
// the marginal distribution and renormalizes the surviving amplitudes.
MeasurementResult measure_computational(const StateVector& state,
                                        const std::string& target,
                                        RandomSource& rng);

// Marginal outcome distribution of one register, without collapsing.
std::vector<double> outcome_distribution(const StateVector& state,
                                         const std::string& target);

// Deterministic collapse onto a chosen outcome of one register. Returns the
// renormalized state and the outcome's probability. Collapsing onto an
// outcome of probability below 1e-300 is an error.
std::pair<StateVector, double> collapse_onto(const StateVector& state,
                                             const std::string& target,
                                             std::int64_t outcome);

// |psi><psi|.
DensityMatrix to_density(const StateVector& state);

// Ensemble average sum_i p_i rho_i.
DensityMatrix mix(const Ensemble& ensemble);

// Traces out all registers except `keep`. The kept registers appear in
// their original layout order regardless of the order of `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);

// partial_trace(to_density(state), keep) without materializing the full
// density matrix.
DensityMatrix reduced_density(const StateVector& state,
                              const std::vector<std::string>& keep);

// Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)),
// clamped to [0, 1]. Eigenvalues below 1e-12 are treated as 0.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Von Neumann entropy in bits. Eigenvalues below 1e-12 contribute 0.
double von_neumann_entropy(const DensityMatrix& rho);

// Holevo quantity chi = S(mix) - sum_i p_i S(rho_i), in bits.
double holevo_chi(const Ensemble& ensemble);

// <a|b> for states on identical layouts.
Complex overlap(const StateVector& a, const StateVector& b);

// Squared norm of (<psi| tensor I_rest) |state| where psi lives on the named
// registers of state: the probability that a projective test of those
// registers against psi succeeds.
double projection_probability(const StateVector& state,
                              const std::vector<std::string>& targets,
                              const StateVector& psi);

// Haar-distributed random unitary (complex Ginibre + QR with the phase
// convention that makes R's diagonal positive).
UnitaryMatrix random_unitary(std::int64_t dim, RandomSource& rng);

}  // namespace qpq
