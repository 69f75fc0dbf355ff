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
#include <string>
#include <vector>

#include "qpq/errors.hpp"

namespace qpq {

// One named subsystem of a composite state.
struct Register {
  std::string label;
  std::int64_t dim = 0;

  bool operator==(const Register& other) const = default;
};

// An ordered product of labeled registers.
//
// Index convention: the leftmost register is the most significant digit of
// the flat basis index. For layout [(Q, N), (R, 2)], basis index
// i = q * 2 + r encodes |q> on Q and |r> on R. Labels are unique within a
// layout; every labeled operation resolves registers by label, so callers
// never deal in raw offsets.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> registers);

  static RegisterLayout single(std::string label, std::int64_t dim);

  std::size_t register_count() const { return registers_.size(); }
  const std::vector<Register>& registers() const { return registers_; }
  const Register& at(std::size_t position) const;

  std::int64_t total_dim() const { return total_dim_; }

  bool has(const std::string& label) const;
  std::size_t position_of(const std::string& label) const;
  std::int64_t dim_of(const std::string& label) const;

  // Step between consecutive values of the register at `position`, with all
  // other digits fixed.
  std::int64_t stride_at(std::size_t position) const;
  std::int64_t stride_of(const std::string& label) const;

  // Digit of `flat_index` belonging to the register at `position`.
  std::int64_t digit_at(std::size_t position, std::int64_t flat_index) const;

  // Flat index assembled from one digit per register, in layout order.
  std::int64_t index_of_digits(const std::vector<std::int64_t>& digits) const;

  // This layout followed by `other`. Labels must stay unique.
  RegisterLayout concat(const RegisterLayout& other) const;

  // Same registers with one label replaced.
  RegisterLayout renamed(const std::string& old_label,
                         const std::string& new_label) const;

  // The named registers, in the order given.
  RegisterLayout subset(const std::vector<std::string>& labels) const;

  // Registers other than the named ones, in layout order.
  RegisterLayout complement(const std::vector<std::string>& labels) const;

  bool operator==(const RegisterLayout& other) const {
    return registers_ == other.registers_;
  }

  std::string describe() const;

 private:
  void rebuild_strides();

  std::vector<Register> registers_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_dim_ = 1;
};

}  // namespace qpq
