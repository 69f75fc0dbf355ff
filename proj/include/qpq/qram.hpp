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
#include <filesystem>
#include <string>
#include <vector>

#include "qpq/states.hpp"

namespace qpq {

// A table of N = 2^n single-bit records A_0 .. A_{N-1}. Record 0 is pinned
// to 0: the protocol uses address 0 as its reference branch and relies on
// A_0 = 0.
class Database {
 public:
  Database(int n, std::vector<std::uint8_t> records);

  static Database random(int n, std::uint64_t seed);

  // Text format, two lines:
  //   n=<width>
  //   <2^n characters from {0,1}, most significant address first>
  // so the last character of line two is record 0.
  static Database load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  static Database parse(const std::string& text, const std::string& origin);
  std::string serialize() const;

  int width() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(records_.size()); }
  int record(std::int64_t address) const;
  const std::vector<std::uint8_t>& records() const { return records_; }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> records_;
};

// Oracle call |q>_Q |r>_R -> |q>_Q |r xor A_q>_R applied directly as an
// amplitude permutation.
StateVector oracle_direct(const StateVector& state, const Database& db,
                          const std::string& q = "Q", const std::string& r = "R");

enum class UnaryDirection { Forward, Reverse };

// Address transcoder |q>_Q |p>_P -> |q>_Q |p xor q>_P. Self-inverse; the
// direction argument only documents which leg of the sandwich is running.
StateVector unary_encode(const StateVector& state, UnaryDirection direction,
                         const std::string& q = "Q", const std::string& p = "P");

// Bus readout |q>_Q |p>_P |r>_R -> |q>_Q |p>_P |r xor A_p>_R.
StateVector bus_readout(const StateVector& state, const Database& db,
                        const std::string& q = "Q", const std::string& p = "P",
                        const std::string& r = "R");

// The oracle realized through the decomposition: adjoin a pointer register
// P = |0>, encode, read the bus, decode, check that P returned to |0>
// (residual amplitude below 1e-10), and discard it.
StateVector oracle_via_unary(const StateVector& state, const Database& db,
                             const std::string& q = "Q",
                             const std::string& r = "R");

struct GateCountReport {
  int n = 0;
  std::int64_t conventional_ops = 0;  // 2^(n+1) - 2
  std::int64_t addressing_ops = 0;    // n
};

GateCountReport gate_count(int n);

}  // namespace qpq
