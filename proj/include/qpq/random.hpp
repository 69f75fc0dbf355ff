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
#include <random>

namespace qpq {

// Seeded random source used by every stochastic operation in the library.
//
// All draws go through the fixed set of methods below rather than through
// std::uniform_*_distribution, whose output is implementation defined. Two
// RandomSource instances with equal seeds therefore produce identical
// streams on any platform, which keeps simulations reproducible.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [lo, hi], inclusive, via rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal deviate (Box-Muller on uniform()).
  double normal();

  // Bernoulli with success probability p.
  bool bernoulli(double p) { return uniform() < p; }

  // Child source whose seed is derived from this stream. Lets independent
  // trials consume independent streams without sharing state.
  RandomSource fork();

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace qpq
