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

#include "qpq/qram.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qpq {

namespace {

constexpr int kMaxWidth = 62;
constexpr std::int64_t kMaxAdjoinedDim = std::int64_t{1} << 22;

void check_width(int n) {
  if (n < 1 || n > kMaxWidth) {
    throw ValidationError("database width n must lie in [1, " +
                          std::to_string(kMaxWidth) + "], got " +
                          std::to_string(n));
  }
}

// Permutes amplitudes according to a new value for one register, computed
// from the digits of the others. `image` maps (digit of src, digit of dst)
// to the replacement digit of dst.
template <typename Image>
StateVector permute_register(const StateVector& state, const std::string& src,
                             const std::string& dst, Image image) {
  const RegisterLayout& layout = state.layout();
  const std::size_t src_pos = layout.position_of(src);
  const std::size_t dst_pos = layout.position_of(dst);
  const std::int64_t dst_stride = layout.stride_at(dst_pos);
  Eigen::VectorXcd out(state.dim());
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    const std::int64_t s = layout.digit_at(src_pos, i);
    const std::int64_t d = layout.digit_at(dst_pos, i);
    const std::int64_t moved = i + (image(s, d) - d) * dst_stride;
    out(moved) = state.amplitudes()(i);
  }
  return StateVector(layout, std::move(out));
}

}  // namespace

// ---------------------------------------------------------------------------
// Database

Database::Database(int n, std::vector<std::uint8_t> records)
    : n_(n), records_(std::move(records)) {
  check_width(n_);
  const auto expected = std::int64_t{1} << n_;
  if (static_cast<std::int64_t>(records_.size()) != expected) {
    throw ValidationError("database with width " + std::to_string(n_) +
                          " needs " + std::to_string(expected) +
                          " records, got " + std::to_string(records_.size()));
  }
  for (std::size_t a = 0; a < records_.size(); ++a) {
    if (records_[a] > 1) {
      throw ValidationError("record " + std::to_string(a) +
                            " is not a bit (value " +
                            std::to_string(records_[a]) + ")");
    }
  }
  if (records_[0] != 0) {
    throw ValidationError("record 0 must hold the value 0; it is the fixed "
                          "reference record");
  }
}

Database Database::random(int n, std::uint64_t seed) {
  check_width(n);
  if (n > 30) {
    throw CapExceededError("random database generation is limited to n <= 30");
  }
  RandomSource rng(seed);
  const auto count = std::int64_t{1} << n;
  std::vector<std::uint8_t> records(static_cast<std::size_t>(count));
  records[0] = 0;
  for (std::int64_t a = 1; a < count; ++a) {
    records[static_cast<std::size_t>(a)] =
        static_cast<std::uint8_t>(rng.uniform_int(0, 1));
  }
  return Database(n, std::move(records));
}

Database Database::parse(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) {
    throw IoError(origin + ": missing header line");
  }
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header.rfind("n=", 0) != 0) {
    throw IoError(origin + ": header must look like n=<width>, got \"" +
                  header + "\"");
  }
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(header.substr(2), &used);
    if (used != header.size() - 2) throw std::invalid_argument(header);
  } catch (const std::exception&) {
    throw IoError(origin + ": cannot parse width from header \"" + header +
                  "\"");
  }
  check_width(n);
  std::string bits;
  if (!std::getline(in, bits)) {
    throw IoError(origin + ": missing record line");
  }
  if (!bits.empty() && bits.back() == '\r') bits.pop_back();
  const auto expected = std::int64_t{1} << n;
  if (static_cast<std::int64_t>(bits.size()) != expected) {
    throw IoError(origin + ": expected " + std::to_string(expected) +
                  " record characters, got " + std::to_string(bits.size()));
  }
  std::vector<std::uint8_t> records(static_cast<std::size_t>(expected));
  // Characters run from the most significant address down to record 0.
  for (std::int64_t c = 0; c < expected; ++c) {
    const char ch = bits[static_cast<std::size_t>(c)];
    const std::int64_t address = expected - 1 - c;
    if (ch != '0' && ch != '1') {
      throw IoError(origin + ": record " + std::to_string(address) +
                    " has invalid character '" + std::string(1, ch) + "'");
    }
    records[static_cast<std::size_t>(address)] =
        static_cast<std::uint8_t>(ch - '0');
  }
  if (records[0] != 0) {
    throw IoError(origin +
                  ": record 0 must be 0 (it is the fixed reference record)");
  }
  return Database(n, std::move(records));
}

std::string Database::serialize() const {
  std::string out = "n=" + std::to_string(n_) + "\n";
  out.reserve(out.size() + records_.size() + 1);
  for (std::int64_t a = size() - 1; a >= 0; --a) {
    out.push_back(static_cast<char>('0' + records_[static_cast<std::size_t>(a)]));
  }
  out.push_back('\n');
  return out;
}

Database Database::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open database file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void Database::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << serialize();
  if (!out) {
    throw IoError("failed while writing " + path.string());
  }
}

int Database::record(std::int64_t address) const {
  if (address < 0 || address >= size()) {
    throw ValidationError("address " + std::to_string(address) +
                          " out of range for database of size " +
                          std::to_string(size()));
  }
  return records_[static_cast<std::size_t>(address)];
}

// ---------------------------------------------------------------------------
// Oracle operations

namespace {

void check_oracle_registers(const StateVector& state, const Database& db,
                            const std::string& q, const std::string& r) {
  if (state.layout().dim_of(q) != db.size()) {
    throw DimensionError("register " + q + " has dimension " +
                         std::to_string(state.layout().dim_of(q)) +
                         " but the database has " + std::to_string(db.size()) +
                         " records");
  }
  if (state.layout().dim_of(r) != 2) {
    throw DimensionError("response register " + r + " must be a qubit");
  }
}

}  // namespace

StateVector oracle_direct(const StateVector& state, const Database& db,
                          const std::string& q, const std::string& r) {
  check_oracle_registers(state, db, q, r);
  return permute_register(state, q, r,
                          [&db](std::int64_t address, std::int64_t bit) {
                            return bit ^ db.record(address);
                          });
}

StateVector unary_encode(const StateVector& state, UnaryDirection,
                         const std::string& q, const std::string& p) {
  const std::int64_t qdim = state.layout().dim_of(q);
  if (state.layout().dim_of(p) != qdim) {
    throw DimensionError("pointer register " + p +
                         " must match the address register dimension " +
                         std::to_string(qdim));
  }
  return permute_register(
      state, q, p,
      [](std::int64_t address, std::int64_t pointer) { return pointer ^ address; });
}

StateVector bus_readout(const StateVector& state, const Database& db,
                        const std::string& q, const std::string& p,
                        const std::string& r) {
  check_oracle_registers(state, db, q, r);
  if (state.layout().dim_of(p) != db.size()) {
    throw DimensionError("pointer register " + p + " has dimension " +
                         std::to_string(state.layout().dim_of(p)) +
                         " but the database has " + std::to_string(db.size()) +
                         " records");
  }
  return permute_register(state, p, r,
                          [&db](std::int64_t pointer, std::int64_t bit) {
                            return bit ^ db.record(pointer);
                          });
}

StateVector oracle_via_unary(const StateVector& state, const Database& db,
                             const std::string& q, const std::string& r) {
  check_oracle_registers(state, db, q, r);
  if (state.layout().has("__ptr")) {
    throw ValidationError("state already carries a register labeled __ptr");
  }
  if (state.dim() > kMaxAdjoinedDim / db.size()) {
    throw CapExceededError(
        "adjoining the pointer register would exceed the supported dimension " +
        std::to_string(kMaxAdjoinedDim));
  }
  const RegisterLayout ptr_layout = RegisterLayout::single("__ptr", db.size());
  StateVector working = tensor(state, StateVector::basis(ptr_layout, 0));
  working = unary_encode(working, UnaryDirection::Forward, q, "__ptr");
  working = bus_readout(working, db, q, "__ptr", r);
  working = unary_encode(working, UnaryDirection::Reverse, q, "__ptr");

  // The pointer must come back clean before it can be dropped.
  const auto ptr_probs = outcome_distribution(working, "__ptr");
  double leak = 0.0;
  for (std::size_t v = 1; v < ptr_probs.size(); ++v) leak += ptr_probs[v];
  if (std::sqrt(leak) >= 1e-10) {
    throw Error("pointer register leaked amplitude " +
                std::to_string(std::sqrt(leak)) + " after decoding");
  }
  auto [collapsed, mass] = collapse_onto(working, "__ptr", 0);
  (void)mass;

  // The pointer was adjoined as the last (least significant) register, so
  // dropping its now-deterministic 0 digit is a strided slice.
  Eigen::VectorXcd amp(state.dim());
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    amp(i) = collapsed.amplitudes()(i * db.size());
  }
  return StateVector(state.layout(), std::move(amp));
}

GateCountReport gate_count(int n) {
  check_width(n);
  if (n >= 62) {
    throw CapExceededError("gate counts overflow 64-bit integers for n >= 62");
  }
  GateCountReport report;
  report.n = n;
  report.conventional_ops = (std::int64_t{1} << (n + 1)) - 2;
  report.addressing_ops = n;
  return report;
}

}  // namespace qpq
