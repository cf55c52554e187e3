/*
 * Copyright 2026 The RIFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace rifl::sched {

/// N x N request bits, one 64-bit row per input (N <= 64).
class RequestMatrix {
 public:
  explicit RequestMatrix(unsigned ports) : rows_(ports, 0) {}

  /// Throws invalid-input unless `bits` is square with a false diagonal.
  static RequestMatrix from_bools(const std::vector<std::vector<bool>>& bits);

  unsigned ports() const { return static_cast<unsigned>(rows_.size()); }
  void set(unsigned input, unsigned output, bool on = true) {
    const std::uint64_t b = std::uint64_t{1} << output;
    rows_[input] = on ? (rows_[input] | b) : (rows_[input] & ~b);
  }
  bool get(unsigned input, unsigned output) const {
    return (rows_[input] >> output) & 1;
  }
  std::uint64_t row(unsigned input) const { return rows_[input]; }
  std::span<const std::uint64_t> rows() const { return rows_; }
  std::span<std::uint64_t> rows() { return rows_; }

 private:
  std::vector<std::uint64_t> rows_;
};

/// Partial input -> output mapping, injective both ways.
struct Matching {
  std::vector<int> output_of_input;
  std::vector<int> input_of_output;

  explicit Matching(unsigned ports = 0)
      : output_of_input(ports, -1), input_of_output(ports, -1) {}

  unsigned ports() const { return static_cast<unsigned>(output_of_input.size()); }
  void clear();
  void add(unsigned input, unsigned output);
  unsigned size() const;

  /// True iff injective and every pair is a pending request.
  bool valid_for(const RequestMatrix& req) const;
};

/// First set bit of `mask` at or after `from`, wrapping; mask must be nonzero.
inline unsigned round_robin_pick(std::uint64_t mask, unsigned from) {
  const std::uint64_t hi = from < 64 ? mask & (~std::uint64_t{0} << from) : 0;
  return static_cast<unsigned>(std::countr_zero(hi ? hi : mask));
}

}  // namespace rifl::sched
