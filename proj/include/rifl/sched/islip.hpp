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

#include <cstdint>
#include <span>
#include <vector>

#include "rifl/sched/matching.hpp"

namespace rifl::sched {

/// Iterations a hardware scheduler completes within one 256-byte cell time:
/// three up to 32 ports, one at 64.
unsigned default_iterations(unsigned ports);

/// iSLIP request-grant-accept matching with round-robin grant (per output)
/// and accept (per input) pointers. Pointers move one past the matched
/// partner only for matches made in the first iteration; later iterations
/// only fill in unmatched inputs and outputs.
class Islip {
 public:
  Islip(unsigned ports, unsigned iterations);

  unsigned ports() const { return ports_; }
  unsigned iterations() const { return iterations_; }

  /// Validates the request matrix and returns a matching.
  Matching schedule(const RequestMatrix& requests);

  /// Hot path: rows are per-input request masks; self-requests must already
  /// be absent.
  void schedule_into(std::span<const std::uint64_t> rows, Matching& out);

  const std::vector<unsigned>& grant_pointers() const { return grant_; }
  const std::vector<unsigned>& accept_pointers() const { return accept_; }
  void set_pointers(std::vector<unsigned> grant, std::vector<unsigned> accept);

 private:
  unsigned ports_;
  unsigned iterations_;
  std::vector<unsigned> grant_;
  std::vector<unsigned> accept_;
  std::vector<std::uint64_t> cols_;
  std::vector<std::uint64_t> grants_to_;
};

/// Output-side arbiter of the statically allocated, fully connected switch:
/// every (input, output) pair owns a queue, so each output independently
/// serves one nonempty queue per slot.
class SafcArbiter {
 public:
  explicit SafcArbiter(unsigned ports);

  /// rows[i] bit o set iff queue (i, o) is nonempty. Returns the selected
  /// input per output, -1 when none.
  std::vector<int> arbitrate(std::span<const std::uint64_t> rows);
  void arbitrate_into(std::span<const std::uint64_t> rows, std::vector<int>& out);

  /// Same as arbitrate, from an occupancy matrix.
  std::vector<int> arbitrate(const std::vector<std::vector<unsigned>>& occupancy);

  const std::vector<unsigned>& pointers() const { return ptr_; }

 private:
  unsigned ports_;
  std::vector<unsigned> ptr_;
  std::vector<std::uint64_t> cols_;
};

}  // namespace rifl::sched
