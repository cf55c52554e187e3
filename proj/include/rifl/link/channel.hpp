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
#include <set>
#include <vector>

#include "rifl/error.hpp"
#include "rifl/link/frame.hpp"

namespace rifl::link {

/// One direction of a point-to-point link: a fixed delay line that may
/// corrupt frames. Exactly one frame enters and one leaves per cell time.
///
/// Within a slot the receiver reads `arriving()` before the sender calls
/// `emit()`; a frame emitted at slot t arrives at slot t + delay.
template <class Payload>
class Channel {
 public:
  using FrameT = Frame<Payload>;

  Channel(unsigned delay, double corrupt_p, std::uint64_t seed)
      : ring_(delay), corrupt_p_(corrupt_p), rng_(seed) {
    if (delay == 0) throw Error(ErrorKind::config, "channel delay must be >= 1");
  }

  const FrameT& arriving() const { return ring_[head_]; }

  void emit(FrameT frame) {
    bool forced = false;
    if (!forced_.empty() && *forced_.begin() <= slot_) {
      forced = *forced_.begin() == slot_;
      forced_.erase(forced_.begin());
    }
    if (forced || (corrupt_p_ > 0.0 && rng_.bernoulli(corrupt_p_))) frame.corrupted = true;
    if (frame.corrupted) ++corrupted_;
    ring_[head_] = std::move(frame);
    last_ = head_;
    if (++head_ == ring_.size()) head_ = 0;
    ++slot_;
  }

  /// Corrupts whatever frame is emitted at `slot`.
  void force_corrupt(std::uint64_t slot) { forced_.insert(slot); }

  void set_corrupt_probability(double p) { corrupt_p_ = p; }
  double corrupt_probability() const { return corrupt_p_; }

  /// Most recently emitted frame.
  const FrameT& last() const { return ring_[last_]; }

  unsigned delay() const { return static_cast<unsigned>(ring_.size()); }
  std::uint64_t corrupted_count() const { return corrupted_; }
  std::uint64_t slot() const { return slot_; }

 private:
  std::vector<FrameT> ring_;
  std::size_t head_ = 0;
  std::size_t last_ = 0;
  double corrupt_p_;
  Rng rng_;
  std::set<std::uint64_t> forced_;
  std::uint64_t slot_ = 0;
  std::uint64_t corrupted_ = 0;
};

}  // namespace rifl::link
