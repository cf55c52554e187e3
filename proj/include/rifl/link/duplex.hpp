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
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "rifl/link/channel.hpp"
#include "rifl/link/endpoint.hpp"

namespace rifl::link {

enum class Direction { a_to_b, b_to_a };

struct FaultEvent {
  Direction direction = Direction::a_to_b;
  std::uint64_t slot = 0;
  bool force_corrupt = true;

  bool operator==(const FaultEvent&) const = default;
};

/// Fault-injection schedule, one event per line:
///
///   # comment
///   <ab|ba> <cell-time> [force-corrupt 0|1, default 1]
std::vector<FaultEvent> parse_fault_schedule(std::istream& in);
std::vector<FaultEvent> load_fault_schedule(const std::string& path);

/// Two endpoints joined by a channel in each direction. The a -> b channel
/// uses the config's forward delay and b -> a the backward delay.
template <class Payload>
class DuplexLink {
 public:
  using EndpointT = Endpoint<Payload>;
  using FrameT = Frame<Payload>;
  using Delivery = typename EndpointT::Delivery;

  DuplexLink(const LinkConfig& cfg, std::uint64_t seed, unsigned channels_a = 0,
             unsigned channels_b = 0)
      : a_(cfg.rtt(), channels_a),
        b_(cfg.rtt(), channels_b),
        ab_(cfg.forward(), corruption_probability(cfg.ber, cfg.frame_bits),
            Rng::splitmix64(seed ^ 0xA5A5A5A5ULL)),
        ba_(cfg.backward(), corruption_probability(cfg.ber, cfg.frame_bits),
            Rng::splitmix64(seed ^ 0x5A5A5A5AULL)) {}

  EndpointT& a() { return a_; }
  EndpointT& b() { return b_; }
  const EndpointT& a() const { return a_; }
  const EndpointT& b() const { return b_; }
  Channel<Payload>& a_to_b() { return ab_; }
  Channel<Payload>& b_to_a() { return ba_; }

  void apply(const std::vector<FaultEvent>& faults) {
    for (const FaultEvent& f : faults) {
      if (!f.force_corrupt) continue;
      (f.direction == Direction::a_to_b ? ab_ : ba_).force_corrupt(f.slot);
    }
  }

  /// Receive phase: returns what arrived at a and at b this slot.
  std::pair<Delivery, Delivery> receive() {
    Delivery at_a = a_.receive(ba_.arriving());
    Delivery at_b = b_.receive(ab_.arriving());
    return {std::move(at_a), std::move(at_b)};
  }

  /// Transmit phase. Offered data is ignored (and reported as not consumed)
  /// when the corresponding endpoint cannot send data.
  std::pair<bool, bool> transmit(std::optional<Payload> from_a,
                                 std::optional<Payload> from_b) {
    const bool ca = from_a.has_value() && a_.can_send_data();
    const bool cb = from_b.has_value() && b_.can_send_data();
    ab_.emit(a_.transmit(ca ? std::move(from_a) : std::nullopt));
    ba_.emit(b_.transmit(cb ? std::move(from_b) : std::nullopt));
    return {ca, cb};
  }

  /// Frames emitted in the most recent transmit phase (after noise).
  const FrameT& last_sent_ab() const { return ab_.last(); }
  const FrameT& last_sent_ba() const { return ba_.last(); }

 private:
  EndpointT a_;
  EndpointT b_;
  Channel<Payload> ab_;
  Channel<Payload> ba_;
};

}  // namespace rifl::link
