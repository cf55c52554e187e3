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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rifl/l2/codec.hpp"
#include "rifl/util/rng.hpp"

namespace rifl::link {

enum class FrameKind : std::uint8_t {
  idle,
  data,
  rereq,    // retransmission request; seq carries the receiver's expected seq
  redata,   // replay of an earlier data or flow-control frame
  flowctl,  // stand-alone per-VOQ flow-control frame
  control,  // opaque frame of the post-replay control phase
};

std::string_view to_string(FrameKind kind);

/// One frame may pause one channel and unpause another at the same time.
struct FlowControlPayload {
  bool on_valid = false;
  std::uint16_t on_channel = 0;
  bool off_valid = false;
  std::uint16_t off_channel = 0;

  bool empty() const { return !on_valid && !off_valid; }
  bool operator==(const FlowControlPayload&) const = default;
};

/// A link-layer frame. Sequenced frames (data, flowctl and their replays)
/// carry their own sequence number; idle and control frames carry the
/// sender's next sequence number so a requesting receiver can tell that
/// nothing was lost. A rereq carries the requested seq in `seq` and the
/// sender's next sequence number in `next`.
template <class Payload>
struct Frame {
  FrameKind kind = FrameKind::idle;
  std::uint32_t seq = 0;
  std::uint32_t next = 0;
  std::optional<Payload> cell;
  std::optional<FlowControlPayload> fc;
  bool corrupted = false;

  bool sequenced() const {
    return kind == FrameKind::data || kind == FrameKind::redata ||
           kind == FrameKind::flowctl;
  }
};

struct LinkConfig {
  unsigned one_way_delay = 1;   // cell times, a -> b
  unsigned return_delay = 0;    // cell times, b -> a; 0 means same as one_way_delay
  double ber = 0.0;
  unsigned frame_bits = l2::kFrameBytes * 8;

  unsigned forward() const { return one_way_delay; }
  unsigned backward() const { return return_delay ? return_delay : one_way_delay; }
  unsigned rtt() const { return forward() + backward(); }

  /// Splits an RTT into two integral one-way delays (ceil one way, floor back).
  static LinkConfig with_rtt(unsigned rtt, double ber = 0.0) {
    LinkConfig c;
    c.one_way_delay = (rtt + 1) / 2;
    c.return_delay = rtt / 2;
    c.ber = ber;
    return c;
  }
};

/// Probability that a frame of `bits` bits sees at least one bit error.
inline double corruption_probability(double ber, unsigned bits) {
  if (ber <= 0.0) return 0.0;
  if (ber >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(bits) * std::log1p(-ber));
}

/// Applies channel noise to one frame. Frames are never dropped or reordered.
template <class Payload>
Frame<Payload> channel_step(Frame<Payload> frame, double corrupt_p, Rng& rng) {
  if (corrupt_p > 0.0 && rng.bernoulli(corrupt_p)) frame.corrupted = true;
  return frame;
}

template <class Payload>
Frame<Payload> channel_step(Frame<Payload> frame, const LinkConfig& cfg,
                            Rng& rng) {
  return channel_step(std::move(frame),
                      corruption_probability(cfg.ber, cfg.frame_bits), rng);
}

}  // namespace rifl::link
