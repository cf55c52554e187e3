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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "rifl/error.hpp"
#include "rifl/link/frame.hpp"

namespace rifl::link {

struct EndpointStats {
  std::uint64_t data_sent = 0;
  std::uint64_t redata_sent = 0;
  std::uint64_t rereq_sent = 0;
  std::uint64_t control_sent = 0;
  std::uint64_t flowctl_sent = 0;
  std::uint64_t idle_sent = 0;
  std::uint64_t cycles = 0;
  std::uint64_t errors_detected = 0;
  std::uint64_t discarded = 0;
  std::uint64_t delivered = 0;
  std::uint64_t fc_events_sent = 0;
  std::uint64_t fc_cancelled = 0;
};

/// One side of a RIFL link: the NAK-only retransmission state machine plus
/// the per-channel pause bits set by the peer's flow-control frames.
///
/// Receiver: a corrupted frame (or a sequence gap) puts the receiver into
/// the requesting state; from the next emitted frame on it sends rereq frames
/// carrying its expected sequence number until that frame arrives intact.
///
/// Sender: the first rereq starts a retransmission cycle of ceil(2.5 RTT)
/// slots. The first RTT+1 slots replay every sequenced frame from the
/// requested number on; the rest are control frames (or rereqs, when this
/// side is itself requesting). A rereq that arrives RTT or more slots into
/// the cycle means the peer is still missing data, and the cycle restarts
/// when it ends. No new data leaves during a cycle.
///
/// Call order per cell time: receive(), then transmit().
template <class Payload>
class Endpoint {
 public:
  using FrameT = Frame<Payload>;

  enum class Mode { normal, requesting_retx, retransmitting };

  struct Delivery {
    std::optional<Payload> cell;
    std::optional<FlowControlPayload> fc;
  };

  struct StepResult {
    FrameT emitted;
    Delivery delivered;
    bool consumed = false;
  };

  explicit Endpoint(unsigned rtt, unsigned channels = 0)
      : rtt_(rtt),
        replay_min_(rtt + 1),
        cycle_slots_((5 * rtt + 1) / 2),
        history_cap_(8 * rtt + 32),
        paused_((channels + 63) / 64, 0),
        channels_(channels) {
    if (rtt < 2) throw Error(ErrorKind::config, "link RTT must be >= 2");
  }

  unsigned rtt() const { return rtt_; }
  unsigned cycle_slots() const { return cycle_slots_; }

  Mode mode() const {
    if (retransmitting_) return Mode::retransmitting;
    if (requesting_) return Mode::requesting_retx;
    return Mode::normal;
  }

  bool can_send_data() const { return !retransmitting_ && !requesting_; }

  Delivery receive(const FrameT& in) {
    if (in.corrupted) {
      enter_requesting();
      return {};
    }
    switch (in.kind) {
      case FrameKind::idle:
      case FrameKind::control:
        if (requesting_ && in.seq == expected_) requesting_ = false;
        return {};
      case FrameKind::rereq:
        on_rereq(in.seq);
        // Two requesting sides only send rereqs to each other, so these
        // must also clear a request that has nothing left to wait for.
        if (requesting_ && in.next == expected_) requesting_ = false;
        return {};
      case FrameKind::data:
      case FrameKind::redata:
      case FrameKind::flowctl:
        break;
    }
    if (in.seq != expected_) {
      ++stats_.discarded;
      if (in.seq > expected_) enter_requesting();
      return {};
    }
    ++expected_;
    requesting_ = false;
    Delivery d{in.cell, in.fc};
    if (d.fc) apply_flow_control(*d.fc);
    if (d.cell) ++stats_.delivered;
    return d;
  }

  /// `data` must be empty unless can_send_data() holds.
  FrameT transmit(std::optional<Payload> data = std::nullopt) {
    if (data && !can_send_data())
      throw Error(ErrorKind::invalid_input, "data offered while link is paused");
    if (retransmitting_) return transmit_cycle();
    if (requesting_) return make_rereq();

    if (data || flow_control_pending()) {
      FrameT f;
      f.kind = data ? FrameKind::data : FrameKind::flowctl;
      f.seq = next_seq_++;
      f.cell = std::move(data);
      if (flow_control_pending()) f.fc = take_fc();
      if (f.cell) ++stats_.data_sent; else ++stats_.flowctl_sent;
      history_.push_back(f);
      if (history_.size() > history_cap_) history_.pop_front();
      return f;
    }
    ++stats_.idle_sent;
    FrameT f;
    f.kind = FrameKind::idle;
    f.seq = next_seq_;
    return f;
  }

  StepResult step(const FrameT& in, std::optional<Payload> data) {
    StepResult r;
    r.delivered = receive(in);
    r.consumed = data.has_value() && can_send_data();
    r.emitted = transmit(r.consumed ? std::move(data) : std::nullopt);
    return r;
  }

  /// Queues a pause (true) or unpause (false) event for `channel`, to be sent
  /// to the peer on the next opportunity. An event that meets a still-pending
  /// event of the opposite polarity for the same channel cancels it: the peer
  /// keeps the state it already has.
  void queue_flow_control(std::uint16_t channel, bool pause) {
    if (channel >= fc_state_.size()) fc_state_.resize(channel + 1u, 0);
    std::int8_t& st = fc_state_[channel];
    if (st == (pause ? -1 : 1)) {
      auto& q = pause ? fc_off_ : fc_on_;
      q.erase(std::find(q.begin(), q.end(), channel));
      st = 0;
      ++stats_.fc_cancelled;
      return;
    }
    (pause ? fc_on_ : fc_off_).push_back(channel);
    st = pause ? 1 : -1;
  }

  bool flow_control_pending() const { return !fc_on_.empty() || !fc_off_.empty(); }

  void apply_flow_control(const FlowControlPayload& p) {
    if ((p.on_valid && p.on_channel >= channels_) ||
        (p.off_valid && p.off_channel >= channels_))
      throw Error(ErrorKind::config, "flow-control channel out of range (" +
                                         std::to_string(channels_) +
                                         " channels)");
    if (p.on_valid) paused_[p.on_channel / 64] |= bit(p.on_channel);
    if (p.off_valid) paused_[p.off_channel / 64] &= ~bit(p.off_channel);
  }

  bool paused(unsigned channel) const {
    return channel < channels_ && (paused_[channel / 64] & bit(channel)) != 0;
  }

  /// Pause bits for channels [64 * word, 64 * word + 63].
  std::uint64_t paused_word(unsigned word = 0) const {
    return word < paused_.size() ? paused_[word] : 0;
  }

  unsigned channels() const { return channels_; }
  std::uint32_t next_seq() const { return next_seq_; }
  std::uint32_t expected_seq() const { return expected_; }
  const EndpointStats& stats() const { return stats_; }

 private:
  static std::uint64_t bit(unsigned ch) { return std::uint64_t{1} << (ch % 64); }

  void enter_requesting() {
    if (!requesting_) {
      requesting_ = true;
      ++stats_.errors_detected;
    }
  }

  FrameT make_rereq() {
    ++stats_.rereq_sent;
    FrameT f;
    f.kind = FrameKind::rereq;
    f.seq = expected_;
    f.next = next_seq_;
    return f;
  }

  // Oldest pending pause plus oldest pending unpause; no channel ever has
  // both pending, so the two never name the same channel.
  FlowControlPayload take_fc() {
    FlowControlPayload p;
    if (!fc_on_.empty()) {
      p.on_valid = true;
      p.on_channel = fc_on_.front();
      fc_state_[p.on_channel] = 0;
      fc_on_.pop_front();
      ++stats_.fc_events_sent;
    }
    if (!fc_off_.empty()) {
      p.off_valid = true;
      p.off_channel = fc_off_.front();
      fc_state_[p.off_channel] = 0;
      fc_off_.pop_front();
      ++stats_.fc_events_sent;
    }
    return p;
  }

  void on_rereq(std::uint32_t requested) {
    if (!retransmitting_) {
      start_cycle(requested);
    } else if (phase_ >= rtt_) {
      late_rereq_ = true;
      late_seq_ = requested;
    }
  }

  void start_cycle(std::uint32_t requested) {
    ++stats_.cycles;
    retransmitting_ = true;
    late_rereq_ = false;
    phase_ = 0;
    replay_next_ = std::min(requested, next_seq_);
    if (replay_next_ < next_seq_ &&
        (history_.empty() || replay_next_ < history_.front().seq))
      throw Error(ErrorKind::replay_window,
                  "seq " + std::to_string(requested) + " no longer buffered");
    const unsigned count = next_seq_ - replay_next_;
    const unsigned replay_slots = std::max(replay_min_, count);
    cycle_len_ = replay_slots + (cycle_slots_ - replay_min_);
    replay_slots_ = replay_slots;
  }

  FrameT transmit_cycle() {
    FrameT f;
    if (phase_ < replay_slots_ && replay_next_ < next_seq_) {
      f = history_[replay_next_ - history_.front().seq];
      f.kind = FrameKind::redata;
      ++replay_next_;
      ++stats_.redata_sent;
    } else if (requesting_) {
      f = make_rereq();
    } else {
      f.kind = FrameKind::control;
      f.seq = next_seq_;
      ++stats_.control_sent;
    }
    if (++phase_ == cycle_len_) {
      if (late_rereq_) {
        start_cycle(late_seq_);
      } else {
        retransmitting_ = false;
      }
    }
    return f;
  }

  unsigned rtt_;
  unsigned replay_min_;
  unsigned cycle_slots_;
  std::size_t history_cap_;

  // transmit side
  std::uint32_t next_seq_ = 0;
  std::deque<FrameT> history_;
  bool retransmitting_ = false;
  unsigned phase_ = 0;
  unsigned cycle_len_ = 0;
  unsigned replay_slots_ = 0;
  std::uint32_t replay_next_ = 0;
  bool late_rereq_ = false;
  std::uint32_t late_seq_ = 0;
  std::deque<std::uint16_t> fc_on_;
  std::deque<std::uint16_t> fc_off_;
  std::vector<std::int8_t> fc_state_;  // 1 pause pending, -1 unpause pending

  // receive side
  std::uint32_t expected_ = 0;
  bool requesting_ = false;

  std::vector<std::uint64_t> paused_;
  unsigned channels_;
  EndpointStats stats_;
};

}  // namespace rifl::link
