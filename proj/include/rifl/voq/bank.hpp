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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rifl/error.hpp"
#include "rifl/link/frame.hpp"

namespace rifl::voq {

using link::FlowControlPayload;

struct Thresholds {
  unsigned on = 0;
  unsigned off = 0;
};

struct Capacity {
  unsigned cells_per_channel = 0;
  std::uint64_t bytes_per_channel = 0;
  std::uint64_t bytes_per_port = 0;
  std::uint64_t bytes_total = 0;
};

/// Buffer needed so every channel can absorb 1.5 RTT of line-rate traffic
/// (one cell per cell time) after it asks the sender to pause.
Capacity required_capacity(double rtt_cells, unsigned ports);

/// With the pause sent in the same slot as the crossing, at most rtt - 1
/// further cells can be in flight toward the channel, so any ON threshold up
/// to capacity - rtt - margin is safe. The default pauses at half of that
/// headroom (at least 1) and unpauses at half of the ON threshold.
Thresholds default_thresholds(unsigned capacity, unsigned rtt, unsigned margin = 0);

/// Statically allocated multi-queue for one switch input. Channel ids are the
/// relative selectors of the forwarding rule, so a bank at `ingress` has
/// ports - 1 channels and never holds a loopback queue.
template <class T>
class Bank {
 public:
  Bank(unsigned ports, unsigned ingress, unsigned capacity, Thresholds th)
      : ports_(ports),
        ingress_(ingress),
        capacity_(capacity),
        th_(th),
        store_(static_cast<std::size_t>(ports - 1) * capacity),
        head_(ports - 1, 0),
        count_(ports - 1, 0),
        fc_on_(ports - 1, false) {
    if (ports < 2 || ports > 64)
      throw Error(ErrorKind::config, "VOQ bank supports 2..64 ports");
    if (ingress >= ports) throw Error(ErrorKind::config, "ingress out of range");
    if (!(th.off < th.on && th.on <= capacity))
      throw Error(ErrorKind::config,
                  "thresholds must satisfy off < on <= capacity (off=" +
                      std::to_string(th.off) + " on=" + std::to_string(th.on) +
                      " capacity=" + std::to_string(capacity) + ")");
  }

  unsigned ports() const { return ports_; }
  unsigned channels() const { return ports_ - 1; }
  unsigned capacity() const { return capacity_; }
  Thresholds thresholds() const { return th_; }
  unsigned ingress() const { return ingress_; }

  unsigned output_of(unsigned channel) const {
    return channel < ingress_ ? channel : channel + 1;
  }
  unsigned channel_of(unsigned output) const {
    return output < ingress_ ? output : output - 1;
  }

  unsigned occupancy(unsigned channel) const { return count_.at(channel); }
  bool empty(unsigned channel) const { return count_[channel] == 0; }

  const T& head(unsigned channel) const {
    if (count_.at(channel) == 0)
      throw Error(ErrorKind::voq_underflow, "head of empty channel");
    return store_[slot(channel, head_[channel])];
  }

  /// Returns a pause event iff occupancy just went above the on threshold.
  std::optional<FlowControlPayload> enqueue(unsigned channel, T cell) {
    check_channel(channel);
    unsigned& n = count_[channel];
    if (n >= capacity_)
      throw Error(ErrorKind::voq_overflow,
                  "input " + std::to_string(ingress_) + " channel " +
                      std::to_string(channel) + " at capacity " +
                      std::to_string(capacity_));
    store_[slot(channel, head_[channel] + n)] = std::move(cell);
    ++n;
    requests_ |= std::uint64_t{1} << output_of(channel);
    if (n == th_.on + 1 && !fc_on_[channel]) {
      fc_on_[channel] = true;
      ++on_events_;
      FlowControlPayload p;
      p.on_valid = true;
      p.on_channel = static_cast<std::uint16_t>(channel);
      return p;
    }
    return std::nullopt;
  }

  /// Returns an unpause event iff a paused channel just drained to the off
  /// threshold.
  std::pair<T, std::optional<FlowControlPayload>> dequeue(unsigned channel) {
    check_channel(channel);
    unsigned& n = count_[channel];
    if (n == 0)
      throw Error(ErrorKind::voq_underflow,
                  "input " + std::to_string(ingress_) + " channel " +
                      std::to_string(channel) + " is empty");
    T cell = std::move(store_[slot(channel, head_[channel])]);
    head_[channel] = (head_[channel] + 1) % capacity_;
    --n;
    if (n == 0) requests_ &= ~(std::uint64_t{1} << output_of(channel));
    std::optional<FlowControlPayload> ev;
    if (n == th_.off && fc_on_[channel]) {
      fc_on_[channel] = false;
      ++off_events_;
      FlowControlPayload p;
      p.off_valid = true;
      p.off_channel = static_cast<std::uint16_t>(channel);
      ev = p;
    }
    return {std::move(cell), ev};
  }

  /// Bit k set iff the channel toward output k is nonempty.
  std::uint64_t request_mask() const { return requests_; }

  std::vector<bool> request_vector() const {
    std::vector<bool> v(ports_);
    for (unsigned k = 0; k < ports_; ++k) v[k] = (requests_ >> k) & 1;
    return v;
  }

  bool paused_upstream(unsigned channel) const { return fc_on_.at(channel); }
  std::uint64_t on_events() const { return on_events_; }
  std::uint64_t off_events() const { return off_events_; }

  std::size_t total_occupancy() const {
    std::size_t s = 0;
    for (unsigned n : count_) s += n;
    return s;
  }

 private:
  std::size_t slot(unsigned channel, unsigned index) const {
    return static_cast<std::size_t>(channel) * capacity_ + index % capacity_;
  }
  void check_channel(unsigned channel) const {
    if (channel >= ports_ - 1)
      throw Error(ErrorKind::invalid_input,
                  "channel " + std::to_string(channel) + " out of range");
  }

  unsigned ports_;
  unsigned ingress_;
  unsigned capacity_;
  Thresholds th_;
  std::vector<T> store_;
  std::vector<unsigned> head_;
  std::vector<unsigned> count_;
  std::vector<bool> fc_on_;
  std::uint64_t requests_ = 0;
  std::uint64_t on_events_ = 0;
  std::uint64_t off_events_ = 0;
};

}  // namespace rifl::voq
