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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rifl/util/rng.hpp"

namespace rifl::traffic {

enum class Pattern { bernoulli, bursty };
enum class SizeMode { fixed, variable };

std::string_view to_string(Pattern p);
std::string_view to_string(SizeMode m);
Pattern parse_pattern(std::string_view s);
SizeMode parse_size_mode(std::string_view s);

inline constexpr std::uint64_t kDefaultFlowBytes = 2621440;  // 2.5 MiB

struct TrafficConfig {
  Pattern pattern = Pattern::bernoulli;
  double load = 1.0;                 // offered cells per slot per source
  SizeMode size_mode = SizeMode::fixed;
  std::uint64_t per_flow_bytes = kDefaultFlowBytes;
  std::uint32_t fixed_packet_bytes = 256;
  std::uint32_t min_packet_bytes = 64;
  std::uint32_t max_packet_bytes = 2048;
  double mean_burst_bytes = 1024;
  std::uint64_t seed = 1;

  /// Throws a config error on out-of-range fields.
  void validate() const;
};

/// One cell offered by a source in one slot.
struct Arrival {
  unsigned dest = 0;             // index into the source's destination list
  std::uint16_t valid_bytes = 0;
  bool eop = false;
};

/// Fixed mode: the configured size. Variable mode: uniform in [min, max].
std::uint32_t draw_packet_size(const TrafficConfig& cfg, Rng& rng);

/// Counters kept by every source.
struct SourceStats {
  std::uint64_t slots = 0;
  std::uint64_t cells = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t packets = 0;
  std::uint64_t bursts = 0;
  std::uint64_t burst_cells = 0;
  std::int64_t first_slot = -1;
  std::int64_t last_slot = -1;
};

/// Traffic of one input: `destinations` flows of per_flow_bytes each.
///
/// Bernoulli: every slot, with probability `load`, one cell is offered. A
/// cell continues the packet in progress; otherwise a new packet starts
/// toward a uniformly chosen destination that still has volume.
///
/// Bursty: busy periods alternate with idle periods. A busy period sends
/// cells back to back toward one uniformly chosen destination. Its payload
/// is geometric with mean mean_burst_bytes (a geometric cell count with mean
/// mean_burst_bytes / 256 in fixed mode; split into variable-size packets
/// otherwise). An idle period after a burst of b cells is geometric with
/// mean b (1 - load) / load, so busy / (busy + idle) = load.
///
/// The last packet of a flow is cut to the remaining volume.
class Source {
 public:
  Source(const TrafficConfig& cfg, unsigned destinations, Rng rng);

  /// Advances one slot.
  std::optional<Arrival> step();

  bool exhausted() const { return live_.empty() && !in_packet() && burst_left_ == 0; }
  std::uint64_t remaining(unsigned dest) const { return remaining_.at(dest); }
  const SourceStats& stats() const { return stats_; }
  unsigned destinations() const { return static_cast<unsigned>(remaining_.size()); }

 private:
  bool in_packet() const { return packet_left_ > 0; }
  void start_packet(unsigned dest, std::uint64_t max_bytes);
  Arrival next_cell();
  void retire_if_empty(unsigned dest);
  unsigned pick_destination();

  TrafficConfig cfg_;
  Rng rng_;
  std::vector<std::uint64_t> remaining_;  // bytes not yet assigned to packets
  std::vector<unsigned> live_;            // destinations with remaining bytes
  std::vector<unsigned> live_pos_;

  unsigned cur_dest_ = 0;
  std::uint32_t packet_left_ = 0;  // bytes of the packet in progress

  // bursty
  std::uint64_t burst_left_ = 0;   // payload bytes left in this burst
  std::uint64_t burst_cells_ = 0;
  std::uint64_t idle_left_ = 0;

  SourceStats stats_;
};

/// Per-arrival CSV record writer (slot,src,dst,bytes,eop).
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& os);
  void write(std::uint64_t slot, unsigned src, unsigned dst, const Arrival& a);

 private:
  std::ostream& os_;
};

}  // namespace rifl::traffic
