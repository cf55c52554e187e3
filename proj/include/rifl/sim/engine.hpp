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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rifl/l2/codec.hpp"
#include "rifl/link/duplex.hpp"
#include "rifl/sim/metrics.hpp"
#include "rifl/sim/topology.hpp"
#include "rifl/traffic/traffic.hpp"
#include "rifl/voq/bank.hpp"

namespace rifl::sim {

/// What the engine moves around: the header and bookkeeping of a cell. The
/// 256 payload bytes are never materialized.
struct CellDesc {
  std::int64_t inject = -1;  // slot the cell left its source's link interface
  std::uint32_t flow_seq = 0;
  std::uint16_t src = 0;
  std::uint16_t dst = 0;
  std::uint16_t valid_bytes = l2::kCellPayloadBytes;
  bool eop = true;
  l2::L2Header hdr;
};

/// How an endpoint picks the next cell among its per-destination queues:
/// oldest unpaused cell, round robin over unpaused queues, or strict
/// generation order (a paused head blocks the endpoint).
enum class EndpointOrder { oldest, round_robin, fifo };

std::string_view to_string(EndpointOrder o);
EndpointOrder parse_endpoint_order(std::string_view s);

struct SimParams {
  std::string name;
  /// Latency of everything except VOQ wait and scheduling: link propagation
  /// both ways plus a constant switch pipeline. The minimum one-hop latency
  /// is this plus one scheduling slot.
  unsigned fixed_path_latency = 17;
  double cell_time_ns = 20.0;
  std::uint64_t seed = 1;
  unsigned voq_capacity = 0;   // 0: required capacity for the largest RTT, plus margin
  unsigned on_threshold = 0;   // 0: default placement
  unsigned off_threshold = 0;  // used only with on_threshold
  unsigned egress_slack = 2;   // extra egress FIFO cells beyond the pipeline
  EndpointOrder endpoint_order = EndpointOrder::oldest;
  std::uint64_t max_slots = 0; // 0: unlimited
  std::uint64_t stall_slots = 200000;
};

using DeliveryHook = std::function<void(const CellDesc&, std::uint64_t slot)>;

/// Slotted simulation of endpoints, links and switches.
///
/// Order within one slot:
///   1. traffic sources offer cells into per-destination send queues;
///   2. every link delivers the frames arriving this slot (cells into VOQs
///      with pause events queued back upstream; cells at endpoints are
///      checked and their latency recorded);
///   3. every switch schedules (iSLIP through the Batcher-Banyan fabric, or
///      SAFC) and moves granted cells into egress pipelines, queueing
///      unpause events;
///   4. every link end emits one frame: endpoints pick a cell by
///      `endpoint_order`, switch ports send the oldest ready egress cell.
class Engine {
 public:
  Engine(Topology topology, std::optional<traffic::TrafficConfig> traffic, SimParams params);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Queues a packet at `src` now (segmented into cells).
  void inject_packet(unsigned src, unsigned dst, std::uint32_t bytes);
  void set_delivery_hook(DeliveryHook hook);
  void apply_faults(unsigned link, const std::vector<link::FaultEvent>& faults);

  bool done() const;
  void step();
  MetricsReport run();
  MetricsReport report() const;

  std::uint64_t slot() const;
  const LatencyHistogram& latency() const;
  unsigned voq_capacity() const;
  voq::Thresholds thresholds() const;
  unsigned pipeline() const;
  const Topology& topology() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MetricsReport run(const Topology& topology, const traffic::TrafficConfig& traffic,
                  const SimParams& params);

}  // namespace rifl::sim
