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

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "rifl/error.hpp"
#include "rifl/sim/engine.hpp"

using namespace rifl;
using namespace rifl::sim;

namespace {

Topology star(unsigned ports, SchedulerKind s = SchedulerKind::islip, double ber = 0.0) {
  return Topology::star(ports, s, 0, link::LinkConfig::with_rtt(15, ber));
}

traffic::TrafficConfig traffic_for(double load, std::uint64_t volume,
                                   traffic::Pattern p = traffic::Pattern::bernoulli) {
  traffic::TrafficConfig t;
  t.pattern = p;
  t.load = load;
  t.per_flow_bytes = volume;
  return t;
}

}  // namespace

TEST_CASE("a lone cell crosses an idle switch in 18 cell times") {
  for (SchedulerKind s : {SchedulerKind::islip, SchedulerKind::safc}) {
    Engine e(star(32, s), std::nullopt, SimParams{});
    e.inject_packet(3, 17, l2::kCellPayloadBytes);
    const MetricsReport r = e.run();
    CHECK(r.cells_delivered == 1);
    CHECK(r.latency.front() == 18);
    CHECK(r.latency.back() == 18);
  }
}

TEST_CASE("no traffic finishes at once with no deliveries") {
  Engine e(star(8), std::nullopt, SimParams{});
  CHECK(e.done());
  const MetricsReport r = e.run();
  CHECK(r.cells_delivered == 0);
}

TEST_CASE("cells to distinct outputs leave in the same slot") {
  Engine e(star(4), std::nullopt, SimParams{});
  std::vector<std::uint64_t> slots;
  std::set<unsigned> outs;
  e.set_delivery_hook([&](const CellDesc& c, std::uint64_t slot) {
    slots.push_back(slot);
    outs.insert(c.dst);
  });
  for (unsigned s = 0; s < 4; ++s) e.inject_packet(s, (s + 1) % 4, l2::kCellPayloadBytes);
  const MetricsReport r = e.run();
  REQUIRE(slots.size() == 4);
  CHECK(outs.size() == 4);
  for (std::uint64_t t : slots) CHECK(t == slots.front());
  CHECK(r.latency.back() == 18);
}

TEST_CASE("two cells for one output are serialized") {
  Engine e(star(4), std::nullopt, SimParams{});
  std::vector<std::uint64_t> slots;
  e.set_delivery_hook([&](const CellDesc&, std::uint64_t slot) { slots.push_back(slot); });
  e.inject_packet(0, 2, l2::kCellPayloadBytes);
  e.inject_packet(1, 2, l2::kCellPayloadBytes);
  e.run();
  REQUIRE(slots.size() == 2);
  CHECK(slots[1] == slots[0] + 1);
}

TEST_CASE("same seed, same report") {
  SimParams p;
  p.seed = 42;
  const auto t = traffic_for(0.8, 65536, traffic::Pattern::bursty);
  const MetricsReport a = run(star(8), t, p);
  const MetricsReport b = run(star(8), t, p);
  CHECK(a.csv_row() == b.csv_row());
  p.seed = 43;
  CHECK(run(star(8), t, p).csv_row() != a.csv_row());
}

TEST_CASE("every cell arrives once and in order over lossy links") {
  for (SchedulerKind s : {SchedulerKind::islip, SchedulerKind::safc}) {
    SimParams p;
    p.seed = 5;
    const std::uint64_t volume = 65536;
    Engine e(star(8, s, 1e-6), traffic_for(0.9, volume), p);
    std::map<std::pair<unsigned, unsigned>, std::uint32_t> next;
    std::map<std::pair<unsigned, unsigned>, std::uint64_t> bytes;
    bool ordered = true;
    e.set_delivery_hook([&](const CellDesc& c, std::uint64_t) {
      auto& n = next[{c.src, c.dst}];
      ordered = ordered && c.flow_seq == n;
      ++n;
      bytes[{c.src, c.dst}] += c.valid_bytes;
    });
    const MetricsReport r = e.run();
    CHECK(ordered);
    CHECK(r.cells_delivered == r.cells_injected);
    CHECK(r.corrupted_frames > 0);
    CHECK(r.retx_cycles > 0);
    REQUIRE(bytes.size() == 8 * 7);
    for (const auto& [flow, b] : bytes) CHECK(b == volume);
    CHECK(r.voq_overflows == 0);
    CHECK(r.voq_peak <= r.voq_capacity);
  }
}

TEST_CASE("multi-switch chain delivers every pair") {
  const Topology topo =
      Topology::chain(3, 8, SchedulerKind::islip, 0, link::LinkConfig::with_rtt(15));
  Engine e(topo, std::nullopt, SimParams{});
  std::set<std::pair<unsigned, unsigned>> seen;
  e.set_delivery_hook([&](const CellDesc& c, std::uint64_t) {
    seen.insert({c.src, c.dst});
    CHECK(l2::source_address(c.hdr) == topo.route(c.dst, c.src));
  });
  const unsigned n = topo.endpoints;
  for (unsigned s = 0; s < n; ++s)
    for (unsigned d = 0; d < n; ++d)
      if (s != d) e.inject_packet(s, d, 3 * l2::kCellPayloadBytes);
  const MetricsReport r = e.run();
  CHECK(seen.size() == static_cast<std::size_t>(n) * (n - 1));
  CHECK(r.cells_delivered == 3ull * n * (n - 1));
}

TEST_CASE("bad parameters are config errors") {
  SimParams p;
  p.voq_capacity = 4;
  p.on_threshold = 3;
  p.off_threshold = 3;
  CHECK_THROWS_AS(Engine(star(8), std::nullopt, p), Error);
  CHECK_THROWS_AS(parse_endpoint_order("random"), Error);
  CHECK(parse_endpoint_order("fifo") == EndpointOrder::fifo);
}
