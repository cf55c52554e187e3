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
#include <string>
#include <utility>
#include <vector>

#include "rifl/cli/experiment.hpp"
#include "rifl/error.hpp"
#include "rifl/l2/codec.hpp"
#include "rifl/util/rng.hpp"

namespace rifl::cli {

namespace {

ProtocolCheck routing_bijection() {
  ProtocolCheck c{"routing_bijection", "N=2..32, every ingress", true};
  for (unsigned n = 2; n <= 32 && c.pass; ++n) {
    for (unsigned i = 0; i < n && c.pass; ++i) {
      std::vector<int> hits(n, 0);
      for (unsigned j = 0; j + 1 < n; ++j) {
        l2::L2Header h;
        h.total_hops = h.remain_hops = 1;
        h.dst_ports[0] = static_cast<std::uint8_t>(j);
        const l2::RouteDecision d = l2::route_lookup(i, h, n);
        if (d.kind != l2::RouteDecision::Kind::unicast || d.port >= n ||
            l2::selector_for(i, d.port) != j) {
          c.pass = false;
          break;
        }
        ++hits[d.port];
      }
      for (unsigned o = 0; o < n; ++o)
        if (hits[o] != (o == i ? 0 : 1)) c.pass = false;
      if (!c.pass) c.detail = "N=" + std::to_string(n) + " ingress " + std::to_string(i);
    }
  }
  return c;
}

ProtocolCheck return_selector() {
  ProtocolCheck c{"return_selector", "N=2..32, every port pair", true};
  for (unsigned n = 2; n <= 32; ++n)
    for (unsigned i = 0; i < n; ++i)
      for (unsigned e = 0; e < n; ++e) {
        if (i == e) continue;
        if (l2::output_for(e, l2::selector_for(e, i)) != i) {
          c.pass = false;
          c.detail = "N=" + std::to_string(n) + " " + std::to_string(i) + "->" +
                     std::to_string(e);
          return c;
        }
      }
  return c;
}

// Random multi-hop walks through 32-port switches; the delivered header
// must name the reverse path.
ProtocolCheck rotation_round_trip(std::uint64_t seed) {
  ProtocolCheck c{"rotation_round_trip", "10000 random routes, 1..5 hops, N=32", true};
  constexpr unsigned kPorts = 32;
  Rng rng = Rng::derive(seed, 0x524f54);
  for (int trial = 0; trial < 10000; ++trial) {
    const unsigned hops = static_cast<unsigned>(rng.between(1, l2::kMaxHops));
    std::vector<std::uint8_t> route(hops);
    for (auto& s : route) s = static_cast<std::uint8_t>(rng.below(kPorts - 1));
    l2::UpperPacket pkt;
    pkt.payload.assign(1, 0);
    pkt.route = route;
    l2::L2Header h = l2::segment(pkt).front().l2;
    std::vector<std::pair<unsigned, unsigned>> walk;
    for (unsigned k = 0; k < hops; ++k) {
      const unsigned in = static_cast<unsigned>(rng.below(kPorts));
      const unsigned out = l2::route_lookup(in, h, kPorts).port;
      walk.emplace_back(in, out);
      h = l2::rotate_header(h, in, out);
    }
    std::vector<std::uint8_t> expect;
    for (auto it = walk.rbegin(); it != walk.rend(); ++it)
      expect.push_back(l2::selector_for(it->second, it->first));
    if (h.remain_hops != 0 || l2::source_address(h) != expect) {
      c.pass = false;
      c.detail = "trial " + std::to_string(trial);
      return c;
    }
  }
  return c;
}

// One packet per ordered endpoint pair through a switch chain; every first
// cell's delivered header must route back to its sender.
ProtocolCheck chain_round_trip(unsigned switches, unsigned ports, unsigned rtt,
                               std::uint64_t seed) {
  ProtocolCheck c{"chain_round_trip_" + std::to_string(switches) + "x" + std::to_string(ports),
                  "", true};
  const sim::Topology topo = sim::Topology::chain(switches, ports, sim::SchedulerKind::islip, 0,
                                                  link::LinkConfig::with_rtt(rtt));
  sim::SimParams params;
  params.seed = seed;
  params.fixed_path_latency = std::max(17u, rtt + 2);
  sim::Engine engine(topo, std::nullopt, params);
  std::map<std::pair<unsigned, unsigned>, std::vector<std::uint8_t>> back;
  engine.set_delivery_hook([&](const sim::CellDesc& cell, std::uint64_t) {
    back.emplace(std::make_pair(cell.src, cell.dst), l2::source_address(cell.hdr));
  });
  const unsigned n = topo.endpoints;
  unsigned max_hops = 0;
  for (unsigned s = 0; s < n; ++s)
    for (unsigned d = 0; d < n; ++d)
      if (s != d) {
        engine.inject_packet(s, d, l2::kCellPayloadBytes);
        max_hops = std::max<unsigned>(max_hops, static_cast<unsigned>(topo.path(s, d).size()));
      }
  engine.run();
  std::size_t good = 0;
  for (unsigned s = 0; s < n; ++s)
    for (unsigned d = 0; d < n; ++d) {
      if (s == d) continue;
      auto it = back.find({s, d});
      if (it != back.end() && it->second == topo.route(d, s)) ++good;
    }
  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1);
  c.pass = good == pairs;
  c.detail = std::to_string(good) + "/" + std::to_string(pairs) + " pairs, up to " +
             std::to_string(max_hops) + " hops";
  return c;
}

ProtocolCheck idle_switch_latency(unsigned rtt, std::uint64_t seed) {
  ProtocolCheck c{"idle_switch_latency", "", false};
  sim::SimParams params;
  params.seed = seed;
  sim::Engine engine(sim::Topology::star(32, sim::SchedulerKind::islip, 0,
                                         link::LinkConfig::with_rtt(rtt)),
                     std::nullopt, params);
  engine.inject_packet(0, 1, l2::kCellPayloadBytes);
  const sim::MetricsReport r = engine.run();
  const std::uint64_t want = params.fixed_path_latency + 1;
  c.pass = r.cells_delivered == 1 && r.latency.front() == want;
  c.detail = "latency " + std::to_string(r.latency.front()) + ", expected " +
             std::to_string(want);
  return c;
}

}  // namespace

std::vector<ProtocolCheck> run_protocol_checks(const ExperimentSpec& spec, std::uint64_t seed) {
  std::vector<ProtocolCheck> out;
  out.push_back(routing_bijection());
  out.push_back(return_selector());
  out.push_back(rotation_round_trip(seed));
  out.push_back(chain_round_trip(2, 8, spec.rtt, seed));
  out.push_back(chain_round_trip(5, 8, spec.rtt, seed));
  out.push_back(idle_switch_latency(spec.rtt, seed));
  return out;
}

}  // namespace rifl::cli
