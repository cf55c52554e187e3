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

#include "rifl/sim/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "rifl/error.hpp"
#include "rifl/l2/codec.hpp"

namespace rifl::sim {

std::string_view to_string(SchedulerKind k) {
  return k == SchedulerKind::islip ? "islip" : "safc";
}

SchedulerKind parse_scheduler(std::string_view s) {
  if (s == "islip") return SchedulerKind::islip;
  if (s == "safc") return SchedulerKind::safc;
  throw Error(ErrorKind::config, "unknown scheduler '" + std::string(s) + "'");
}

Topology Topology::star(unsigned ports, SchedulerKind scheduler, unsigned iterations,
                        const link::LinkConfig& cfg) {
  Topology t;
  t.endpoints = ports;
  t.switches.push_back({ports, scheduler, iterations});
  for (unsigned i = 0; i < ports; ++i)
    t.links.push_back({PortRef::endpoint(i), PortRef::switch_port(0, i), cfg});
  return t;
}

Topology Topology::chain(unsigned count, unsigned ports, SchedulerKind scheduler,
                         unsigned iterations, const link::LinkConfig& cfg) {
  if (count < 1) throw Error(ErrorKind::config, "chain needs at least one switch");
  if (count > 1 && ports < 3) throw Error(ErrorKind::config, "chain switches need >= 3 ports");
  Topology t;
  for (unsigned k = 0; k < count; ++k) t.switches.push_back({ports, scheduler, iterations});
  for (unsigned k = 0; k + 1 < count; ++k)
    t.links.push_back({PortRef::switch_port(k, ports - 1),
                       PortRef::switch_port(k + 1, ports - 2), cfg});
  for (unsigned k = 0; k < count; ++k) {
    for (unsigned p = 0; p < ports; ++p) {
      const bool right = k + 1 < count && p == ports - 1;
      const bool left = k > 0 && p == ports - 2;
      if (right || left) continue;
      t.links.push_back({PortRef::endpoint(t.endpoints++), PortRef::switch_port(k, p), cfg});
    }
  }
  return t;
}

void Topology::validate() const {
  if (switches.empty()) throw Error(ErrorKind::config, "topology has no switch");
  if (endpoints < 2) throw Error(ErrorKind::config, "topology needs >= 2 endpoints");
  for (const SwitchSpec& s : switches)
    if (s.ports < 2 || s.ports > 64)
      throw Error(ErrorKind::config, "switch port count must be in 2..64");
  std::set<std::pair<unsigned, unsigned>> used_ports;
  std::vector<unsigned> endpoint_links(endpoints, 0);
  auto check = [&](const PortRef& r) {
    if (r.is_switch) {
      if (r.node >= switches.size() || r.port >= switches[r.node].ports)
        throw Error(ErrorKind::config, "link names a nonexistent switch port");
      if (!used_ports.insert({r.node, r.port}).second)
        throw Error(ErrorKind::config, "switch " + std::to_string(r.node) + " port " +
                                           std::to_string(r.port) + " connected twice");
    } else {
      if (r.node >= endpoints) throw Error(ErrorKind::config, "link names a nonexistent endpoint");
      ++endpoint_links[r.node];
    }
  };
  for (const LinkSpec& l : links) {
    check(l.a);
    check(l.b);
    if (!l.a.is_switch && !l.b.is_switch)
      throw Error(ErrorKind::config, "endpoint-to-endpoint links are not switched");
    if (l.cfg.forward() < 1 || l.cfg.backward() < 1)
      throw Error(ErrorKind::config, "link delay must be >= 1");
    if (!(l.cfg.ber >= 0.0 && l.cfg.ber < 1.0))
      throw Error(ErrorKind::config, "ber must be in [0, 1)");
  }
  for (unsigned e = 0; e < endpoints; ++e)
    if (endpoint_links[e] != 1)
      throw Error(ErrorKind::config, "endpoint " + std::to_string(e) + " needs exactly one link");
}

Topology::Attachment Topology::attachment(const PortRef& end) const {
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (links[k].a == end) return {static_cast<int>(k), true, links[k].b};
    if (links[k].b == end) return {static_cast<int>(k), false, links[k].a};
  }
  return {};
}

std::vector<Hop> Topology::path(unsigned src, unsigned dst) const {
  if (src >= endpoints || dst >= endpoints || src == dst)
    throw Error(ErrorKind::config, "bad endpoint pair");
  const PortRef first = attachment(PortRef::endpoint(src)).peer;
  const PortRef last = attachment(PortRef::endpoint(dst)).peer;

  // Breadth-first over switches; prev[s] = (previous switch, its egress, our ingress).
  struct Prev {
    int sw = -1;
    unsigned egress = 0;
    unsigned ingress = 0;
  };
  std::vector<Prev> prev(switches.size());
  std::vector<bool> seen(switches.size(), false);
  std::vector<unsigned> entry(switches.size(), 0);
  std::deque<unsigned> q{first.node};
  seen[first.node] = true;
  entry[first.node] = first.port;
  while (!q.empty()) {
    const unsigned s = q.front();
    q.pop_front();
    if (s == last.node) break;
    for (unsigned p = 0; p < switches[s].ports; ++p) {
      const Attachment at = attachment(PortRef::switch_port(s, p));
      if (at.link < 0 || !at.peer.is_switch || seen[at.peer.node]) continue;
      seen[at.peer.node] = true;
      prev[at.peer.node] = {static_cast<int>(s), p, at.peer.port};
      entry[at.peer.node] = at.peer.port;
      q.push_back(at.peer.node);
    }
  }
  if (!seen[last.node])
    throw Error(ErrorKind::config, "endpoint " + std::to_string(dst) +
                                       " unreachable from " + std::to_string(src));
  std::vector<Hop> hops;
  unsigned s = last.node;
  unsigned egress = last.port;
  while (true) {
    hops.push_back({s, entry[s], egress});
    if (prev[s].sw < 0) break;
    egress = prev[s].egress;
    s = static_cast<unsigned>(prev[s].sw);
  }
  std::reverse(hops.begin(), hops.end());
  if (hops.size() > l2::kMaxHops)
    throw Error(ErrorKind::route_overflow,
                "path of " + std::to_string(hops.size()) + " switch hops");
  return hops;
}

std::vector<std::uint8_t> Topology::route(unsigned src, unsigned dst) const {
  std::vector<std::uint8_t> r;
  for (const Hop& h : path(src, dst)) r.push_back(l2::selector_for(h.ingress, h.egress));
  return r;
}

unsigned Topology::max_rtt() const {
  unsigned m = 0;
  for (const LinkSpec& l : links) m = std::max(m, l.cfg.rtt());
  return m;
}

}  // namespace rifl::sim
