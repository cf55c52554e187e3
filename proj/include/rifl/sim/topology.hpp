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
#include <string_view>
#include <vector>

#include "rifl/link/frame.hpp"

namespace rifl::sim {

enum class SchedulerKind { islip, safc };

std::string_view to_string(SchedulerKind k);
SchedulerKind parse_scheduler(std::string_view s);

struct SwitchSpec {
  unsigned ports = 32;
  SchedulerKind scheduler = SchedulerKind::islip;
  unsigned iterations = 0;  // 0: three up to 32 ports, one above
};

/// An endpoint (port ignored) or one port of a switch.
struct PortRef {
  bool is_switch = false;
  unsigned node = 0;
  unsigned port = 0;

  static PortRef endpoint(unsigned e) { return {false, e, 0}; }
  static PortRef switch_port(unsigned s, unsigned p) { return {true, s, p}; }
  bool operator==(const PortRef&) const = default;
};

struct LinkSpec {
  PortRef a;
  PortRef b;
  link::LinkConfig cfg;
};

/// One switch hop on a path.
struct Hop {
  unsigned sw = 0;
  unsigned ingress = 0;
  unsigned egress = 0;
};

struct Topology {
  unsigned endpoints = 0;
  std::vector<SwitchSpec> switches;
  std::vector<LinkSpec> links;

  /// N endpoints, endpoint i on port i of a single switch.
  static Topology star(unsigned ports, SchedulerKind scheduler, unsigned iterations,
                       const link::LinkConfig& cfg);

  /// `count` switches in a line. Switch k uses port ports-1 toward switch
  /// k+1 and port ports-2 toward switch k-1; endpoints fill the other ports
  /// in switch order.
  static Topology chain(unsigned count, unsigned ports, SchedulerKind scheduler,
                        unsigned iterations, const link::LinkConfig& cfg);

  /// Throws a config error for dangling or doubly used ports, endpoints
  /// without exactly one link to a switch, or invalid port counts.
  void validate() const;

  /// Switch hops from endpoint `src` to endpoint `dst` (fewest hops). Throws
  /// config if unreachable, route-overflow beyond five hops.
  std::vector<Hop> path(unsigned src, unsigned dst) const;

  /// Selectors along path(src, dst).
  std::vector<std::uint8_t> route(unsigned src, unsigned dst) const;

  /// Where the link at `end` leads; index into `links` and the far end.
  struct Attachment {
    int link = -1;
    bool side_a = true;
    PortRef peer;
  };
  Attachment attachment(const PortRef& end) const;

  unsigned max_rtt() const;
};

}  // namespace rifl::sim
