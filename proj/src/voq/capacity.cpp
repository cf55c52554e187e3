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

#include <algorithm>
#include <cmath>
#include <string>

#include "rifl/error.hpp"
#include "rifl/l2/codec.hpp"
#include "rifl/voq/bank.hpp"

namespace rifl::voq {

Capacity required_capacity(double rtt_cells, unsigned ports) {
  if (!(rtt_cells > 0.0)) throw Error(ErrorKind::config, "RTT must be positive");
  if (ports < 2) throw Error(ErrorKind::config, "need at least two ports");
  Capacity c;
  c.cells_per_channel = static_cast<unsigned>(std::ceil(1.5 * rtt_cells - 1e-9));
  c.bytes_per_channel = std::uint64_t{c.cells_per_channel} * l2::kCellPayloadBytes;
  c.bytes_per_port = c.bytes_per_channel * (ports - 1);
  c.bytes_total = c.bytes_per_port * ports;
  return c;
}

Thresholds default_thresholds(unsigned capacity, unsigned rtt, unsigned margin) {
  if (capacity <= rtt + margin)
    throw Error(ErrorKind::config,
                "VOQ capacity " + std::to_string(capacity) +
                    " leaves no room above the in-flight bound of RTT " +
                    std::to_string(rtt));
  Thresholds th;
  th.on = std::max(1u, (capacity - rtt - margin) / 2);
  th.off = th.on / 2;
  return th;
}

}  // namespace rifl::voq
