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

#include "rifl/error.hpp"

namespace rifl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::route_overflow: return "route-overflow";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::incomplete_packet: return "incomplete-packet";
    case ErrorKind::sequence_gap: return "sequence-gap";
    case ErrorKind::invalid_destination: return "invalid-destination";
    case ErrorKind::not_for_forwarding: return "not-for-forwarding";
    case ErrorKind::header_underflow: return "header-underflow";
    case ErrorKind::not_delivered: return "not-delivered";
    case ErrorKind::checksum_mismatch: return "checksum-mismatch";
    case ErrorKind::voq_overflow: return "voq-overflow";
    case ErrorKind::voq_underflow: return "voq-underflow";
    case ErrorKind::fabric_collision: return "fabric-collision";
    case ErrorKind::misdelivery: return "misdelivery";
    case ErrorKind::replay_window: return "replay-window";
    case ErrorKind::config: return "config";
    case ErrorKind::deadlock: return "deadlock";
  }
  return "unknown";
}

}  // namespace rifl
