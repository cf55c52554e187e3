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

#include <stdexcept>
#include <string>
#include <string_view>

namespace rifl {

enum class ErrorKind {
  // l2 codec
  route_overflow,
  invalid_input,
  incomplete_packet,
  sequence_gap,
  invalid_destination,
  not_for_forwarding,
  header_underflow,
  not_delivered,
  checksum_mismatch,
  // voq / fabric
  voq_overflow,
  voq_underflow,
  fabric_collision,
  misdelivery,
  // link
  replay_window,
  // configuration and engine
  config,
  deadlock,
};

std::string_view to_string(ErrorKind kind);

/// Configuration problems map to a usage failure; everything else is an
/// invariant violation inside the simulator.
inline bool is_config_error(ErrorKind kind) {
  return kind == ErrorKind::config || kind == ErrorKind::invalid_input ||
         kind == ErrorKind::route_overflow ||
         kind == ErrorKind::invalid_destination;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rifl
