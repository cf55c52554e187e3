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
#include <string>

#include "rifl/link/frame.hpp"

namespace rifl::link {

/// Point-to-point experiment: endpoint a streams `cells` numbered cells to b
/// at line rate over one duplex link, optionally with b streaming back.
struct LinkBenchConfig {
  unsigned rtt = 15;
  double ber = 0.0;
  std::uint64_t cells = 1'000'000;
  std::uint64_t seed = 1;
  bool bidirectional = false;  // b also streams `cells` cells to a
  bool reverse_noise = true;   // apply `ber` to the b -> a channel as well
};

struct LinkBenchReport {
  double ber = 0.0;
  double frame_error_probability = 0.0;
  std::uint64_t cells = 0;
  std::uint64_t delivered = 0;    // a -> b
  std::uint64_t duplicates = 0;
  std::uint64_t out_of_order = 0;
  std::uint64_t slots = 0;        // first a -> b emission to last a -> b delivery, less the delay
  double goodput = 0.0;           // delivered cells per slot of `slots`
  std::uint64_t cycles = 0;       // retransmission cycles, both sides
  std::uint64_t rereq_frames = 0;
  std::uint64_t redata_frames = 0;
  std::uint64_t corrupted_ab = 0;
  std::uint64_t corrupted_ba = 0;
  std::uint64_t reverse_delivered = 0;  // b -> a, when bidirectional
  bool reverse_ok = true;

  bool exactly_once_in_order() const {
    return delivered == cells && duplicates == 0 && out_of_order == 0 && reverse_ok;
  }

  static std::string csv_header();
  std::string csv_row() const;
};

LinkBenchReport run_link_bench(const LinkBenchConfig& cfg);

}  // namespace rifl::link
