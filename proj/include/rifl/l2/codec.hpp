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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rifl::l2 {

inline constexpr std::size_t kCellPayloadBytes = 256;
inline constexpr std::size_t kHeaderBytes = 8;
inline constexpr std::size_t kFrameBytes = kCellPayloadBytes + kHeaderBytes;
inline constexpr std::size_t kMaxHops = 5;
inline constexpr std::uint8_t kBroadcastSelector = 255;
inline constexpr std::uint8_t kSeqModulus = 4;

using FrameBytes = std::array<std::uint8_t, kFrameBytes>;

/// Layer 1 metadata carried in the two-byte link header.
///
/// Wire layout of bytes 0-1 (big-endian 16-bit word):
///
///   bit  15     eop
///   bit  14     partial: valid_bytes < 256; the count is then stored in the
///               last payload byte on the wire (always padding in that case)
///   bits 13-12  seq mod 4
///   bits 11-0   CRC-12 over the meta nibble followed by bytes 2..263
struct L1Meta {
  std::uint16_t valid_bytes = kCellPayloadBytes;
  bool eop = false;
  std::uint8_t seq = 0;
  std::uint16_t checksum = 0;

  bool operator==(const L1Meta&) const = default;
};

/// Layer 2 routing header: byte 2 holds total_hops (high nibble) and
/// remain_hops (low nibble), bytes 3-7 hold the five port selectors.
struct L2Header {
  std::uint8_t total_hops = 0;
  std::uint8_t remain_hops = 0;
  std::array<std::uint8_t, kMaxHops> dst_ports{};

  bool operator==(const L2Header&) const = default;
};

/// Simulation bookkeeping that travels with a cell but is never serialized.
struct CellTrace {
  std::int64_t inject_slot = -1;
  std::uint32_t flow = 0;
  std::uint32_t flow_seq = 0;

  bool operator==(const CellTrace&) const = default;
};

struct Cell {
  L1Meta l1;
  L2Header l2;
  std::array<std::uint8_t, kCellPayloadBytes> payload{};
  CellTrace trace;

  bool operator==(const Cell&) const = default;
};

struct UpperPacket {
  std::vector<std::uint8_t> payload;
  std::vector<std::uint8_t> route;
  std::uint32_t flow = 0;

  bool operator==(const UpperPacket&) const = default;
};

struct RouteDecision {
  enum class Kind { unicast, broadcast };

  Kind kind = Kind::unicast;
  unsigned port = 0;

  static RouteDecision unicast(unsigned p) { return {Kind::unicast, p}; }
  static RouteDecision broadcast() { return {Kind::broadcast, 0}; }

  bool operator==(const RouteDecision&) const = default;
};

// Segmentation and reassembly happen only at endpoints.
std::vector<Cell> segment(const UpperPacket& packet);
UpperPacket reassemble(std::span<const Cell> cells);

/// Number of cells `segment` produces for a payload of `bytes`.
constexpr std::size_t cells_for(std::size_t bytes) {
  return (bytes + kCellPayloadBytes - 1) / kCellPayloadBytes;
}

/// Relative-address forwarding rule: selector j at ingress i names output j
/// when j < i and j + 1 otherwise; 255 broadcasts to every other port.
RouteDecision route_lookup(unsigned ingress, const L2Header& header,
                           unsigned ports);

/// Inverse of the forwarding rule: the selector that takes a cell entering at
/// `ingress` out through `egress`.
std::uint8_t selector_for(unsigned ingress, unsigned egress);

/// Unicast output for selector `j` at `ingress` (no broadcast, no checks
/// beyond the arithmetic).
inline unsigned output_for(unsigned ingress, unsigned j) {
  return j < ingress ? j : j + 1;
}

/// Consumes one hop. The selectors rotate left by one slot and the vacated
/// last slot receives the selector that leads from `egress` back to
/// `ingress`, which makes the delivered header a valid return route.
L2Header rotate_header(const L2Header& header, unsigned ingress,
                       unsigned egress);

/// Return route to the sender, read off a delivered header.
std::vector<std::uint8_t> source_address(const L2Header& header);

std::uint16_t crc12(std::span<const std::uint8_t> bytes);

FrameBytes encode(const Cell& cell);
/// Throws checksum-mismatch when the CRC does not verify.
Cell decode(std::span<const std::uint8_t, kFrameBytes> frame);
bool verify(std::span<const std::uint8_t, kFrameBytes> frame);

}  // namespace rifl::l2
