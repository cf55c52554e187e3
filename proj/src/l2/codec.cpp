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

#include "rifl/l2/codec.hpp"

#include <algorithm>
#include <string>

#include "rifl/error.hpp"

namespace rifl::l2 {

namespace {

constexpr std::uint16_t kCrcPoly = 0x80F;

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> table{};
  for (unsigned b = 0; b < 256; ++b) {
    std::uint16_t crc = static_cast<std::uint16_t>(b << 4);
    for (int k = 0; k < 8; ++k) {
      crc = (crc & 0x800) ? static_cast<std::uint16_t>((crc << 1) ^ kCrcPoly)
                          : static_cast<std::uint16_t>(crc << 1);
      crc &= 0xFFF;
    }
    table[b] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

std::uint16_t crc12_update(std::uint16_t crc, std::uint8_t byte) {
  return static_cast<std::uint16_t>(((crc << 8) & 0xFFF) ^
                                    kCrcTable[((crc >> 4) ^ byte) & 0xFF]);
}

// CRC input is the meta nibble (as the high nibble of one byte) followed by
// bytes 2..263 of the frame.
std::uint16_t frame_crc(std::uint8_t meta_nibble,
                        std::span<const std::uint8_t, kFrameBytes> frame) {
  std::uint16_t crc = crc12_update(0, static_cast<std::uint8_t>(meta_nibble << 4));
  for (std::size_t i = 2; i < kFrameBytes; ++i) crc = crc12_update(crc, frame[i]);
  return crc;
}

void check_header(const L2Header& h) {
  if (h.total_hops < 1 || h.total_hops > kMaxHops)
    throw Error(ErrorKind::invalid_input,
                "total_hops " + std::to_string(h.total_hops) + " outside 1..5");
  if (h.remain_hops > h.total_hops)
    throw Error(ErrorKind::invalid_input, "remain_hops exceeds total_hops");
}

}  // namespace

std::vector<Cell> segment(const UpperPacket& packet) {
  if (packet.payload.empty())
    throw Error(ErrorKind::invalid_input, "empty payload");
  if (packet.route.empty())
    throw Error(ErrorKind::invalid_input, "empty route");
  if (packet.route.size() > kMaxHops)
    throw Error(ErrorKind::route_overflow,
                "route of " + std::to_string(packet.route.size()) + " hops");

  L2Header header;
  header.total_hops = static_cast<std::uint8_t>(packet.route.size());
  header.remain_hops = header.total_hops;
  std::copy(packet.route.begin(), packet.route.end(), header.dst_ports.begin());

  const std::size_t n = cells_for(packet.payload.size());
  std::vector<Cell> cells(n);
  for (std::size_t k = 0; k < n; ++k) {
    Cell& c = cells[k];
    const std::size_t offset = k * kCellPayloadBytes;
    const std::size_t len =
        std::min(kCellPayloadBytes, packet.payload.size() - offset);
    std::copy_n(packet.payload.begin() + static_cast<std::ptrdiff_t>(offset),
                len, c.payload.begin());
    c.l1.valid_bytes = static_cast<std::uint16_t>(len);
    c.l1.eop = (k + 1 == n);
    c.l2 = header;
    c.trace.flow = packet.flow;
    c.trace.flow_seq = static_cast<std::uint32_t>(k);
  }
  return cells;
}

UpperPacket reassemble(std::span<const Cell> cells) {
  if (cells.empty())
    throw Error(ErrorKind::incomplete_packet, "no cells");

  UpperPacket packet;
  packet.flow = cells.front().trace.flow;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Cell& c = cells[k];
    if (k > 0 && c.trace.flow_seq != cells[k - 1].trace.flow_seq + 1)
      throw Error(ErrorKind::sequence_gap,
                  "flow " + std::to_string(c.trace.flow) + " expected seq " +
                      std::to_string(cells[k - 1].trace.flow_seq + 1) +
                      ", got " + std::to_string(c.trace.flow_seq));
    packet.payload.insert(packet.payload.end(), c.payload.begin(),
                          c.payload.begin() + c.l1.valid_bytes);
    if (c.l1.eop) {
      const L2Header& h = c.l2;
      if (h.remain_hops == 0) {
        packet.route = source_address(h);
      } else {
        packet.route.assign(h.dst_ports.begin(),
                            h.dst_ports.begin() + h.remain_hops);
      }
      return packet;
    }
  }
  throw Error(ErrorKind::incomplete_packet, "no end-of-packet cell");
}

RouteDecision route_lookup(unsigned ingress, const L2Header& header,
                           unsigned ports) {
  if (ports < 2 || ports > 256 || ingress >= ports)
    throw Error(ErrorKind::invalid_input, "ingress " + std::to_string(ingress) +
                                              " of " + std::to_string(ports));
  if (header.remain_hops == 0)
    throw Error(ErrorKind::not_for_forwarding, "remain_hops is 0");

  const unsigned j = header.dst_ports[0];
  if (j == kBroadcastSelector) return RouteDecision::broadcast();
  if (j >= ports - 1)
    throw Error(ErrorKind::invalid_destination,
                "selector " + std::to_string(j) + " on a " +
                    std::to_string(ports) + "-port switch");
  return RouteDecision::unicast(output_for(ingress, j));
}

std::uint8_t selector_for(unsigned ingress, unsigned egress) {
  if (ingress == egress)
    throw Error(ErrorKind::invalid_input, "loopback to port " +
                                              std::to_string(ingress));
  return static_cast<std::uint8_t>(egress < ingress ? egress : egress - 1);
}

L2Header rotate_header(const L2Header& header, unsigned ingress,
                       unsigned egress) {
  if (header.remain_hops == 0)
    throw Error(ErrorKind::header_underflow, "rotate with remain_hops 0");
  L2Header out = header;
  out.remain_hops = static_cast<std::uint8_t>(header.remain_hops - 1);
  std::rotate(out.dst_ports.begin(), out.dst_ports.begin() + 1,
              out.dst_ports.end());
  out.dst_ports[kMaxHops - 1] = selector_for(egress, ingress);
  return out;
}

std::vector<std::uint8_t> source_address(const L2Header& header) {
  if (header.remain_hops != 0)
    throw Error(ErrorKind::not_delivered,
                std::to_string(header.remain_hops) + " hops remain");
  if (header.total_hops < 1 || header.total_hops > kMaxHops)
    throw Error(ErrorKind::invalid_input, "total_hops " +
                                              std::to_string(header.total_hops));
  std::vector<std::uint8_t> route(header.dst_ports.end() - header.total_hops,
                                  header.dst_ports.end());
  std::reverse(route.begin(), route.end());
  return route;
}

std::uint16_t crc12(std::span<const std::uint8_t> bytes) {
  std::uint16_t crc = 0;
  for (std::uint8_t b : bytes) crc = crc12_update(crc, b);
  return crc;
}

FrameBytes encode(const Cell& cell) {
  const L1Meta& m = cell.l1;
  if (m.valid_bytes < 1 || m.valid_bytes > kCellPayloadBytes)
    throw Error(ErrorKind::invalid_input,
                "valid_bytes " + std::to_string(m.valid_bytes));
  const bool partial = m.valid_bytes < kCellPayloadBytes;
  if (partial && !m.eop)
    throw Error(ErrorKind::invalid_input, "padded cell without eop");
  check_header(cell.l2);

  FrameBytes frame{};
  frame[2] = static_cast<std::uint8_t>((cell.l2.total_hops << 4) |
                                       cell.l2.remain_hops);
  std::copy(cell.l2.dst_ports.begin(), cell.l2.dst_ports.end(),
            frame.begin() + 3);
  std::copy_n(cell.payload.begin(), m.valid_bytes, frame.begin() + kHeaderBytes);
  if (partial) frame[kFrameBytes - 1] = static_cast<std::uint8_t>(m.valid_bytes);

  const std::uint8_t meta = static_cast<std::uint8_t>(
      (m.eop ? 0x8 : 0) | (partial ? 0x4 : 0) | (m.seq % kSeqModulus));
  const std::uint16_t crc = frame_crc(meta, frame);
  const std::uint16_t word = static_cast<std::uint16_t>((meta << 12) | crc);
  frame[0] = static_cast<std::uint8_t>(word >> 8);
  frame[1] = static_cast<std::uint8_t>(word & 0xFF);
  return frame;
}

bool verify(std::span<const std::uint8_t, kFrameBytes> frame) {
  const std::uint16_t word =
      static_cast<std::uint16_t>((frame[0] << 8) | frame[1]);
  return frame_crc(static_cast<std::uint8_t>(word >> 12), frame) ==
         (word & 0xFFF);
}

Cell decode(std::span<const std::uint8_t, kFrameBytes> frame) {
  if (!verify(frame))
    throw Error(ErrorKind::checksum_mismatch, "frame failed CRC-12");
  const std::uint16_t word =
      static_cast<std::uint16_t>((frame[0] << 8) | frame[1]);

  Cell cell;
  cell.l1.eop = (word & 0x8000) != 0;
  const bool partial = (word & 0x4000) != 0;
  cell.l1.seq = static_cast<std::uint8_t>((word >> 12) & 0x3);
  cell.l1.checksum = word & 0xFFF;
  cell.l1.valid_bytes =
      partial ? frame[kFrameBytes - 1] : static_cast<std::uint16_t>(kCellPayloadBytes);
  if (partial && (cell.l1.valid_bytes == 0 || !cell.l1.eop))
    throw Error(ErrorKind::invalid_input, "malformed partial cell");

  cell.l2.total_hops = frame[2] >> 4;
  cell.l2.remain_hops = frame[2] & 0xF;
  std::copy_n(frame.begin() + 3, kMaxHops, cell.l2.dst_ports.begin());
  check_header(cell.l2);
  std::copy_n(frame.begin() + kHeaderBytes, cell.l1.valid_bytes,
              cell.payload.begin());
  return cell;
}

}  // namespace rifl::l2
