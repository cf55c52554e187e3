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

#include "rifl/link/bench.hpp"

#include <cstdio>

#include "rifl/error.hpp"
#include "rifl/link/duplex.hpp"

namespace rifl::link {

namespace {

// Checks one direction's deliveries against the sender's numbering.
struct Sink {
  std::uint64_t next = 0;
  std::uint64_t delivered = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t out_of_order = 0;
  std::uint64_t last_slot = 0;

  void take(std::uint64_t seq, std::uint64_t slot) {
    if (seq < next) {
      ++duplicates;
      return;
    }
    if (seq > next) ++out_of_order;
    next = seq + 1;
    ++delivered;
    last_slot = slot;
  }
};

}  // namespace

std::string LinkBenchReport::csv_header() {
  return "ber,frame_error_probability,cells,delivered,duplicates,out_of_order,slots,goodput,"
         "cycles,rereq_frames,redata_frames,corrupted_ab,corrupted_ba,exactly_once_in_order";
}

std::string LinkBenchReport::csv_row() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.3g,%.6g,%llu,%llu,%llu,%llu,%llu,%.6f,%llu,%llu,%llu,%llu,%llu,%d", ber,
                frame_error_probability, static_cast<unsigned long long>(cells),
                static_cast<unsigned long long>(delivered),
                static_cast<unsigned long long>(duplicates),
                static_cast<unsigned long long>(out_of_order),
                static_cast<unsigned long long>(slots), goodput,
                static_cast<unsigned long long>(cycles),
                static_cast<unsigned long long>(rereq_frames),
                static_cast<unsigned long long>(redata_frames),
                static_cast<unsigned long long>(corrupted_ab),
                static_cast<unsigned long long>(corrupted_ba), exactly_once_in_order() ? 1 : 0);
  return buf;
}

LinkBenchReport run_link_bench(const LinkBenchConfig& cfg) {
  if (!(cfg.ber >= 0.0 && cfg.ber < 1.0))
    throw Error(ErrorKind::config, "link bench BER must be in [0, 1)");
  if (cfg.cells == 0) throw Error(ErrorKind::config, "link bench needs at least one cell");

  LinkConfig lc = LinkConfig::with_rtt(cfg.rtt, cfg.ber);
  DuplexLink<std::uint64_t> link(lc, cfg.seed);
  if (!cfg.reverse_noise) link.b_to_a().set_corrupt_probability(0.0);

  Sink at_b, at_a;
  std::uint64_t sent_a = 0, sent_b = 0;
  const std::uint64_t b_cells = cfg.bidirectional ? cfg.cells : 0;
  // Generous bound: every cell retransmitted many times over.
  const std::uint64_t limit = 64 * (cfg.cells + 1000) + 1000u * cfg.rtt;
  std::uint64_t t = 0;
  for (; t < limit; ++t) {
    auto [got_a, got_b] = link.receive();
    if (got_b.cell) at_b.take(*got_b.cell, t);
    if (got_a.cell) at_a.take(*got_a.cell, t);
    if (at_b.delivered == cfg.cells && at_a.delivered == b_cells) break;
    std::optional<std::uint64_t> da, db;
    if (sent_a < cfg.cells && link.a().can_send_data()) da = sent_a;
    if (sent_b < b_cells && link.b().can_send_data()) db = sent_b;
    auto [ca, cb] = link.transmit(da, db);
    sent_a += ca;
    sent_b += cb;
  }
  if (t == limit) throw Error(ErrorKind::deadlock, "link bench did not complete");

  LinkBenchReport r;
  r.ber = cfg.ber;
  r.frame_error_probability = corruption_probability(cfg.ber, lc.frame_bits);
  r.cells = cfg.cells;
  r.delivered = at_b.delivered;
  r.duplicates = at_b.duplicates;
  r.out_of_order = at_b.out_of_order;
  r.slots = at_b.last_slot + 1 - lc.forward();
  r.goodput = static_cast<double>(r.delivered) / static_cast<double>(r.slots);
  const EndpointStats& sa = link.a().stats();
  const EndpointStats& sb = link.b().stats();
  r.cycles = sa.cycles + sb.cycles;
  r.rereq_frames = sa.rereq_sent + sb.rereq_sent;
  r.redata_frames = sa.redata_sent + sb.redata_sent;
  r.corrupted_ab = link.a_to_b().corrupted_count();
  r.corrupted_ba = link.b_to_a().corrupted_count();
  r.reverse_delivered = at_a.delivered;
  r.reverse_ok = at_a.delivered == b_cells && at_a.duplicates == 0 && at_a.out_of_order == 0;
  return r;
}

}  // namespace rifl::link
