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

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rifl/error.hpp"
#include "rifl/link/bench.hpp"
#include "rifl/link/duplex.hpp"

using namespace rifl;
using namespace rifl::link;

namespace {

struct Stream {
  std::uint64_t next_send = 0;
  std::uint64_t next_expect = 0;
  std::map<std::uint64_t, std::uint64_t> send_slot;  // cell -> first emission slot
  std::map<std::uint64_t, std::uint64_t> recv_slot;
  bool ok = true;

  void take(std::uint64_t cell, std::uint64_t t) {
    if (cell != next_expect) ok = false;
    next_expect = cell + 1;
    recv_slot[cell] = t;
  }
};

// Both ends stream `cells` numbered cells (b only when `both`), with faults.
struct Harness {
  DuplexLink<std::uint64_t> link;
  Stream ab, ba;
  std::vector<std::uint64_t> a_blocked;  // slots where a could not send data
  std::uint64_t t = 0;

  Harness(unsigned rtt, double ber = 0.0, std::uint64_t seed = 1)
      : link(LinkConfig::with_rtt(rtt, ber), seed) {}

  void run(std::uint64_t cells, bool both, std::uint64_t limit) {
    for (; t < limit; ++t) {
      auto [at_a, at_b] = link.receive();
      if (at_b.cell) ab.take(*at_b.cell, t);
      if (at_a.cell) ba.take(*at_a.cell, t);
      if (ab.next_expect == cells && (!both || ba.next_expect == cells)) return;
      std::optional<std::uint64_t> da, db;
      if (ab.next_send < cells) {
        if (link.a().can_send_data()) da = ab.next_send;
        else a_blocked.push_back(t);
      }
      if (both && ba.next_send < cells && link.b().can_send_data()) db = ba.next_send;
      auto [ca, cb] = link.transmit(da, db);
      if (ca) ab.send_slot.emplace(ab.next_send++, t);
      if (cb) ba.send_slot.emplace(ba.next_send++, t);
    }
  }
};

}  // namespace

TEST_CASE("frame corruption probability matches the closed form and sampling") {
  CHECK(corruption_probability(0.0, 2112) == 0.0);
  CHECK(corruption_probability(1.0, 2112) == 1.0);
  const long double closed = 1.0L - std::pow(1.0L - 1e-7L, 2112.0L);
  const double p = corruption_probability(1e-7, 2112);
  CHECK(std::fabs(p - static_cast<double>(closed)) < 1e-12);
  CHECK(std::fabs(p - 2.112e-4) / 2.112e-4 < 0.001);

  Rng rng(2024);
  std::uint64_t hits = 0;
  const std::uint64_t n = 10'000'000;
  for (std::uint64_t k = 0; k < n; ++k) {
    Frame<int> f;
    hits += channel_step(f, p, rng).corrupted ? 1 : 0;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(n);
  CHECK(std::fabs(est - p) / p < 0.05);

  Frame<int> f;
  CHECK_FALSE(channel_step(f, 0.0, rng).corrupted);
  CHECK(channel_step(f, 1.0, rng).corrupted);
}

TEST_CASE("clean link is silent and has constant latency") {
  Harness h(15);
  h.run(5000, true, 100000);
  CHECK(h.ab.ok);
  CHECK(h.ba.ok);
  CHECK(h.ab.recv_slot.size() == 5000);
  for (const auto& [cell, t] : h.ab.recv_slot) CHECK(t - h.ab.send_slot[cell] == 8);
  for (const auto& [cell, t] : h.ba.recv_slot) CHECK(t - h.ba.send_slot[cell] == 7);
  CHECK(h.link.a().stats().rereq_sent == 0);
  CHECK(h.link.b().stats().rereq_sent == 0);
  CHECK(h.link.a().stats().redata_sent == 0);
  CHECK(h.link.b().stats().redata_sent == 0);
}

// Correction ends when the sender leaves its retransmission cycle and normal
// data flows again; the replayed cell itself lands 1.5 RTT after the error.
TEST_CASE("single error: pause about 2.5 RTT, correction about 3.5 RTT") {
  for (unsigned rtt : {4u, 7u, 15u, 16u, 40u}) {
    CAPTURE(rtt);
    Harness h(rtt);
    const std::uint64_t t0 = 200;
    h.link.a_to_b().force_corrupt(t0);
    h.run(2000, false, 100000);
    REQUIRE(h.ab.ok);
    REQUIRE(h.ab.recv_slot.size() == 2000);

    // The pause is one contiguous window.
    REQUIRE_FALSE(h.a_blocked.empty());
    CHECK(h.a_blocked.back() - h.a_blocked.front() + 1 == h.a_blocked.size());
    CHECK(std::fabs(static_cast<double>(h.a_blocked.size()) - 2.5 * rtt) <= 1.0);

    const std::uint64_t bad = t0;  // cell t0 went out in slot t0
    REQUIRE(h.ab.send_slot[bad] == t0);
    const double replayed = static_cast<double>(h.ab.recv_slot[bad] - t0);
    CHECK(std::fabs(replayed - 1.5 * rtt) <= 1.0);
    const double correction = static_cast<double>(h.a_blocked.back() + 1 - t0);
    CHECK(std::fabs(correction - 3.5 * rtt) <= 1.0);

    const unsigned fwd = (rtt + 1) / 2;
    for (const auto& [cell, t] : h.ab.recv_slot) {
      if (cell == bad) continue;
      CHECK(static_cast<double>(t - h.ab.send_slot[cell] - fwd) <= 2.5 * rtt + 1.0);
    }
    CHECK(h.link.a().stats().cycles == 1);
  }
}

TEST_CASE("simultaneous errors in both directions at every phase offset") {
  const unsigned rtt = 15;
  const unsigned span = static_cast<unsigned>(std::ceil(3.5 * rtt));
  for (unsigned off = 0; off < span; ++off) {
    for (bool a_first : {true, false}) {
      CAPTURE(off);
      CAPTURE(a_first);
      Harness h(rtt);
      const std::uint64_t t0 = 100;
      h.link.a_to_b().force_corrupt(a_first ? t0 : t0 + off);
      h.link.b_to_a().force_corrupt(a_first ? t0 + off : t0);
      h.run(1500, true, 200000);
      CHECK(h.ab.ok);
      CHECK(h.ba.ok);
      CHECK(h.ab.recv_slot.size() == 1500);
      CHECK(h.ba.recv_slot.size() == 1500);
    }
  }
}

TEST_CASE("errors inside a retransmission cycle are recovered") {
  const unsigned rtt = 15;
  for (unsigned off = 1; off < 60; off += 3) {
    CAPTURE(off);
    Harness h(rtt);
    h.link.a_to_b().force_corrupt(100);
    h.link.a_to_b().force_corrupt(100 + off);
    h.link.b_to_a().force_corrupt(110 + off);
    h.run(1000, true, 200000);
    CHECK(h.ab.ok);
    CHECK(h.ba.ok);
    CHECK(h.ab.recv_slot.size() == 1000);
  }
}

TEST_CASE("random corruption, 10^6 cells each way: exactly once, in order") {
  LinkBenchConfig c;
  c.ber = 1e-6;
  c.cells = 1'000'000;
  c.bidirectional = true;
  c.seed = 5;
  const LinkBenchReport r = run_link_bench(c);
  CHECK(r.exactly_once_in_order());
  CHECK(r.corrupted_ab > 1000);
  CHECK(r.corrupted_ba > 1000);
}

TEST_CASE("heavy corruption still delivers everything") {
  // Up to a third of all frames corrupted, often on both sides at once.
  for (double ber : {5e-5, 1e-4, 2e-4}) {
    LinkBenchConfig c;
    c.ber = ber;
    c.cells = 1000;
    c.rtt = 6;
    c.bidirectional = true;
    c.seed = 11;
    CHECK(run_link_bench(c).exactly_once_in_order());
  }
}

TEST_CASE("flow-control payloads pause and unpause atomically") {
  Endpoint<int> e(15, 16);
  FlowControlPayload p;
  p.on_valid = true;
  p.on_channel = 3;
  e.apply_flow_control(p);
  CHECK(e.paused(3));
  FlowControlPayload q;
  q.on_valid = true;
  q.on_channel = 7;
  q.off_valid = true;
  q.off_channel = 3;
  e.apply_flow_control(q);
  CHECK(e.paused(7));
  CHECK_FALSE(e.paused(3));
  FlowControlPayload r;
  r.off_valid = true;
  r.off_channel = 9;
  e.apply_flow_control(r);
  CHECK_FALSE(e.paused(9));
  FlowControlPayload bad;
  bad.on_valid = true;
  bad.on_channel = 16;
  CHECK_THROWS_AS(e.apply_flow_control(bad), Error);
}

TEST_CASE("flow-control frames survive corruption") {
  DuplexLink<int> link(LinkConfig::with_rtt(15), 1, 0, 8);
  link.a().queue_flow_control(2, true);
  link.a_to_b().force_corrupt(0);
  for (int t = 0; t < 200; ++t) {
    link.receive();
    link.transmit(std::nullopt, std::nullopt);
  }
  CHECK(link.b().paused(2));
  link.a().queue_flow_control(2, false);
  for (int t = 0; t < 50; ++t) {
    link.receive();
    link.transmit(std::nullopt, std::nullopt);
  }
  CHECK_FALSE(link.b().paused(2));
}

TEST_CASE("opposite flow-control events for one channel cancel while queued") {
  Endpoint<int> e(15);
  e.queue_flow_control(4, true);
  e.queue_flow_control(4, false);
  CHECK_FALSE(e.flow_control_pending());
  CHECK(e.stats().fc_cancelled == 1);
  e.queue_flow_control(4, true);
  e.queue_flow_control(5, false);
  const Frame<int> f = e.transmit();
  REQUIRE(f.fc);
  CHECK(f.fc->on_valid);
  CHECK(f.fc->on_channel == 4);
  CHECK(f.fc->off_valid);
  CHECK(f.fc->off_channel == 5);
}

TEST_CASE("fault schedule parsing") {
  std::istringstream in("# comment\nab 10\nba 20 1\n\nab 30 0  # not forced\n");
  const auto ev = parse_fault_schedule(in);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == FaultEvent{Direction::a_to_b, 10, true});
  CHECK(ev[1] == FaultEvent{Direction::b_to_a, 20, true});
  CHECK(ev[2] == FaultEvent{Direction::a_to_b, 30, false});
  std::istringstream bad("xy 10\n");
  CHECK_THROWS_AS(parse_fault_schedule(bad), Error);
  std::istringstream neg("ab -1\n");
  CHECK_THROWS_AS(parse_fault_schedule(neg), Error);
}
