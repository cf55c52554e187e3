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

#include "rifl/sim/engine.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <string>

#include "rifl/error.hpp"
#include "rifl/fabric/fabric.hpp"
#include "rifl/sched/islip.hpp"

namespace rifl::sim {

namespace {

using Link = link::DuplexLink<CellDesc>;
using LinkEnd = link::Endpoint<CellDesc>;

// Queued cell: offer order in the high 32 bits, eop in bit 16, bytes below.
constexpr std::uint64_t kEopBit = std::uint64_t{1} << 16;
constexpr std::uint64_t kBytesMask = 0xFFFF;
constexpr unsigned kOrderShift = 32;

// Fixed-size set of indices [0, n) with a wrapping "next at or after" query.
class BitSet {
 public:
  explicit BitSet(unsigned n = 0) : n_(n), words_((n + 63) / 64, 0) {}
  void set(unsigned i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(unsigned i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }
  // First member at or after `from`, wrapping; -1 when empty.
  int next(unsigned from) const {
    if (n_ == 0) return -1;
    from %= n_;
    const std::size_t nw = words_.size();
    std::size_t w = from / 64;
    std::uint64_t m = words_[w] & (~std::uint64_t{0} << (from % 64));
    for (std::size_t k = 0; k <= nw; ++k) {
      if (m) return static_cast<int>(w * 64 + static_cast<unsigned>(std::countr_zero(m)));
      w = (w + 1) % nw;
      m = words_[w];
    }
    return -1;
  }

 private:
  unsigned n_;
  std::vector<std::uint64_t> words_;
};

struct EndpointNode {
  unsigned link = 0;
  bool side_a = true;
  std::optional<traffic::Source> source;
  std::vector<std::deque<std::uint64_t>> queues;  // per destination
  BitSet nonempty;
  unsigned rr = 0;
  std::uint32_t offered = 0;
  // Fast path for up to 64 endpoints: flow bit d mirrors nonempty, front[d]
  // is the offer order of the oldest queued cell, and when `star_map` holds,
  // flow d's first-hop channel is d (d < id) or d - 1 (d > id).
  bool small = false;
  bool star_map = false;
  unsigned id = 0;
  std::uint64_t flow_bits = 0;
  std::vector<std::uint32_t> front;
  std::vector<std::uint32_t> next_seq;    // per destination
  std::vector<std::uint32_t> expect_seq;  // per source
  std::vector<bool> route_checked;        // per source
  std::vector<l2::L2Header> headers;      // per destination
  std::vector<std::uint16_t> first_channel;
};

struct SwitchNode {
  unsigned ports = 0;
  SchedulerKind kind = SchedulerKind::islip;
  std::vector<voq::Bank<CellDesc>> banks;
  std::vector<int> port_link;
  std::vector<bool> port_side_a;
  std::uint64_t trunk_mask = 0;
  std::optional<sched::Islip> islip;
  std::optional<sched::SafcArbiter> safc;
  std::optional<fabric::BatcherBanyan> fabric;
  std::vector<std::deque<std::pair<std::uint64_t, CellDesc>>> egress;
  std::vector<std::uint64_t> rows;
  sched::Matching matching;
  std::vector<int> at_output;
};

}  // namespace

std::string_view to_string(EndpointOrder o) {
  switch (o) {
    case EndpointOrder::oldest: return "oldest";
    case EndpointOrder::round_robin: return "round_robin";
    case EndpointOrder::fifo: return "fifo";
  }
  return "?";
}

EndpointOrder parse_endpoint_order(std::string_view s) {
  if (s == "oldest") return EndpointOrder::oldest;
  if (s == "round_robin") return EndpointOrder::round_robin;
  if (s == "fifo") return EndpointOrder::fifo;
  throw Error(ErrorKind::config, "unknown endpoint order '" + std::string(s) + "'");
}

struct Engine::Impl {
  Topology topo;
  std::optional<traffic::TrafficConfig> traffic;
  SimParams params;

  std::vector<std::unique_ptr<Link>> links;
  std::vector<EndpointNode> eps;
  std::vector<SwitchNode> sws;
  unsigned capacity = 0;
  voq::Thresholds th;
  unsigned pipeline = 0;
  unsigned egress_cap = 0;

  std::uint64_t t = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t last_progress = 0;
  std::int64_t first_injection = -1;
  std::int64_t last_delivery = -1;
  std::uint64_t wire_bytes = 0;
  std::uint64_t payload_bytes = 0;
  std::vector<std::uint64_t> per_port_bytes;
  unsigned voq_peak = 0;
  LatencyHistogram hist;
  DeliveryHook hook;

  Impl(Topology tp, std::optional<traffic::TrafficConfig> tr, SimParams pr)
      : topo(std::move(tp)), traffic(std::move(tr)), params(std::move(pr)) {
    topo.validate();
    const unsigned rtt = topo.max_rtt();
    if (params.fixed_path_latency < rtt)
      throw Error(ErrorKind::config, "fixed path latency " +
                                         std::to_string(params.fixed_path_latency) +
                                         " is below the link RTT " + std::to_string(rtt));
    pipeline = params.fixed_path_latency - rtt;
    egress_cap = pipeline + 1 + params.egress_slack;

    bool lossy = false;
    bool trunks = false;
    for (const LinkSpec& l : topo.links) {
      lossy = lossy || l.cfg.ber > 0.0;
      trunks = trunks || (l.a.is_switch && l.b.is_switch);
    }
    // Extra headroom: cells already in an upstream switch's egress pipeline
    // ignore a pause, and on a lossy link a retransmission cycle can hold
    // back the pause frame.
    unsigned margin = 0;
    if (trunks) margin += egress_cap;
    if (lossy) margin += 2 * ((5 * rtt + 1) / 2) + rtt;
    unsigned max_ports = 0;
    for (const SwitchSpec& s : topo.switches) max_ports = std::max(max_ports, s.ports);
    const unsigned required = voq::required_capacity(rtt, max_ports).cells_per_channel;
    capacity = params.voq_capacity ? params.voq_capacity : required + margin;
    if (params.on_threshold) {
      th = {params.on_threshold, params.off_threshold};
    } else {
      th = voq::default_thresholds(capacity, rtt, margin);
    }

    build_links();
    build_switches();
    build_endpoints();
  }

  LinkEnd& end_of(unsigned link, bool side_a) {
    return side_a ? links[link]->a() : links[link]->b();
  }

  void build_links() {
    for (std::size_t k = 0; k < topo.links.size(); ++k) {
      const LinkSpec& l = topo.links[k];
      auto channels_for = [&](const PortRef& peer) {
        return peer.is_switch ? topo.switches[peer.node].ports - 1 : 0u;
      };
      links.push_back(std::make_unique<Link>(
          l.cfg, Rng::splitmix64(params.seed ^ (0x1000 + k) * 0x9E3779B97F4A7C15ULL),
          channels_for(l.b), channels_for(l.a)));
    }
  }

  void build_switches() {
    for (std::size_t s = 0; s < topo.switches.size(); ++s) {
      const SwitchSpec& spec = topo.switches[s];
      SwitchNode& n = sws.emplace_back();
      n.ports = spec.ports;
      n.kind = spec.scheduler;
      for (unsigned p = 0; p < spec.ports; ++p) n.banks.emplace_back(spec.ports, p, capacity, th);
      n.port_link.assign(spec.ports, -1);
      n.port_side_a.assign(spec.ports, true);
      for (unsigned p = 0; p < spec.ports; ++p) {
        const auto at = topo.attachment(PortRef::switch_port(static_cast<unsigned>(s), p));
        n.port_link[p] = at.link;
        n.port_side_a[p] = at.side_a;
        if (at.link >= 0 && at.peer.is_switch) n.trunk_mask |= std::uint64_t{1} << p;
      }
      if (spec.scheduler == SchedulerKind::islip) {
        const unsigned iters = spec.iterations ? spec.iterations
                                               : sched::default_iterations(spec.ports);
        n.islip.emplace(spec.ports, iters);
        n.fabric.emplace(spec.ports);
      } else {
        n.safc.emplace(spec.ports);
      }
      n.egress.resize(spec.ports);
      n.rows.assign(spec.ports, 0);
      n.matching = sched::Matching(spec.ports);
    }
  }

  void build_endpoints() {
    const unsigned n = topo.endpoints;
    eps.resize(n);
    per_port_bytes.assign(n, 0);
    for (unsigned e = 0; e < n; ++e) {
      EndpointNode& ep = eps[e];
      const auto at = topo.attachment(PortRef::endpoint(e));
      ep.link = static_cast<unsigned>(at.link);
      ep.side_a = at.side_a;
      ep.queues.resize(n);
      ep.nonempty = BitSet(n);
      ep.next_seq.assign(n, 0);
      ep.expect_seq.assign(n, 0);
      ep.route_checked.assign(n, false);
      ep.headers.resize(n);
      ep.first_channel.assign(n, 0);
      ep.front.assign(n, 0);
      ep.id = e;
      ep.small = n <= 64;
      ep.star_map = ep.small;
      for (unsigned d = 0; d < n; ++d) {
        if (d == e) continue;
        const std::vector<std::uint8_t> r = topo.route(e, d);
        l2::L2Header h;
        h.total_hops = static_cast<std::uint8_t>(r.size());
        h.remain_hops = h.total_hops;
        std::copy(r.begin(), r.end(), h.dst_ports.begin());
        ep.headers[d] = h;
        ep.first_channel[d] = r[0];
        if (r[0] != (d < e ? d : d - 1)) ep.star_map = false;
      }
      if (traffic) {
        traffic::TrafficConfig cfg = *traffic;
        ep.source.emplace(cfg, n - 1, Rng::derive(traffic->seed ^ params.seed, e));
      }
    }
  }

  // ---- per-slot phases ----

  void offer(unsigned e, unsigned d, std::uint16_t bytes, bool eop) {
    EndpointNode& ep = eps[e];
    if (ep.queues[d].empty()) {
      ep.front[d] = ep.offered;
      ep.flow_bits |= std::uint64_t{1} << (d % 64);
    }
    ep.queues[d].push_back((static_cast<std::uint64_t>(ep.offered++) << kOrderShift) |
                           (eop ? kEopBit : 0) | bytes);
    ep.nonempty.set(d);
    ++generated;
  }

  void phase_traffic() {
    if (!traffic) return;
    for (unsigned e = 0; e < eps.size(); ++e) {
      auto& src = eps[e].source;
      if (!src || src->exhausted()) continue;
      if (auto a = src->step()) offer(e, l2::output_for(e, a->dest), a->valid_bytes, a->eop);
    }
  }

  void arrive_at_switch(unsigned s, unsigned p, CellDesc&& cell) {
    SwitchNode& n = sws[s];
    const l2::RouteDecision r = l2::route_lookup(p, cell.hdr, n.ports);
    if (r.kind == l2::RouteDecision::Kind::broadcast)
      throw Error(ErrorKind::config, "broadcast cells are not simulated by the engine");
    const unsigned ch = cell.hdr.dst_ports[0];
    voq::Bank<CellDesc>& bank = n.banks[p];
    const auto on = bank.enqueue(ch, std::move(cell));
    voq_peak = std::max(voq_peak, bank.occupancy(ch));
    if (on) end_of(n.port_link[p], n.port_side_a[p]).queue_flow_control(on->on_channel, true);
  }

  void arrive_at_endpoint(unsigned e, const CellDesc& c) {
    if (c.hdr.remain_hops != 0)
      throw Error(ErrorKind::misdelivery, "cell reached endpoint " + std::to_string(e) +
                                              " with hops remaining");
    if (c.dst != e)
      throw Error(ErrorKind::misdelivery, "cell for endpoint " + std::to_string(c.dst) +
                                              " reached endpoint " + std::to_string(e));
    EndpointNode& ep = eps[e];
    if (c.flow_seq != ep.expect_seq[c.src])
      throw Error(ErrorKind::sequence_gap,
                  "flow " + std::to_string(c.src) + "->" + std::to_string(e) + " expected " +
                      std::to_string(ep.expect_seq[c.src]) + ", got " +
                      std::to_string(c.flow_seq));
    ++ep.expect_seq[c.src];
    if (!ep.route_checked[c.src]) {
      if (l2::source_address(c.hdr) != topo.route(e, c.src))
        throw Error(ErrorKind::misdelivery, "return route of flow " + std::to_string(c.src) +
                                                "->" + std::to_string(e) + " is wrong");
      ep.route_checked[c.src] = true;
    }
    const std::uint64_t lat = t - static_cast<std::uint64_t>(c.inject);
    hist.add(lat);
    ++delivered;
    payload_bytes += c.valid_bytes;
    wire_bytes += c.valid_bytes + l2::kHeaderBytes;
    per_port_bytes[e] += c.valid_bytes;
    last_delivery = static_cast<std::int64_t>(t);
    last_progress = t;
    if (hook) hook(c, t);
  }

  void arrive(const PortRef& where, std::optional<CellDesc>& cell) {
    if (!cell) return;
    if (where.is_switch) arrive_at_switch(where.node, where.port, std::move(*cell));
    else arrive_at_endpoint(where.node, *cell);
  }

  void phase_receive() {
    for (std::size_t k = 0; k < links.size(); ++k) {
      auto [at_a, at_b] = links[k]->receive();
      arrive(topo.links[k].a, at_a.cell);
      arrive(topo.links[k].b, at_b.cell);
    }
  }

  void move_cell(SwitchNode& n, unsigned i, unsigned o) {
    voq::Bank<CellDesc>& bank = n.banks[i];
    const unsigned ch = bank.channel_of(o);
    auto [cell, off] = bank.dequeue(ch);
    if (off) end_of(n.port_link[i], n.port_side_a[i]).queue_flow_control(off->off_channel, false);
    cell.hdr = l2::rotate_header(cell.hdr, i, o);
    n.egress[o].emplace_back(t + 1 + pipeline, cell);
  }

  void phase_schedule() {
    for (SwitchNode& n : sws) {
      std::uint64_t blocked = 0;
      for (unsigned o = 0; o < n.ports; ++o)
        if (n.egress[o].size() >= egress_cap) blocked |= std::uint64_t{1} << o;
      bool any = false;
      for (unsigned i = 0; i < n.ports; ++i) {
        std::uint64_t r = n.banks[i].request_mask() & ~blocked;
        for (std::uint64_t m = r & n.trunk_mask; m; m &= m - 1) {
          const unsigned o = static_cast<unsigned>(std::countr_zero(m));
          const CellDesc& head = n.banks[i].head(n.banks[i].channel_of(o));
          if (head.hdr.remain_hops >= 2 &&
              end_of(n.port_link[o], n.port_side_a[o]).paused(head.hdr.dst_ports[1]))
            r &= ~(std::uint64_t{1} << o);
        }
        n.rows[i] = r;
        any = any || r;
      }
      if (!any) continue;
      if (n.islip) {
        n.islip->schedule_into(n.rows, n.matching);
        n.fabric->transfer(n.matching.output_of_input, n.at_output);
      } else {
        n.safc->arbitrate_into(n.rows, n.at_output);
      }
      for (unsigned o = 0; o < n.ports; ++o)
        if (n.at_output[o] >= 0) move_cell(n, static_cast<unsigned>(n.at_output[o]), o);
    }
  }

  // Flow to serve next among nonempty flows whose first hop is not paused;
  // -1 when none.
  int choose_flow(EndpointNode& ep, const LinkEnd& end) const {
    if (ep.small) return choose_flow_small(ep, end);
    const unsigned n = static_cast<unsigned>(eps.size());
    unsigned pos = ep.rr;
    unsigned scanned = 0;
    int best = -1;
    std::uint64_t best_order = ~std::uint64_t{0};
    const bool fifo = params.endpoint_order == EndpointOrder::fifo;
    while (scanned < n) {
      const int found = ep.nonempty.next(pos);
      if (found < 0) break;
      const unsigned d = static_cast<unsigned>(found);
      const unsigned step = (d + n - pos) % n + 1;
      if (step > n - scanned) break;  // wrapped past the start
      scanned += step;
      pos = (d + 1) % n;
      if (!fifo && end.paused(ep.first_channel[d])) continue;
      if (params.endpoint_order == EndpointOrder::round_robin) return found;
      const std::uint64_t order = ep.queues[d].front() >> kOrderShift;
      if (order < best_order) {
        best_order = order;
        best = found;
      }
    }
    if (fifo && best >= 0 && end.paused(ep.first_channel[static_cast<unsigned>(best)]))
      return -1;
    return best;
  }

  int choose_flow_small(const EndpointNode& ep, const LinkEnd& end) const {
    std::uint64_t eligible = ep.flow_bits;
    if (!eligible) return -1;
    if (params.endpoint_order == EndpointOrder::fifo) {
      int head = -1;
      std::uint32_t head_order = ~std::uint32_t{0};
      for (std::uint64_t m = eligible; m; m &= m - 1) {
        const unsigned d = static_cast<unsigned>(std::countr_zero(m));
        if (ep.front[d] < head_order) {
          head_order = ep.front[d];
          head = static_cast<int>(d);
        }
      }
      return end.paused(ep.first_channel[static_cast<unsigned>(head)]) ? -1 : head;
    }
    if (ep.star_map) {
      const std::uint64_t p = end.paused_word(0);
      const std::uint64_t low = (std::uint64_t{1} << ep.id) - 1;
      eligible &= ~((p & low) | ((p & ~low) << 1));
    } else {
      for (std::uint64_t m = eligible; m; m &= m - 1) {
        const unsigned d = static_cast<unsigned>(std::countr_zero(m));
        if (end.paused(ep.first_channel[d])) eligible &= ~(std::uint64_t{1} << d);
      }
    }
    if (!eligible) return -1;
    if (params.endpoint_order == EndpointOrder::round_robin)
      return static_cast<int>(sched::round_robin_pick(eligible, ep.rr));
    int best = -1;
    std::uint32_t best_order = ~std::uint32_t{0};
    for (std::uint64_t m = eligible; m; m &= m - 1) {
      const unsigned d = static_cast<unsigned>(std::countr_zero(m));
      if (ep.front[d] < best_order) {
        best_order = ep.front[d];
        best = static_cast<int>(d);
      }
    }
    return best;
  }

  std::optional<CellDesc> pick_endpoint(unsigned e, LinkEnd& end) {
    EndpointNode& ep = eps[e];
    const int found = choose_flow(ep, end);
    if (found < 0) return std::nullopt;
    const unsigned d = static_cast<unsigned>(found);
    std::deque<std::uint64_t>& q = ep.queues[d];
    const std::uint64_t v = q.front();
    q.pop_front();
    if (q.empty()) {
      ep.nonempty.reset(d);
      ep.flow_bits &= ~(std::uint64_t{1} << (d % 64));
    } else {
      ep.front[d] = static_cast<std::uint32_t>(q.front() >> kOrderShift);
    }
    ep.rr = (d + 1) % static_cast<unsigned>(eps.size());
    CellDesc c;
    c.inject = static_cast<std::int64_t>(t);
    c.flow_seq = ep.next_seq[d]++;
    c.src = static_cast<std::uint16_t>(e);
    c.dst = static_cast<std::uint16_t>(d);
    c.valid_bytes = static_cast<std::uint16_t>(v & kBytesMask);
    c.eop = (v & kEopBit) != 0;
    c.hdr = ep.headers[d];
    if (first_injection < 0) first_injection = static_cast<std::int64_t>(t);
    last_progress = t;
    return c;
  }

  std::optional<CellDesc> produce(const PortRef& where, LinkEnd& end) {
    if (!end.can_send_data()) return std::nullopt;
    if (!where.is_switch) return pick_endpoint(where.node, end);
    auto& fifo = sws[where.node].egress[where.port];
    if (fifo.empty() || fifo.front().first > t) return std::nullopt;
    CellDesc c = fifo.front().second;
    fifo.pop_front();
    return c;
  }

  void phase_transmit() {
    for (std::size_t k = 0; k < links.size(); ++k) {
      Link& l = *links[k];
      auto da = produce(topo.links[k].a, l.a());
      auto db = produce(topo.links[k].b, l.b());
      l.transmit(std::move(da), std::move(db));
    }
  }

  bool sources_done() const {
    for (const EndpointNode& ep : eps)
      if (ep.source && !ep.source->exhausted()) return false;
    return true;
  }

  bool done() const { return sources_done() && delivered == generated; }

  void step() {
    phase_traffic();
    phase_receive();
    phase_schedule();
    phase_transmit();
    ++t;
    if (params.max_slots && t >= params.max_slots && !done())
      throw Error(ErrorKind::deadlock, "slot limit " + std::to_string(params.max_slots) +
                                           " reached with " +
                                           std::to_string(generated - delivered) +
                                           " cells outstanding");
    if (t - last_progress > params.stall_slots && !done() && generated > delivered)
      throw Error(ErrorKind::deadlock, "no progress for " +
                                           std::to_string(params.stall_slots) + " slots; " +
                                           std::to_string(generated - delivered) +
                                           " cells outstanding");
  }

  MetricsReport report() const {
    MetricsReport r;
    r.name = params.name;
    r.seed = params.seed;
    r.ports = topo.endpoints;
    r.scheduler = std::string(to_string(topo.switches.front().scheduler));
    if (traffic) {
      r.pattern = std::string(traffic::to_string(traffic->pattern));
      r.size_mode = std::string(traffic::to_string(traffic->size_mode));
      r.nominal_load = traffic->load;
      std::uint64_t cells = 0;
      std::uint64_t window = 0;
      for (const EndpointNode& ep : eps) {
        const traffic::SourceStats& s = ep.source->stats();
        if (s.cells == 0) continue;
        cells += s.cells;
        window += static_cast<std::uint64_t>(s.last_slot - s.first_slot + 1);
      }
      r.measured_load = window ? static_cast<double>(cells) / static_cast<double>(window) : 0;
    } else {
      r.pattern = "manual";
      r.size_mode = "-";
    }
    r.cells_injected = generated;
    r.cells_delivered = delivered;
    r.payload_bytes = payload_bytes;
    r.total_slots = t;
    if (delivered > 0) {
      r.first_injection = static_cast<std::uint64_t>(first_injection);
      r.last_delivery = static_cast<std::uint64_t>(last_delivery);
      r.slots = r.last_delivery - r.first_injection + 1;
      r.utilization = utilization(wire_bytes, topo.endpoints, l2::kFrameBytes, r.slots);
      r.goodput = utilization(payload_bytes, topo.endpoints, l2::kCellPayloadBytes, r.slots);
      for (std::size_t k = 0; k < kReportPercentiles.size(); ++k)
        r.latency[k] = hist.percentile(kReportPercentiles[k]);
      r.mean_latency = hist.mean();
    }
    for (const SwitchNode& n : sws) {
      for (const auto& b : n.banks) {
        r.fc_on += b.on_events();
        r.fc_off += b.off_events();
      }
    }
    for (const auto& l : links) {
      for (const LinkEnd* e : {&l->a(), &l->b()}) {
        r.retx_cycles += e->stats().cycles;
        r.redata_frames += e->stats().redata_sent;
        r.rereq_frames += e->stats().rereq_sent;
      }
      r.corrupted_frames += l->a_to_b().corrupted_count() + l->b_to_a().corrupted_count();
    }
    r.voq_capacity = capacity;
    r.voq_peak = voq_peak;
    r.delivered_bytes_per_port = per_port_bytes;
    return r;
  }
};

Engine::Engine(Topology topology, std::optional<traffic::TrafficConfig> traffic,
               SimParams params)
    : impl_(std::make_unique<Impl>(std::move(topology), std::move(traffic), std::move(params))) {}

Engine::~Engine() = default;

void Engine::inject_packet(unsigned src, unsigned dst, std::uint32_t bytes) {
  const unsigned n = impl_->topo.endpoints;
  if (src >= n || dst >= n || src == dst)
    throw Error(ErrorKind::invalid_input, "bad endpoint pair");
  if (bytes == 0) throw Error(ErrorKind::invalid_input, "empty payload");
  const std::size_t cells = l2::cells_for(bytes);
  for (std::size_t k = 0; k < cells; ++k) {
    const std::uint32_t left = bytes - static_cast<std::uint32_t>(k * l2::kCellPayloadBytes);
    const auto v = static_cast<std::uint16_t>(
        std::min<std::uint32_t>(left, l2::kCellPayloadBytes));
    impl_->offer(src, dst, v, k + 1 == cells);
  }
}

void Engine::set_delivery_hook(DeliveryHook hook) { impl_->hook = std::move(hook); }

void Engine::apply_faults(unsigned link, const std::vector<link::FaultEvent>& faults) {
  if (link >= impl_->links.size()) throw Error(ErrorKind::config, "no such link");
  impl_->links[link]->apply(faults);
}

bool Engine::done() const { return impl_->done(); }
void Engine::step() { impl_->step(); }

MetricsReport Engine::run() {
  while (!impl_->done()) impl_->step();
  return impl_->report();
}

MetricsReport Engine::report() const { return impl_->report(); }
std::uint64_t Engine::slot() const { return impl_->t; }
const LatencyHistogram& Engine::latency() const { return impl_->hist; }
unsigned Engine::voq_capacity() const { return impl_->capacity; }
voq::Thresholds Engine::thresholds() const { return impl_->th; }
unsigned Engine::pipeline() const { return impl_->pipeline; }
const Topology& Engine::topology() const { return impl_->topo; }

MetricsReport run(const Topology& topology, const traffic::TrafficConfig& traffic,
                  const SimParams& params) {
  Engine e(topology, traffic, params);
  return e.run();
}

}  // namespace rifl::sim
