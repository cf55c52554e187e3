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

#include "rifl/traffic/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "rifl/error.hpp"
#include "rifl/l2/codec.hpp"

namespace rifl::traffic {

std::string_view to_string(Pattern p) {
  return p == Pattern::bernoulli ? "bernoulli" : "bursty";
}

std::string_view to_string(SizeMode m) {
  return m == SizeMode::fixed ? "fixed" : "variable";
}

Pattern parse_pattern(std::string_view s) {
  if (s == "bernoulli") return Pattern::bernoulli;
  if (s == "bursty" || s == "burst") return Pattern::bursty;
  throw Error(ErrorKind::config, "unknown traffic pattern '" + std::string(s) + "'");
}

SizeMode parse_size_mode(std::string_view s) {
  if (s == "fixed") return SizeMode::fixed;
  if (s == "variable") return SizeMode::variable;
  throw Error(ErrorKind::config, "unknown size mode '" + std::string(s) + "'");
}

void TrafficConfig::validate() const {
  if (!(load > 0.0 && load <= 1.0))
    throw Error(ErrorKind::config, "load must be in (0, 1], got " + std::to_string(load));
  if (per_flow_bytes == 0) throw Error(ErrorKind::config, "per_flow_bytes must be > 0");
  if (fixed_packet_bytes == 0 || fixed_packet_bytes % l2::kCellPayloadBytes != 0)
    throw Error(ErrorKind::config, "fixed packet size must be a multiple of 256");
  if (min_packet_bytes == 0 || min_packet_bytes > max_packet_bytes)
    throw Error(ErrorKind::config, "variable packet range is empty");
  if (!(mean_burst_bytes >= 1.0))
    throw Error(ErrorKind::config, "mean_burst_bytes must be >= 1");
  if (pattern == Pattern::bursty && size_mode == SizeMode::fixed &&
      mean_burst_bytes < l2::kCellPayloadBytes)
    throw Error(ErrorKind::config, "fixed-size bursts need mean_burst_bytes >= 256");
}

std::uint32_t draw_packet_size(const TrafficConfig& cfg, Rng& rng) {
  if (cfg.size_mode == SizeMode::fixed) return cfg.fixed_packet_bytes;
  return static_cast<std::uint32_t>(rng.between(cfg.min_packet_bytes, cfg.max_packet_bytes));
}

Source::Source(const TrafficConfig& cfg, unsigned destinations, Rng rng)
    : cfg_(cfg), rng_(rng), remaining_(destinations, cfg.per_flow_bytes) {
  cfg_.validate();
  live_.resize(destinations);
  live_pos_.resize(destinations);
  for (unsigned d = 0; d < destinations; ++d) live_[d] = live_pos_[d] = d;
}

unsigned Source::pick_destination() {
  return live_[rng_.below(live_.size())];
}

void Source::retire_if_empty(unsigned dest) {
  if (remaining_[dest] != 0) return;
  const unsigned pos = live_pos_[dest];
  const unsigned last = live_.back();
  live_[pos] = last;
  live_pos_[last] = pos;
  live_.pop_back();
}

void Source::start_packet(unsigned dest, std::uint64_t max_bytes) {
  const std::uint64_t size = std::min<std::uint64_t>(draw_packet_size(cfg_, rng_), max_bytes);
  remaining_[dest] -= size;
  retire_if_empty(dest);
  cur_dest_ = dest;
  packet_left_ = static_cast<std::uint32_t>(size);
  ++stats_.packets;
}

Arrival Source::next_cell() {
  Arrival a;
  a.dest = cur_dest_;
  a.valid_bytes = static_cast<std::uint16_t>(
      std::min<std::uint32_t>(packet_left_, l2::kCellPayloadBytes));
  packet_left_ -= a.valid_bytes;
  a.eop = packet_left_ == 0;
  ++stats_.cells;
  stats_.payload_bytes += a.valid_bytes;
  return a;
}

std::optional<Arrival> Source::step() {
  if (exhausted()) return std::nullopt;
  const auto slot = static_cast<std::int64_t>(stats_.slots++);
  std::optional<Arrival> out;

  if (cfg_.pattern == Pattern::bernoulli) {
    if (!rng_.bernoulli(cfg_.load)) return std::nullopt;
    if (!in_packet()) {
      const unsigned d = pick_destination();
      start_packet(d, remaining_[d]);
    }
    out = next_cell();
  } else {
    if (idle_left_ > 0) {
      --idle_left_;
      return std::nullopt;
    }
    if (!in_packet()) {
      if (burst_left_ == 0) {
        cur_dest_ = pick_destination();
        if (cfg_.size_mode == SizeMode::fixed) {
          const double p = l2::kCellPayloadBytes / cfg_.mean_burst_bytes;
          burst_left_ = rng_.geometric_trials(p) * l2::kCellPayloadBytes;
        } else {
          burst_left_ = rng_.geometric_trials(1.0 / cfg_.mean_burst_bytes);
        }
        burst_cells_ = 0;
        ++stats_.bursts;
      }
      const unsigned d = cur_dest_;
      const std::uint64_t before = remaining_[d];
      start_packet(d, std::min(burst_left_, before));
      burst_left_ -= before - remaining_[d];
      if (remaining_[d] == 0) burst_left_ = 0;
    }
    out = next_cell();
    ++burst_cells_;
    if (!in_packet() && burst_left_ == 0) {
      stats_.burst_cells += burst_cells_;
      const double mean_idle =
          static_cast<double>(burst_cells_) * (1.0 - cfg_.load) / cfg_.load;
      idle_left_ = rng_.geometric_failures_with_mean(mean_idle);
    }
  }

  if (stats_.first_slot < 0) stats_.first_slot = slot;
  stats_.last_slot = slot;
  return out;
}

TraceWriter::TraceWriter(std::ostream& os) : os_(os) {
  os_ << "slot,src,dst,bytes,eop\n";
}

void TraceWriter::write(std::uint64_t slot, unsigned src, unsigned dst, const Arrival& a) {
  os_ << slot << ',' << src << ',' << dst << ',' << a.valid_bytes << ','
      << (a.eop ? 1 : 0) << '\n';
}

}  // namespace rifl::traffic
