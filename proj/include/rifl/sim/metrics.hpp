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
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace rifl::sim {

// p0 is the minimum under nearest rank.
inline constexpr std::array<double, 8> kReportPercentiles = {0, 1, 50, 75, 90, 95, 99, 100};

/// Nearest-rank percentile: the value at 1-based rank ceil(p/100 * n) of the
/// sorted samples (rank at least 1).
std::uint64_t percentile(std::span<const std::uint64_t> samples, double p);

/// 1-based nearest rank for n samples.
std::uint64_t nearest_rank(std::uint64_t n, double p);

/// Exact latency distribution over integer cell times.
class LatencyHistogram {
 public:
  void add(std::uint64_t v);
  void merge(const LatencyHistogram& other);

  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::uint64_t min() const;
  std::uint64_t max() const;
  double mean() const;
  std::uint64_t percentile(double p) const;
  const std::vector<std::uint64_t>& buckets() const { return buckets_; }

 private:
  std::vector<std::uint64_t> buckets_;
  std::uint64_t count_ = 0;
  long double sum_ = 0;
};

/// delivered / (ports * bytes_per_slot * slots)
double utilization(std::uint64_t delivered_bytes, unsigned ports,
                   std::uint64_t bytes_per_slot, std::uint64_t slots);

struct MetricsReport {
  std::string name;
  std::string pattern;
  std::string size_mode;
  std::string scheduler;
  unsigned ports = 0;
  std::uint64_t seed = 0;
  double nominal_load = 0;
  double measured_load = 0;
  double utilization = 0;  // payload + header bytes over line capacity
  double goodput = 0;      // payload bytes only
  std::array<std::uint64_t, kReportPercentiles.size()> latency{};
  double mean_latency = 0;
  std::uint64_t cells_injected = 0;
  std::uint64_t cells_delivered = 0;
  std::uint64_t payload_bytes = 0;
  std::uint64_t first_injection = 0;
  std::uint64_t last_delivery = 0;
  std::uint64_t slots = 0;          // measured interval
  std::uint64_t total_slots = 0;    // simulated slots
  std::uint64_t fc_on = 0;
  std::uint64_t fc_off = 0;
  std::uint64_t retx_cycles = 0;
  std::uint64_t redata_frames = 0;
  std::uint64_t rereq_frames = 0;
  std::uint64_t corrupted_frames = 0;
  unsigned voq_capacity = 0;
  unsigned voq_peak = 0;
  std::uint64_t voq_overflows = 0;
  std::vector<std::uint64_t> delivered_bytes_per_port;

  static std::string csv_header();
  std::string csv_row() const;
  void summary(std::ostream& os) const;
};

}  // namespace rifl::sim
