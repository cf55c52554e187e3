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

#include "rifl/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rifl/error.hpp"

namespace rifl::sim {

std::uint64_t nearest_rank(std::uint64_t n, double p) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "percentile of no samples");
  if (!(p >= 0.0 && p <= 100.0))
    throw Error(ErrorKind::invalid_input, "percentile outside [0, 100]");
  const auto rank = static_cast<std::uint64_t>(std::ceil(p * static_cast<double>(n) / 100.0));
  return std::clamp<std::uint64_t>(rank, 1, n);
}

std::uint64_t percentile(std::span<const std::uint64_t> samples, double p) {
  const std::uint64_t rank = nearest_rank(samples.size(), p);
  std::vector<std::uint64_t> v(samples.begin(), samples.end());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

void LatencyHistogram::add(std::uint64_t v) {
  if (v >= buckets_.size()) buckets_.resize(std::max<std::size_t>(v + 1, buckets_.size() * 2), 0);
  ++buckets_[v];
  ++count_;
  sum_ += v;
}

void LatencyHistogram::merge(const LatencyHistogram& other) {
  if (other.buckets_.size() > buckets_.size()) buckets_.resize(other.buckets_.size(), 0);
  for (std::size_t i = 0; i < other.buckets_.size(); ++i) buckets_[i] += other.buckets_[i];
  count_ += other.count_;
  sum_ += other.sum_;
}

std::uint64_t LatencyHistogram::min() const {
  for (std::size_t i = 0; i < buckets_.size(); ++i)
    if (buckets_[i]) return i;
  throw Error(ErrorKind::invalid_input, "empty histogram");
}

std::uint64_t LatencyHistogram::max() const {
  for (std::size_t i = buckets_.size(); i-- > 0;)
    if (buckets_[i]) return i;
  throw Error(ErrorKind::invalid_input, "empty histogram");
}

double LatencyHistogram::mean() const {
  return count_ ? static_cast<double>(sum_ / count_) : 0.0;
}

std::uint64_t LatencyHistogram::percentile(double p) const {
  const std::uint64_t rank = nearest_rank(count_, p);
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    seen += buckets_[i];
    if (seen >= rank) return i;
  }
  throw Error(ErrorKind::invalid_input, "histogram rank out of range");
}

double utilization(std::uint64_t delivered_bytes, unsigned ports,
                   std::uint64_t bytes_per_slot, std::uint64_t slots) {
  if (ports == 0 || bytes_per_slot == 0 || slots == 0)
    throw Error(ErrorKind::invalid_input, "utilization needs a nonzero interval");
  return static_cast<double>(delivered_bytes) /
         (static_cast<double>(ports) * static_cast<double>(bytes_per_slot) *
          static_cast<double>(slots));
}

std::string MetricsReport::csv_header() {
  return "name,pattern,size_mode,scheduler,ports,seed,nominal_load,measured_load,"
         "utilization,goodput,p0,p1,p50,p75,p90,p95,p99,p100,mean_latency,"
         "cells_delivered,slots,retx_cycles,redata_frames,fc_events,voq_capacity,"
         "voq_peak";
}

std::string MetricsReport::csv_row() const {
  std::ostringstream os;
  os << std::fixed;
  os << name << ',' << pattern << ',' << size_mode << ',' << scheduler << ',' << ports
     << ',' << seed << ',' << std::setprecision(3) << nominal_load * 100 << ','
     << measured_load * 100 << std::setprecision(2) << ',' << utilization * 100 << ','
     << goodput * 100;
  for (std::uint64_t v : latency) os << ',' << v;
  os << ',' << mean_latency << ',' << cells_delivered << ',' << slots << ','
     << retx_cycles << ',' << redata_frames << ',' << fc_on + fc_off << ','
     << voq_capacity << ',' << voq_peak;
  return os.str();
}

void MetricsReport::summary(std::ostream& os) const {
  os << name << ": " << pattern << '/' << size_mode << '/' << scheduler << " N=" << ports
     << " load " << std::fixed << std::setprecision(2) << nominal_load * 100
     << "% (measured " << measured_load * 100 << "%)\n";
  os << "  utilization " << utilization * 100 << "%  goodput " << goodput * 100 << "%  over "
     << slots << " slots, " << cells_delivered << " cells\n";
  os << "  latency (cell times)";
  for (std::size_t k = 0; k < latency.size(); ++k)
    os << "  p" << static_cast<int>(kReportPercentiles[k]) << '=' << latency[k];
  os << "  mean=" << std::setprecision(1) << mean_latency << '\n';
  os << "  fc on/off " << fc_on << '/' << fc_off << "  retx cycles " << retx_cycles
     << "  corrupted frames " << corrupted_frames << "  voq peak " << voq_peak << '/'
     << voq_capacity << '\n';
}

}  // namespace rifl::sim
