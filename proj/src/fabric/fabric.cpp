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

#include "rifl/fabric/fabric.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <memory>
#include <mutex>
#include <sstream>

namespace rifl::fabric {

bool is_power_of_two(unsigned n) { return n != 0 && (n & (n - 1)) == 0; }

unsigned log2_exact(unsigned n) {
  if (n < 2 || !is_power_of_two(n))
    throw Error(ErrorKind::config,
                "fabric needs a power-of-two port count, got " + std::to_string(n));
  unsigned b = 0;
  while ((1u << b) < n) ++b;
  return b;
}

unsigned batcher_stage_count(unsigned lanes) {
  const unsigned k = log2_exact(lanes);
  return k * (k + 1) / 2;
}

unsigned banyan_stage_count(unsigned lanes) { return log2_exact(lanes); }

ComparatorNetwork bitonic_network(unsigned lanes) {
  log2_exact(lanes);
  ComparatorNetwork net;
  net.lanes = lanes;
  // Bitonic sorter in its all-ascending form: the first layer of each merge
  // compares mirrored lanes (i, i ^ (k - 1)) instead of reversing direction
  // on alternate blocks; the remaining layers are the usual half-cleaners.
  for (unsigned k = 2; k <= lanes; k <<= 1) {
    for (unsigned j = k >> 1; j > 0; j >>= 1) {
      const unsigned flip = (j == k >> 1) ? k - 1 : j;
      std::vector<Comparator> stage;
      for (unsigned i = 0; i < lanes; ++i) {
        const unsigned l = i ^ flip;
        if (l > i)
          stage.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(l), true});
      }
      net.stages.push_back(std::move(stage));
    }
  }
  return net;
}

void StageTrace::dump(std::ostream& os) const {
  for (const std::string& r : rows) os << r << '\n';
}

namespace {

std::string lane_row(const char* tag, unsigned stage, std::span<const Lane> lanes,
                     unsigned inactive) {
  std::ostringstream os;
  os << tag << ' ' << stage << ':';
  for (const Lane& l : lanes) {
    if (l.key >= inactive) os << " --";
    else os << ' ' << l.input << '>' << l.key;
  }
  return os.str();
}

}  // namespace

BatcherBanyan::BatcherBanyan(unsigned ports)
    : ports_(ports), bits_(log2_exact(ports)), net_(bitonic_network(ports)),
      scratch_(ports) {}

void BatcherBanyan::sort(std::span<Lane> lanes, StageTrace* trace) const {
  if (lanes.size() != ports_) throw Error(ErrorKind::invalid_input, "lane count mismatch");
  if (trace) trace->rows.push_back(lane_row("in", 0, lanes, ports_));
  // Comparators act on (key << 8 | lane of origin) words; the origin only
  // carries the lane contents along.
  std::array<std::uint32_t, 64> w;
  for (unsigned l = 0; l < ports_; ++l) w[l] = (std::uint32_t{lanes[l].key} << 8) | l;
  std::array<Lane, 64> orig;
  std::copy(lanes.begin(), lanes.end(), orig.begin());
  auto write_back = [&] {
    for (unsigned l = 0; l < ports_; ++l) lanes[l] = orig[w[l] & 0xFF];
  };
  unsigned s = 0;
  for (const auto& stage : net_.stages) {
    for (const Comparator& c : stage) {
      const std::uint32_t a = w[c.lo];
      const std::uint32_t b = w[c.hi];
      w[c.lo] = std::min(a, b);
      w[c.hi] = std::max(a, b);
    }
    if (trace) {
      write_back();
      trace->rows.push_back(lane_row("sort", ++s, lanes, ports_));
    }
  }
  write_back();
}

void BatcherBanyan::route(std::span<const Lane> lanes, std::vector<int>& out,
                          StageTrace* trace) const {
  if (lanes.size() != ports_) throw Error(ErrorKind::invalid_input, "lane count mismatch");
  // Occupied positions are tracked as a bit mask, so each stage only visits
  // active cells.
  std::array<Lane, 64> buf_a;
  std::array<Lane, 64> buf_b;
  Lane* cur = buf_a.data();
  Lane* next = buf_b.data();
  std::uint64_t occ = 0;
  for (unsigned l = 0; l < ports_; ++l) {
    if (lanes[l].key >= ports_) continue;
    cur[l] = lanes[l];
    occ |= std::uint64_t{1} << l;
  }
  const unsigned mask = ports_ - 1;
  auto snapshot = [&](unsigned stage) {
    std::array<Lane, 64> view;
    std::fill(view.begin(), view.begin() + ports_, Lane{static_cast<std::uint16_t>(ports_), -1});
    for (std::uint64_t m = occ; m; m &= m - 1) {
      const unsigned p = static_cast<unsigned>(std::countr_zero(m));
      view[p] = cur[p];
    }
    trace->rows.push_back(lane_row("banyan", stage, {view.data(), ports_}, ports_));
  };

  for (unsigned s = 0; s < bits_; ++s) {
    const unsigned bit = bits_ - 1 - s;
    std::uint64_t next_occ = 0;
    for (std::uint64_t m = occ; m; m &= m - 1) {
      const unsigned p = static_cast<unsigned>(std::countr_zero(m));
      const Lane& c = cur[p];
      const unsigned shuffled = ((p << 1) | (p >> (bits_ - 1))) & mask;
      const unsigned target = (shuffled & ~1u) | ((c.key >> bit) & 1u);
      const std::uint64_t tb = std::uint64_t{1} << target;
      if (next_occ & tb)
        throw Error(ErrorKind::fabric_collision,
                    "banyan stage " + std::to_string(s) + " element " +
                        std::to_string(target / 2) + ": inputs " +
                        std::to_string(next[target].input) + " and " +
                        std::to_string(c.input));
      next_occ |= tb;
      next[target] = c;
    }
    std::swap(cur, next);
    occ = next_occ;
    if (trace) snapshot(s + 1);
  }
  out.assign(ports_, -1);
  for (std::uint64_t m = occ; m; m &= m - 1) {
    const unsigned p = static_cast<unsigned>(std::countr_zero(m));
    if (cur[p].key != p)
      throw Error(ErrorKind::fabric_collision, "cell for output " +
                                                   std::to_string(cur[p].key) +
                                                   " exited at " + std::to_string(p));
    out[p] = cur[p].input;
  }
}

void BatcherBanyan::transfer(std::span<const int> dest_of_input,
                             std::vector<int>& input_at_output, StageTrace* trace) {
  if (dest_of_input.size() != ports_)
    throw Error(ErrorKind::invalid_input, "grant vector size mismatch");
  for (unsigned i = 0; i < ports_; ++i) {
    const int d = dest_of_input[i];
    scratch_[i].key = static_cast<std::uint16_t>(d < 0 ? ports_ : static_cast<unsigned>(d));
    scratch_[i].input = static_cast<std::int16_t>(i);
  }
  sort(scratch_, trace);
  route(scratch_, input_at_output, trace);
}

const BatcherBanyan& network_for(unsigned ports) {
  static std::mutex mu;
  static std::array<std::unique_ptr<BatcherBanyan>, 7> cache;
  const unsigned b = log2_exact(ports);
  if (b > 6) throw Error(ErrorKind::config, "fabric supports up to 64 ports");
  std::lock_guard lock(mu);
  if (!cache[b]) cache[b] = std::make_unique<BatcherBanyan>(ports);
  return *cache[b];
}

}  // namespace rifl::fabric
