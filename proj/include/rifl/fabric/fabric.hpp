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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rifl/error.hpp"
#include "rifl/sched/matching.hpp"

namespace rifl::fabric {

template <class P>
struct TaggedCell {
  bool active = false;
  unsigned dest = 0;
  P payload{};
};

/// After the comparator, lane `lo` holds the smaller key when `ascending`,
/// the larger one otherwise.
struct Comparator {
  std::uint16_t lo = 0;
  std::uint16_t hi = 0;
  bool ascending = true;
};

struct ComparatorNetwork {
  unsigned lanes = 0;
  std::vector<std::vector<Comparator>> stages;
};

bool is_power_of_two(unsigned n);
unsigned log2_exact(unsigned n);  // throws config unless a power of two >= 2

/// log2(N) (log2(N) + 1) / 2
unsigned batcher_stage_count(unsigned lanes);
/// log2(N)
unsigned banyan_stage_count(unsigned lanes);

/// Bitonic merge-sort network on `lanes` inputs.
ComparatorNetwork bitonic_network(unsigned lanes);

/// One lane in the index-based model: key == lanes means inactive.
struct Lane {
  std::uint16_t key = 0;
  std::int16_t input = -1;
};

/// Text snapshot of lane contents after every stage, for one transfer.
struct StageTrace {
  std::vector<std::string> rows;
  void dump(std::ostream& os) const;
};

/// The Batcher sorter and a self-routing omega banyan for one port count.
///
/// Banyan stage: perfect shuffle (rotate the lane index left by one bit),
/// then each 2x2 element sends a cell to its upper or lower output by the
/// next destination bit, most significant first. Two cells asking for the
/// same element output is an internal collision.
class BatcherBanyan {
 public:
  explicit BatcherBanyan(unsigned ports);

  unsigned ports() const { return ports_; }
  const ComparatorNetwork& sorter() const { return net_; }

  /// Runs the comparator stages in place; inactive lanes carry key == ports.
  void sort(std::span<Lane> lanes, StageTrace* trace = nullptr) const;

  /// Routes sorted lanes; out[o] = input delivered at output o, or -1.
  void route(std::span<const Lane> lanes, std::vector<int>& out,
             StageTrace* trace = nullptr) const;

  /// dest_of_input[i] = granted output or -1. Fills input_at_output.
  void transfer(std::span<const int> dest_of_input, std::vector<int>& input_at_output,
                StageTrace* trace = nullptr);

 private:
  unsigned ports_;
  unsigned bits_;
  ComparatorNetwork net_;
  std::vector<Lane> scratch_;
};

/// Shared instance per port count.
const BatcherBanyan& network_for(unsigned ports);

template <class P>
std::vector<TaggedCell<P>> batcher_sort(std::vector<TaggedCell<P>> lanes) {
  const unsigned n = static_cast<unsigned>(lanes.size());
  const ComparatorNetwork& net = network_for(n).sorter();
  auto key = [n](const TaggedCell<P>& c) { return c.active ? c.dest : n; };
  for (const auto& stage : net.stages) {
    for (const Comparator& c : stage) {
      const bool out_of_order = c.ascending ? key(lanes[c.lo]) > key(lanes[c.hi])
                                            : key(lanes[c.lo]) < key(lanes[c.hi]);
      if (out_of_order) std::swap(lanes[c.lo], lanes[c.hi]);
    }
  }
  return lanes;
}

template <class P>
std::vector<std::optional<P>> banyan_route(std::vector<TaggedCell<P>> lanes) {
  const unsigned n = static_cast<unsigned>(lanes.size());
  const BatcherBanyan& net = network_for(n);
  std::vector<Lane> idx(n);
  for (unsigned l = 0; l < n; ++l) {
    if (lanes[l].active && lanes[l].dest >= n)
      throw Error(ErrorKind::invalid_input, "destination out of range");
    idx[l].key = static_cast<std::uint16_t>(lanes[l].active ? lanes[l].dest : n);
    idx[l].input = static_cast<std::int16_t>(l);
  }
  std::vector<int> at;
  net.route(idx, at);
  std::vector<std::optional<P>> out(n);
  for (unsigned o = 0; o < n; ++o)
    if (at[o] >= 0) out[o] = std::move(lanes[at[o]].payload);
  return out;
}

/// Granted head cells through sorter and banyan to their outputs.
template <class P>
std::vector<std::optional<P>> fabric_transfer(const sched::Matching& grants,
                                              std::vector<std::optional<P>> heads) {
  const unsigned n = grants.ports();
  if (heads.size() != n) throw Error(ErrorKind::invalid_input, "head count mismatch");
  std::vector<TaggedCell<P>> lanes(n);
  for (unsigned i = 0; i < n; ++i) {
    const int o = grants.output_of_input[i];
    if (o < 0) continue;
    if (!heads[i]) throw Error(ErrorKind::invalid_input, "granted input has no cell");
    lanes[i].active = true;
    lanes[i].dest = static_cast<unsigned>(o);
    lanes[i].payload = std::move(*heads[i]);
  }
  return banyan_route(batcher_sort(std::move(lanes)));
}

}  // namespace rifl::fabric
