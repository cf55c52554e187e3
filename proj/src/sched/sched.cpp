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

#include <bit>
#include <string>

#include "rifl/error.hpp"
#include "rifl/sched/islip.hpp"
#include "rifl/sched/matching.hpp"

namespace rifl::sched {

namespace {

void transpose(std::span<const std::uint64_t> rows, std::vector<std::uint64_t>& cols) {
  std::fill(cols.begin(), cols.end(), 0);
  for (unsigned i = 0; i < rows.size(); ++i) {
    for (std::uint64_t m = rows[i]; m; m &= m - 1)
      cols[std::countr_zero(m)] |= std::uint64_t{1} << i;
  }
}

void check_ports(unsigned ports) {
  if (ports < 2 || ports > 64)
    throw Error(ErrorKind::config, "scheduler supports 2..64 ports, got " +
                                       std::to_string(ports));
}

}  // namespace

RequestMatrix RequestMatrix::from_bools(const std::vector<std::vector<bool>>& bits) {
  const unsigned n = static_cast<unsigned>(bits.size());
  if (n < 1 || n > 64) throw Error(ErrorKind::invalid_input, "bad request matrix size");
  RequestMatrix m(n);
  for (unsigned i = 0; i < n; ++i) {
    if (bits[i].size() != n)
      throw Error(ErrorKind::invalid_input, "request matrix is not square");
    for (unsigned o = 0; o < n; ++o) {
      if (!bits[i][o]) continue;
      if (i == o)
        throw Error(ErrorKind::invalid_input,
                    "input " + std::to_string(i) + " requests itself");
      m.set(i, o);
    }
  }
  return m;
}

void Matching::clear() {
  std::fill(output_of_input.begin(), output_of_input.end(), -1);
  std::fill(input_of_output.begin(), input_of_output.end(), -1);
}

void Matching::add(unsigned input, unsigned output) {
  output_of_input[input] = static_cast<int>(output);
  input_of_output[output] = static_cast<int>(input);
}

unsigned Matching::size() const {
  unsigned n = 0;
  for (int o : output_of_input) n += o >= 0;
  return n;
}

bool Matching::valid_for(const RequestMatrix& req) const {
  const unsigned n = ports();
  if (req.ports() != n || input_of_output.size() != n) return false;
  std::vector<bool> used(n, false);
  unsigned pairs = 0;
  for (unsigned i = 0; i < n; ++i) {
    const int o = output_of_input[i];
    if (o < 0) continue;
    if (static_cast<unsigned>(o) >= n || used[o]) return false;
    if (!req.get(i, static_cast<unsigned>(o))) return false;
    if (input_of_output[o] != static_cast<int>(i)) return false;
    used[o] = true;
    ++pairs;
  }
  unsigned back = 0;
  for (int i : input_of_output) back += i >= 0;
  return back == pairs;
}

unsigned default_iterations(unsigned ports) { return ports <= 32 ? 3 : 1; }

Islip::Islip(unsigned ports, unsigned iterations)
    : ports_(ports),
      iterations_(iterations),
      grant_(ports, 0),
      accept_(ports, 0),
      cols_(ports, 0),
      grants_to_(ports, 0) {
  check_ports(ports);
  if (iterations == 0) throw Error(ErrorKind::config, "iSLIP needs >= 1 iteration");
}

Matching Islip::schedule(const RequestMatrix& requests) {
  if (requests.ports() != ports_)
    throw Error(ErrorKind::invalid_input, "request matrix size mismatch");
  for (unsigned i = 0; i < ports_; ++i)
    if (requests.get(i, i))
      throw Error(ErrorKind::invalid_input,
                  "input " + std::to_string(i) + " requests itself");
  Matching m(ports_);
  schedule_into(requests.rows(), m);
  return m;
}

void Islip::schedule_into(std::span<const std::uint64_t> rows, Matching& out) {
  out.clear();
  transpose(rows, cols_);
  const std::uint64_t all =
      ports_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ports_) - 1;
  std::uint64_t free_in = all;
  std::uint64_t free_out = all;

  for (unsigned iter = 0; iter < iterations_; ++iter) {
    // Grant: each unmatched output picks one requesting unmatched input.
    std::uint64_t granted_inputs = 0;
    for (std::uint64_t outs = free_out; outs; outs &= outs - 1) {
      const unsigned o = static_cast<unsigned>(std::countr_zero(outs));
      const std::uint64_t cand = cols_[o] & free_in;
      if (!cand) continue;
      const unsigned i = round_robin_pick(cand, grant_[o]);
      if (!((granted_inputs >> i) & 1)) grants_to_[i] = 0;
      granted_inputs |= std::uint64_t{1} << i;
      grants_to_[i] |= std::uint64_t{1} << o;
    }
    if (!granted_inputs) break;

    // Accept: each granted input picks one granting output.
    for (std::uint64_t ins = granted_inputs; ins; ins &= ins - 1) {
      const unsigned i = static_cast<unsigned>(std::countr_zero(ins));
      const unsigned o = round_robin_pick(grants_to_[i], accept_[i]);
      out.add(i, o);
      free_in &= ~(std::uint64_t{1} << i);
      free_out &= ~(std::uint64_t{1} << o);
      if (iter == 0) {
        accept_[i] = (o + 1) % ports_;
        grant_[o] = (i + 1) % ports_;
      }
    }
  }
}

void Islip::set_pointers(std::vector<unsigned> grant, std::vector<unsigned> accept) {
  if (grant.size() != ports_ || accept.size() != ports_)
    throw Error(ErrorKind::invalid_input, "pointer vector size mismatch");
  for (unsigned p : grant)
    if (p >= ports_) throw Error(ErrorKind::invalid_input, "grant pointer out of range");
  for (unsigned p : accept)
    if (p >= ports_) throw Error(ErrorKind::invalid_input, "accept pointer out of range");
  grant_ = std::move(grant);
  accept_ = std::move(accept);
}

SafcArbiter::SafcArbiter(unsigned ports) : ports_(ports), ptr_(ports, 0), cols_(ports, 0) {
  check_ports(ports);
}

void SafcArbiter::arbitrate_into(std::span<const std::uint64_t> rows,
                                 std::vector<int>& out) {
  out.assign(ports_, -1);
  transpose(rows, cols_);
  for (unsigned o = 0; o < ports_; ++o) {
    if (!cols_[o]) continue;
    const unsigned i = round_robin_pick(cols_[o], ptr_[o]);
    out[o] = static_cast<int>(i);
    ptr_[o] = (i + 1) % ports_;
  }
}

std::vector<int> SafcArbiter::arbitrate(std::span<const std::uint64_t> rows) {
  std::vector<int> out;
  arbitrate_into(rows, out);
  return out;
}

std::vector<int> SafcArbiter::arbitrate(
    const std::vector<std::vector<unsigned>>& occupancy) {
  if (occupancy.size() != ports_)
    throw Error(ErrorKind::invalid_input, "occupancy matrix size mismatch");
  std::vector<std::uint64_t> rows(ports_, 0);
  for (unsigned i = 0; i < ports_; ++i) {
    if (occupancy[i].size() != ports_)
      throw Error(ErrorKind::invalid_input, "occupancy matrix is not square");
    for (unsigned o = 0; o < ports_; ++o)
      if (occupancy[i][o] > 0) rows[i] |= std::uint64_t{1} << o;
  }
  return arbitrate(rows);
}

}  // namespace rifl::sched
