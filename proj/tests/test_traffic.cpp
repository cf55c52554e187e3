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
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rifl/error.hpp"
#include "rifl/traffic/traffic.hpp"

using namespace rifl;
using namespace rifl::traffic;

namespace {

TrafficConfig config(Pattern p, SizeMode m, double load, std::uint64_t per_flow) {
  TrafficConfig c;
  c.pattern = p;
  c.size_mode = m;
  c.load = load;
  c.per_flow_bytes = per_flow;
  c.seed = 7;
  return c;
}

struct Drain {
  std::vector<std::uint64_t> bytes;
  std::uint64_t slots = 0;
  std::uint64_t cells = 0;
};

Drain drain(Source& s) {
  Drain d;
  d.bytes.assign(s.destinations(), 0);
  while (!s.exhausted()) {
    ++d.slots;
    if (auto a = s.step()) {
      d.bytes[a->dest] += a->valid_bytes;
      ++d.cells;
    }
  }
  return d;
}

}  // namespace

TEST_CASE("names parse and validation rejects bad configs") {
  CHECK(parse_pattern("bursty") == Pattern::bursty);
  CHECK(parse_size_mode("variable") == SizeMode::variable);
  CHECK_THROWS_AS(parse_pattern("poisson"), Error);
  TrafficConfig c;
  c.load = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.load = 1.2;
  CHECK_THROWS_AS(c.validate(), Error);
  c.load = 0.5;
  c.fixed_packet_bytes = 100;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("bernoulli arrival rate and destination spread") {
  Source s(config(Pattern::bernoulli, SizeMode::fixed, 0.5, 1ull << 30), 31, Rng(5));
  const unsigned slots = 200000;
  unsigned arrivals = 0;
  std::vector<double> per_dest(31, 0);
  for (unsigned t = 0; t < slots; ++t)
    if (auto a = s.step()) {
      ++arrivals;
      per_dest[a->dest] += 1;
    }
  CHECK(static_cast<double>(arrivals) / slots == doctest::Approx(0.5).epsilon(0.02));
  // Chi-square against uniform, 30 degrees of freedom; 59.7 is the 0.001 tail.
  const double expect = arrivals / 31.0;
  double chi2 = 0;
  for (double o : per_dest) chi2 += (o - expect) * (o - expect) / expect;
  CHECK(chi2 < 59.7);
}

TEST_CASE("bursty fixed bursts average four cells") {
  Source s(config(Pattern::bursty, SizeMode::fixed, 0.5, 1ull << 30), 15, Rng(9));
  for (unsigned t = 0; t < 2000000; ++t) s.step();
  const auto& st = s.stats();
  const double mean_burst = static_cast<double>(st.burst_cells) / (st.bursts - 1);
  CHECK(mean_burst == doctest::Approx(4.0).epsilon(0.02));
  // Offered load: cells over slots.
  CHECK(static_cast<double>(st.cells) / st.slots == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("offered load matches the nominal load for every mode") {
  for (Pattern p : {Pattern::bernoulli, Pattern::bursty})
    for (SizeMode m : {SizeMode::fixed, SizeMode::variable})
      for (double load : {0.2, 0.7}) {
        Source s(config(p, m, load, 1ull << 30), 7, Rng(13));
        for (unsigned t = 0; t < 400000; ++t) s.step();
        const auto& st = s.stats();
        CAPTURE(static_cast<int>(p));
        CAPTURE(static_cast<int>(m));
        CHECK(static_cast<double>(st.cells) / st.slots == doctest::Approx(load).epsilon(0.03));
      }
}

TEST_CASE("variable packet sizes average 1056 bytes") {
  TrafficConfig c = config(Pattern::bernoulli, SizeMode::variable, 1.0, 1);
  Rng rng(17);
  double sum = 0;
  std::uint32_t lo = 1u << 31, hi = 0;
  const int n = 400000;
  for (int k = 0; k < n; ++k) {
    const std::uint32_t b = draw_packet_size(c, rng);
    sum += b;
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  CHECK(sum / n == doctest::Approx((64.0 + 2048.0) / 2).epsilon(0.01));
  CHECK(lo == 64);
  CHECK(hi == 2048);
}

TEST_CASE("every flow delivers exactly its volume") {
  for (Pattern p : {Pattern::bernoulli, Pattern::bursty})
    for (SizeMode m : {SizeMode::fixed, SizeMode::variable}) {
      const std::uint64_t volume = 100000;
      Source s(config(p, m, 0.8, volume), 9, Rng(21));
      const Drain d = drain(s);
      for (std::uint64_t b : d.bytes) CHECK(b == volume);
      for (unsigned k = 0; k < 9; ++k) CHECK(s.remaining(k) == 0);
      CHECK_FALSE(s.step().has_value());
    }
}

TEST_CASE("same seed gives the same arrivals") {
  auto trace = [](std::uint64_t seed) {
    Source s(config(Pattern::bursty, SizeMode::variable, 0.6, 50000), 5, Rng(seed));
    std::ostringstream os;
    TraceWriter w(os);
    for (std::uint64_t t = 0; !s.exhausted(); ++t)
      if (auto a = s.step()) w.write(t, 0, a->dest, *a);
    return os.str();
  };
  CHECK(trace(3) == trace(3));
  CHECK(trace(3) != trace(4));
  CHECK(trace(3).rfind("slot,src,dst,bytes,eop\n", 0) == 0);
}
