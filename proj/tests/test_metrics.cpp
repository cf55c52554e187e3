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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rifl/error.hpp"
#include "rifl/sim/metrics.hpp"
#include "rifl/util/rng.hpp"

using namespace rifl;
using namespace rifl::sim;

namespace {

std::uint64_t sort_and_index(std::vector<std::uint64_t> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = std::ceil(p / 100.0 * static_cast<double>(v.size()));
  const std::size_t k = rank < 1 ? 0 : static_cast<std::size_t>(rank) - 1;
  return v[std::min(k, v.size() - 1)];
}

}  // namespace

TEST_CASE("nearest-rank percentiles on small examples") {
  const std::vector<std::uint64_t> v = {15, 20, 35, 40, 50};
  CHECK(percentile(v, 30) == 20);
  CHECK(percentile(v, 40) == 20);
  CHECK(percentile(v, 50) == 35);
  CHECK(percentile(v, 100) == 50);
  CHECK(percentile(v, 0) == 15);
  const std::vector<std::uint64_t> w = {3, 6, 7, 8, 8, 10, 13, 15, 16, 20};
  CHECK(percentile(w, 25) == 7);
  CHECK(percentile(w, 50) == 8);
  CHECK(percentile(w, 75) == 15);
  CHECK_THROWS_AS(percentile(std::vector<std::uint64_t>{}, 50), Error);
  CHECK_THROWS_AS(percentile(v, 101), Error);
}

TEST_CASE("histogram percentiles agree with sort and index") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(3000);
    std::vector<std::uint64_t> v(n);
    LatencyHistogram h;
    for (auto& x : v) {
      x = rng.below(rng.bernoulli(0.1) ? 5000 : 200);
      h.add(x);
    }
    for (double p : kReportPercentiles) {
      CHECK(h.percentile(p) == sort_and_index(v, p));
      CHECK(percentile(v, p) == sort_and_index(v, p));
    }
    CHECK(h.min() == *std::min_element(v.begin(), v.end()));
    CHECK(h.max() == *std::max_element(v.begin(), v.end()));
  }
}

TEST_CASE("histogram merge and mean") {
  LatencyHistogram a, b;
  for (std::uint64_t x : {1, 2, 3}) a.add(x);
  for (std::uint64_t x : {10, 20}) b.add(x);
  a.merge(b);
  CHECK(a.count() == 5);
  CHECK(a.mean() == doctest::Approx(7.2));
  CHECK(a.percentile(100) == 20);
}

TEST_CASE("utilization examples") {
  // 4 ports, 264-byte frames, 1000 slots.
  CHECK(utilization(4 * 264 * 1000, 4, 264, 1000) == doctest::Approx(1.0));
  CHECK(utilization(264 * 1000, 4, 264, 1000) == doctest::Approx(0.25));
  CHECK(utilization(0, 4, 264, 1000) == 0.0);
  CHECK_THROWS_AS(utilization(1, 4, 264, 0), Error);
}

TEST_CASE("csv row has one field per header column") {
  MetricsReport r;
  r.name = "x";
  r.nominal_load = 0.5;
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(count(MetricsReport::csv_header()) == count(r.csv_row()));
  CHECK(r.csv_row().find(",50.000,") != std::string::npos);
}
