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

#include <set>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rifl/cli/compare.hpp"
#include "rifl/cli/experiment.hpp"
#include "rifl/error.hpp"

using namespace rifl;
using namespace rifl::cli;

namespace {

CsvTable table(const std::string& text) {
  std::istringstream in(text);
  return CsvTable::parse(in);
}

}  // namespace

TEST_CASE("unknown keys and bad values are config errors") {
  const std::string base = preset_text("smoke");
  CHECK_NOTHROW(ExperimentSpec::from_json_text(base));
  std::string bad = base;
  bad.replace(bad.find("\"ports\""), 7, "\"portz\"");
  try {
    ExperimentSpec::from_json_text(bad);
    FAIL("accepted an unknown key");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("portz") != std::string::npos);
  }
  std::string load = base;
  load.replace(load.find("\"load\": 0.5"), 11, "\"load\": 1.5");
  CHECK_THROWS_AS(ExperimentSpec::from_json_text(load), Error);
  CHECK_THROWS_AS(ExperimentSpec::from_json_text("{ not json"), Error);
  CHECK_THROWS_AS(preset("no-such-preset"), Error);
}

TEST_CASE("specs survive a json round trip") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const ExperimentSpec a = preset(name);
    const ExperimentSpec b = ExperimentSpec::from_json_text(a.to_json_text());
    CHECK(a.to_json_text() == b.to_json_text());
  }
}

TEST_CASE("figure and table presets have the expected points") {
  CHECK(preset("fig4a-bernoulli-fixed").points.size() == 10);
  CHECK(preset("fig4b-bursty-variable-safc").points.size() == 10);
  const ExperimentSpec t = preset("table1");
  CHECK(t.points.size() == 16);
  std::set<std::string> names;
  for (const auto& p : t.points) names.insert(p.name);
  CHECK(names.size() == 16);
  CHECK(preset("ber-sweep").kind == ExperimentKind::link_sweep);
  CHECK(preset("protocol").kind == ExperimentKind::protocol);
}

TEST_CASE("smoke preset runs, one row per point and seed") {
  RunOptions opts;
  opts.seeds = {1, 2};
  opts.jobs = 2;
  const ExperimentResult r = run_experiment(preset("smoke"), opts);
  REQUIRE(r.reports.size() == 6);
  CHECK(r.reports[0].seed == 1);
  CHECK(r.reports[1].seed == 2);
  CHECK(r.reports[0].csv_row() != r.reports[1].csv_row());
  std::ostringstream os;
  r.write_csv(os);
  const CsvTable back = table(os.str());
  CHECK(back.rows.size() == 6);
  CHECK(back.at(2, "scheduler") == "safc");
  CHECK(back.at(4, "pattern") == "bursty");
}

TEST_CASE("protocol preset passes") {
  const ExperimentResult r = run_experiment(preset("protocol"), RunOptions{});
  CHECK(r.checks.size() >= 5);
  CHECK(r.all_checks_pass());
}

TEST_CASE("tolerances parse and apply") {
  const Tolerance a = Tolerance::parse("abs:1.5");
  CHECK(a.accepts(98.0, 98.36));
  CHECK_FALSE(a.accepts(95.0, 98.36));
  const Tolerance r = Tolerance::parse("rel:0.2");
  CHECK(r.accepts(230, 213));
  CHECK_FALSE(r.accepts(400, 213));
  CHECK_THROWS_AS(Tolerance::parse("within:3"), Error);
}

TEST_CASE("compare pairs rows by key columns") {
  const CsvTable report = table(
      "name,pattern,size_mode,scheduler,nominal_load,utilization,p50\n"
      "a,bernoulli,fixed,islip,100.000,98.00,400\n"
      "b,bernoulli,fixed,safc,100.000,98.50,60\n"
      "c,bursty,fixed,islip,50.000,50.00,30\n");
  const CsvTable reference = table(
      "# comment line\n"
      "pattern,size_mode,scheduler,nominal_load,utilization,p50\n"
      "bernoulli,fixed,islip,100,98.36,213\n"
      "bernoulli,fixed,safc,100,98.36,63\n");
  CompareOptions opts;
  opts.tolerances = default_tolerances();
  const auto v = compare_reports(report, reference, opts);
  REQUIRE(v.size() == 4);
  int pass = 0;
  for (const Verdict& x : v) {
    if (x.metric == "utilization") CHECK(x.pass);
    if (x.metric == "p50" && x.reference == 213) CHECK_FALSE(x.pass);
    if (x.metric == "p50" && x.reference == 63) CHECK(x.pass);
    pass += x.pass;
  }
  CHECK(pass == 3);
  std::ostringstream os;
  write_verdicts(os, v);
  CHECK(os.str().find(",p50,400,213,rel:0.2,0") != std::string::npos);

  const CsvTable other = table("pattern,size_mode,scheduler,nominal_load,utilization\n"
                               "bursty,variable,safc,10,9\n");
  CHECK_THROWS_AS(compare_reports(report, other, opts), Error);
}
