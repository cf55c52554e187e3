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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rifl/link/bench.hpp"
#include "rifl/sim/engine.hpp"
#include "rifl/sim/metrics.hpp"
#include "rifl/sim/topology.hpp"
#include "rifl/traffic/traffic.hpp"

namespace rifl::cli {

enum class ExperimentKind { switch_sweep, link_sweep, protocol };

std::string_view to_string(ExperimentKind k);

/// One sweep point. Unset fields fall back to the experiment defaults.
struct SweepPoint {
  std::string name;
  double load = 1.0;
  std::optional<traffic::Pattern> pattern;
  std::optional<traffic::SizeMode> size_mode;
  std::optional<sim::SchedulerKind> scheduler;
};

struct LinkSweep {
  unsigned rtt = 15;
  std::uint64_t cells = 1'000'000;
  std::vector<double> bers;
  bool bidirectional = false;
};

/// A parsed experiment file. See README for the JSON schema.
struct ExperimentSpec {
  std::string name;
  std::string description;
  ExperimentKind kind = ExperimentKind::switch_sweep;

  unsigned ports = 32;
  unsigned switches = 1;
  sim::SchedulerKind scheduler = sim::SchedulerKind::islip;
  unsigned iterations = 0;
  unsigned rtt = 15;
  double ber = 0.0;

  sim::SimParams sim;
  traffic::TrafficConfig traffic;
  std::vector<SweepPoint> points;
  std::vector<std::uint64_t> seeds{1};

  LinkSweep link;

  /// Throws a config error on unknown keys, bad enums or out-of-range values.
  static ExperimentSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
  void validate() const;

  sim::Topology topology(sim::SchedulerKind kind) const;
  traffic::TrafficConfig traffic_for(const SweepPoint& p, std::uint64_t seed) const;
  sim::SchedulerKind scheduler_for(const SweepPoint& p) const;
};

ExperimentSpec load_spec_file(const std::string& path);

/// Presets compiled into the binary from presets/*.json.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
ExperimentSpec preset(const std::string& name);

struct ProtocolCheck {
  std::string check;
  std::string detail;
  bool pass = false;
};

/// Routing, header rotation and multi-hop delivery checks.
std::vector<ProtocolCheck> run_protocol_checks(const ExperimentSpec& spec, std::uint64_t seed);

struct RunOptions {
  std::vector<std::uint64_t> seeds;  // overrides the file's seeds when nonempty
  unsigned jobs = 1;
  int verbosity = 0;
  std::ostream* log = nullptr;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::switch_sweep;
  std::vector<sim::MetricsReport> reports;      // switch sweeps, spec order
  std::vector<link::LinkBenchReport> link_rows;  // link sweeps, spec order
  std::vector<ProtocolCheck> checks;             // protocol

  bool all_checks_pass() const;
  void write_csv(std::ostream& os) const;
  void write_summary(std::ostream& os) const;
};

/// Runs every (point, seed) pair, possibly on `jobs` threads. Results keep
/// spec order: points outer, seeds inner.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts);

}  // namespace rifl::cli
