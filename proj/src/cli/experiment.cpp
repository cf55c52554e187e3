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

#include "rifl/cli/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "presets_data.hpp"
#include "rifl/error.hpp"

namespace rifl::cli {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::switch_sweep: return "switch";
    case ExperimentKind::link_sweep: return "link";
    case ExperimentKind::protocol: return "protocol";
  }
  return "?";
}

namespace {

ExperimentKind parse_kind(const std::string& s) {
  if (s == "switch") return ExperimentKind::switch_sweep;
  if (s == "link") return ExperimentKind::link_sweep;
  if (s == "protocol") return ExperimentKind::protocol;
  throw Error(ErrorKind::config, "unknown experiment kind '" + s + "'");
}

void only_keys(const json& obj, const std::string& where,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(ErrorKind::config, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) throw Error(ErrorKind::config, "unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string str_or(const json& obj, const char* key, const std::string& fallback) {
  std::string s = fallback;
  read(obj, key, s);
  return s;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("experiment file is not valid JSON: ") + e.what());
  }
  only_keys(j, "experiment",
            {"name", "description", "kind", "topology", "sim", "traffic", "points", "seeds",
             "link"});
  ExperimentSpec s;
  read(j, "name", s.name);
  read(j, "description", s.description);
  s.kind = parse_kind(str_or(j, "kind", "switch"));

  if (j.contains("topology")) {
    const json& t = j["topology"];
    only_keys(t, "topology", {"ports", "switches", "scheduler", "iterations", "rtt", "ber"});
    read(t, "ports", s.ports);
    read(t, "switches", s.switches);
    s.scheduler = sim::parse_scheduler(str_or(t, "scheduler", "islip"));
    read(t, "iterations", s.iterations);
    read(t, "rtt", s.rtt);
    read(t, "ber", s.ber);
  }
  if (j.contains("sim")) {
    const json& m = j["sim"];
    only_keys(m, "sim",
              {"fixed_path_latency", "cell_time_ns", "voq_capacity", "on_threshold",
               "off_threshold", "egress_slack", "endpoint_order", "max_slots", "stall_slots"});
    read(m, "fixed_path_latency", s.sim.fixed_path_latency);
    read(m, "cell_time_ns", s.sim.cell_time_ns);
    read(m, "voq_capacity", s.sim.voq_capacity);
    read(m, "on_threshold", s.sim.on_threshold);
    read(m, "off_threshold", s.sim.off_threshold);
    read(m, "egress_slack", s.sim.egress_slack);
    s.sim.endpoint_order =
        sim::parse_endpoint_order(str_or(m, "endpoint_order", "oldest"));
    read(m, "max_slots", s.sim.max_slots);
    read(m, "stall_slots", s.sim.stall_slots);
  }
  if (j.contains("traffic")) {
    const json& t = j["traffic"];
    only_keys(t, "traffic",
              {"pattern", "size_mode", "per_flow_bytes", "fixed_packet_bytes",
               "min_packet_bytes", "max_packet_bytes", "mean_burst_bytes"});
    s.traffic.pattern = traffic::parse_pattern(str_or(t, "pattern", "bernoulli"));
    s.traffic.size_mode = traffic::parse_size_mode(str_or(t, "size_mode", "fixed"));
    read(t, "per_flow_bytes", s.traffic.per_flow_bytes);
    read(t, "fixed_packet_bytes", s.traffic.fixed_packet_bytes);
    read(t, "min_packet_bytes", s.traffic.min_packet_bytes);
    read(t, "max_packet_bytes", s.traffic.max_packet_bytes);
    read(t, "mean_burst_bytes", s.traffic.mean_burst_bytes);
  }
  if (j.contains("points")) {
    if (!j["points"].is_array()) throw Error(ErrorKind::config, "points must be an array");
    for (const json& p : j["points"]) {
      only_keys(p, "point", {"name", "load", "pattern", "size_mode", "scheduler"});
      SweepPoint pt;
      read(p, "name", pt.name);
      read(p, "load", pt.load);
      if (p.contains("pattern")) pt.pattern = traffic::parse_pattern(str_or(p, "pattern", ""));
      if (p.contains("size_mode"))
        pt.size_mode = traffic::parse_size_mode(str_or(p, "size_mode", ""));
      if (p.contains("scheduler"))
        pt.scheduler = sim::parse_scheduler(str_or(p, "scheduler", ""));
      s.points.push_back(pt);
    }
  }
  read(j, "seeds", s.seeds);
  if (j.contains("link")) {
    const json& l = j["link"];
    only_keys(l, "link", {"rtt", "cells", "bers", "bidirectional"});
    read(l, "rtt", s.link.rtt);
    read(l, "cells", s.link.cells);
    read(l, "bers", s.link.bers);
    read(l, "bidirectional", s.link.bidirectional);
  }
  s.validate();
  return s;
}

std::string ExperimentSpec::to_json_text() const {
  json j;
  j["name"] = name;
  if (!description.empty()) j["description"] = description;
  j["kind"] = std::string(to_string(kind));
  j["topology"] = {{"ports", ports},
                   {"switches", switches},
                   {"scheduler", std::string(sim::to_string(scheduler))},
                   {"iterations", iterations},
                   {"rtt", rtt},
                   {"ber", ber}};
  j["sim"] = {{"fixed_path_latency", sim.fixed_path_latency},
              {"cell_time_ns", sim.cell_time_ns},
              {"voq_capacity", sim.voq_capacity},
              {"on_threshold", sim.on_threshold},
              {"off_threshold", sim.off_threshold},
              {"egress_slack", sim.egress_slack},
              {"endpoint_order", std::string(sim::to_string(sim.endpoint_order))},
              {"max_slots", sim.max_slots},
              {"stall_slots", sim.stall_slots}};
  j["traffic"] = {{"pattern", std::string(traffic::to_string(traffic.pattern))},
                  {"size_mode", std::string(traffic::to_string(traffic.size_mode))},
                  {"per_flow_bytes", traffic.per_flow_bytes},
                  {"fixed_packet_bytes", traffic.fixed_packet_bytes},
                  {"min_packet_bytes", traffic.min_packet_bytes},
                  {"max_packet_bytes", traffic.max_packet_bytes},
                  {"mean_burst_bytes", traffic.mean_burst_bytes}};
  json pts = json::array();
  for (const SweepPoint& p : points) {
    json o;
    if (!p.name.empty()) o["name"] = p.name;
    o["load"] = p.load;
    if (p.pattern) o["pattern"] = std::string(traffic::to_string(*p.pattern));
    if (p.size_mode) o["size_mode"] = std::string(traffic::to_string(*p.size_mode));
    if (p.scheduler) o["scheduler"] = std::string(sim::to_string(*p.scheduler));
    pts.push_back(o);
  }
  j["points"] = pts;
  j["seeds"] = seeds;
  j["link"] = {{"rtt", link.rtt},
               {"cells", link.cells},
               {"bers", link.bers},
               {"bidirectional", link.bidirectional}};
  return j.dump(2) + "\n";
}

void ExperimentSpec::validate() const {
  if (name.empty()) throw Error(ErrorKind::config, "experiment needs a name");
  if (seeds.empty()) throw Error(ErrorKind::config, "experiment needs at least one seed");
  switch (kind) {
    case ExperimentKind::switch_sweep: {
      if (points.empty()) throw Error(ErrorKind::config, "switch experiment has no points");
      for (const SweepPoint& p : points)
        if (!(p.load > 0.0 && p.load <= 1.0))
          throw Error(ErrorKind::config, "sweep load must be in (0, 1]");
      if (!(ber >= 0.0 && ber < 1.0)) throw Error(ErrorKind::config, "BER must be in [0, 1)");
      if (rtt < 2) throw Error(ErrorKind::config, "link RTT must be >= 2");
      if (switches < 1 || switches > 5)
        throw Error(ErrorKind::config, "switch count must be in 1..5");
      traffic.validate();
      topology(scheduler).validate();
      break;
    }
    case ExperimentKind::link_sweep:
      if (link.bers.empty()) throw Error(ErrorKind::config, "link experiment has no BER values");
      for (double b : link.bers)
        if (!(b >= 0.0 && b < 1.0)) throw Error(ErrorKind::config, "BER must be in [0, 1)");
      if (link.rtt < 2) throw Error(ErrorKind::config, "link RTT must be >= 2");
      if (link.cells == 0) throw Error(ErrorKind::config, "link experiment needs cells > 0");
      break;
    case ExperimentKind::protocol:
      break;
  }
}

sim::Topology ExperimentSpec::topology(sim::SchedulerKind kind_) const {
  const link::LinkConfig cfg = link::LinkConfig::with_rtt(rtt, ber);
  if (switches == 1) return sim::Topology::star(ports, kind_, iterations, cfg);
  return sim::Topology::chain(switches, ports, kind_, iterations, cfg);
}

traffic::TrafficConfig ExperimentSpec::traffic_for(const SweepPoint& p,
                                                   std::uint64_t seed) const {
  traffic::TrafficConfig t = traffic;
  t.load = p.load;
  if (p.pattern) t.pattern = *p.pattern;
  if (p.size_mode) t.size_mode = *p.size_mode;
  t.seed = seed;
  return t;
}

sim::SchedulerKind ExperimentSpec::scheduler_for(const SweepPoint& p) const {
  return p.scheduler.value_or(scheduler);
}

ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open experiment file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ExperimentSpec::from_json_text(ss.str());
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::embedded_presets()) names.push_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  for (const auto& [n, text] : detail::embedded_presets())
    if (n == name) return text;
  throw Error(ErrorKind::config, "unknown preset '" + name + "'");
}

ExperimentSpec preset(const std::string& name) {
  return ExperimentSpec::from_json_text(preset_text(name));
}

bool ExperimentResult::all_checks_pass() const {
  for (const ProtocolCheck& c : checks)
    if (!c.pass) return false;
  for (const link::LinkBenchReport& r : link_rows)
    if (!r.exactly_once_in_order()) return false;
  return true;
}

void ExperimentResult::write_csv(std::ostream& os) const {
  switch (kind) {
    case ExperimentKind::switch_sweep:
      os << sim::MetricsReport::csv_header() << '\n';
      for (const sim::MetricsReport& r : reports) os << r.csv_row() << '\n';
      break;
    case ExperimentKind::link_sweep:
      os << link::LinkBenchReport::csv_header() << '\n';
      for (const link::LinkBenchReport& r : link_rows) os << r.csv_row() << '\n';
      break;
    case ExperimentKind::protocol:
      os << "check,detail,pass\n";
      for (const ProtocolCheck& c : checks)
        os << c.check << ',' << c.detail << ',' << (c.pass ? 1 : 0) << '\n';
      break;
  }
}

void ExperimentResult::write_summary(std::ostream& os) const {
  for (const sim::MetricsReport& r : reports) r.summary(os);
  for (const link::LinkBenchReport& r : link_rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "ber %-8.3g goodput %.5f  cycles %llu  corrupted %llu/%llu  %s\n", r.ber,
                  r.goodput, static_cast<unsigned long long>(r.cycles),
                  static_cast<unsigned long long>(r.corrupted_ab),
                  static_cast<unsigned long long>(r.corrupted_ba),
                  r.exactly_once_in_order() ? "exactly-once in order" : "DELIVERY ERROR");
    os << buf;
  }
  for (const ProtocolCheck& c : checks)
    os << (c.pass ? "ok    " : "FAIL  ") << c.check << "  " << c.detail << '\n';
}

namespace {

// Runs tasks 0..n-1 on up to `jobs` threads; the first exception wins.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(mu);
          if (failure) return;
        }
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::string point_name(const ExperimentSpec& spec, const SweepPoint& p, std::size_t index) {
  if (!p.name.empty()) return p.name;
  return spec.name + "#" + std::to_string(index);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  const std::vector<std::uint64_t>& seeds = opts.seeds.empty() ? spec.seeds : opts.seeds;
  ExperimentResult result;
  result.kind = spec.kind;
  std::mutex log_mu;
  auto note = [&](const std::string& line) {
    if (!opts.log || opts.verbosity <= 0) return;
    std::lock_guard lock(log_mu);
    *opts.log << line << std::endl;
  };

  switch (spec.kind) {
    case ExperimentKind::switch_sweep: {
      const std::size_t n = spec.points.size() * seeds.size();
      result.reports.resize(n);
      parallel_for(n, opts.jobs, [&](std::size_t i) {
        const std::size_t pi = i / seeds.size();
        const SweepPoint& p = spec.points[pi];
        sim::SimParams params = spec.sim;
        params.seed = seeds[i % seeds.size()];
        params.name = point_name(spec, p, pi);
        note("running " + params.name + " seed " + std::to_string(params.seed));
        result.reports[i] = sim::run(spec.topology(spec.scheduler_for(p)),
                                     spec.traffic_for(p, params.seed), params);
        if (opts.verbosity > 1 && opts.log) {
          std::lock_guard lock(log_mu);
          result.reports[i].summary(*opts.log);
        }
      });
      break;
    }
    case ExperimentKind::link_sweep: {
      const std::size_t n = spec.link.bers.size() * seeds.size();
      result.link_rows.resize(n);
      parallel_for(n, opts.jobs, [&](std::size_t i) {
        link::LinkBenchConfig c;
        c.rtt = spec.link.rtt;
        c.ber = spec.link.bers[i / seeds.size()];
        c.cells = spec.link.cells;
        c.seed = seeds[i % seeds.size()];
        c.bidirectional = spec.link.bidirectional;
        note("link ber " + std::to_string(c.ber) + " seed " + std::to_string(c.seed));
        result.link_rows[i] = link::run_link_bench(c);
      });
      break;
    }
    case ExperimentKind::protocol:
      for (std::uint64_t seed : seeds) {
        auto checks = run_protocol_checks(spec, seed);
        result.checks.insert(result.checks.end(), checks.begin(), checks.end());
      }
      break;
  }
  return result;
}

}  // namespace rifl::cli
