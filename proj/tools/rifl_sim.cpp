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

// rifl_sim: runs experiment files or built-in presets and compares reports
// against reference tables.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 simulator
// invariant violation (diagnostic written next to the results), 3 compare
// found values outside tolerance.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rifl/cli/compare.hpp"
#include "rifl/cli/experiment.hpp"
#include "rifl/error.hpp"

namespace fs = std::filesystem;
using namespace rifl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInternal = 2;
constexpr int kExitMismatch = 3;

struct RunArgs {
  std::string preset;
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "results";
  unsigned jobs = 1;
  int verbose = 0;
  bool quiet = false;
};

struct CompareArgs {
  std::string report;
  std::string reference;
  std::vector<std::string> tolerances;
  std::vector<std::string> keys;
  std::string out;
};

int run_command(const RunArgs& a) {
  cli::ExperimentSpec spec =
      a.config.empty() ? cli::preset(a.preset) : cli::load_spec_file(a.config);
  fs::create_directories(a.out_dir);
  const fs::path csv = fs::path(a.out_dir) / (spec.name + ".csv");

  cli::RunOptions opts;
  opts.seeds = a.seeds;
  opts.jobs = a.jobs;
  opts.verbosity = a.verbose;
  opts.log = &std::cerr;
  cli::ExperimentResult result;
  try {
    result = cli::run_experiment(spec, opts);
  } catch (const Error& e) {
    if (is_config_error(e.kind())) throw;
    const fs::path trace = fs::path(a.out_dir) / (spec.name + ".error.txt");
    std::ofstream t(trace);
    t << e.what() << "\n\nexperiment:\n" << spec.to_json_text();
    std::cerr << "rifl_sim: " << e.what() << "\ndiagnostic written to " << trace.string()
              << '\n';
    return kExitInternal;
  }

  std::ofstream out(csv);
  if (!out) throw Error(ErrorKind::config, "cannot write " + csv.string());
  result.write_csv(out);
  if (!a.quiet) result.write_summary(std::cout);
  std::cerr << "wrote " << csv.string() << '\n';
  if (!result.all_checks_pass()) {
    std::cerr << "rifl_sim: " << spec.name << ": a check failed, see " << csv.string() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

int compare_command(const CompareArgs& a) {
  const cli::CsvTable report = cli::CsvTable::load(a.report);
  const cli::CsvTable reference = cli::CsvTable::load(a.reference);
  cli::CompareOptions opts;
  if (!a.keys.empty()) opts.keys = a.keys;
  opts.tolerances = cli::default_tolerances();
  for (const std::string& t : a.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config, "--tol expects metric=abs:X or metric=rel:X");
    opts.tolerances[t.substr(0, eq)] = cli::Tolerance::parse(t.substr(eq + 1));
  }
  const auto verdicts = cli::compare_reports(report, reference, opts);
  if (a.out.empty()) {
    cli::write_verdicts(std::cout, verdicts);
  } else {
    std::ofstream out(a.out);
    if (!out) throw Error(ErrorKind::config, "cannot write " + a.out);
    cli::write_verdicts(out, verdicts);
  }
  std::size_t failed = 0;
  for (const auto& v : verdicts) failed += v.pass ? 0 : 1;
  std::cerr << verdicts.size() - failed << "/" << verdicts.size() << " within tolerance\n";
  return failed ? kExitMismatch : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIFL Layer 2 network simulator"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment file or preset");
  auto* src = run_cmd->add_option_group("source");
  src->add_option("-p,--preset", run.preset, "Built-in preset name (see `presets`)");
  src->add_option("-c,--config", run.config, "Experiment JSON file")->check(CLI::ExistingFile);
  src->require_option(1);
  run_cmd->add_option("-s,--seed", run.seeds, "Seed; repeat to run several (overrides file)");
  run_cmd->add_option("-o,--out", run.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("-j,--jobs", run.jobs, "Worker threads for sweep points")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  run_cmd->add_flag("-v,--verbose", run.verbose, "Progress on stderr; twice for per-run summaries");
  run_cmd->add_flag("-q,--quiet", run.quiet, "No summary on stdout");

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare a report CSV with a reference CSV");
  cmp_cmd->add_option("report", cmp.report, "Report CSV from `run`")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("reference", cmp.reference, "Reference CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("-t,--tol", cmp.tolerances,
                      "metric=abs:X or metric=rel:X (defaults: utilization=abs:1.5, "
                      "p*=rel:0.2)");
  cmp_cmd->add_option("-k,--key", cmp.keys, "Key column; repeat (default pattern, size_mode, "
                                            "scheduler, nominal_load)");
  cmp_cmd->add_option("-o,--out", cmp.out, "Verdict CSV path (default stdout)");

  std::string show;
  CLI::App* presets_cmd = app.add_subcommand("presets", "List presets or print one");
  presets_cmd->add_option("--show", show, "Print this preset's JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*cmp_cmd) return compare_command(cmp);
    if (*presets_cmd) {
      if (!show.empty()) {
        std::cout << cli::preset_text(show);
      } else {
        for (const std::string& n : cli::preset_names()) {
          const cli::ExperimentSpec s = cli::preset(n);
          std::cout << n << "  " << s.description << '\n';
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "rifl_sim: " << e.what() << '\n';
    return is_config_error(e.kind()) ? kExitConfig : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "rifl_sim: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}
