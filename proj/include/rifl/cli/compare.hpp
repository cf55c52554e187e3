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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rifl::cli {

/// Comma-separated table with a header row. Lines starting with '#' and
/// blank lines are skipped; fields are not quoted.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  const std::string& at(std::size_t row, const std::string& name) const;

  static CsvTable parse(std::istream& in);
  static CsvTable load(const std::string& path);
};

struct Tolerance {
  enum class Kind { absolute, relative };
  Kind kind = Kind::absolute;
  double value = 0.0;

  bool accepts(double actual, double reference) const;
  /// "abs:1.5" or "rel:0.2".
  static Tolerance parse(const std::string& text);
  std::string str() const;
};

struct Verdict {
  std::string key;
  std::string metric;
  double actual = 0;
  double reference = 0;
  Tolerance tolerance;
  bool pass = false;
};

struct CompareOptions {
  /// Key columns used to pair rows. Numeric keys match within 0.01.
  std::vector<std::string> keys{"pattern", "size_mode", "scheduler", "nominal_load"};
  std::map<std::string, Tolerance> tolerances;
};

/// Default tolerances: utilization within 1.5 points, latency percentiles
/// within 20%.
std::map<std::string, Tolerance> default_tolerances();

/// Checks every reference metric that has a tolerance against the report row
/// with the same key. Key columns absent from either table are ignored.
/// Throws a config error when no row pairs up.
std::vector<Verdict> compare_reports(const CsvTable& report, const CsvTable& reference,
                                     const CompareOptions& opts);

void write_verdicts(std::ostream& os, const std::vector<Verdict>& verdicts);

}  // namespace rifl::cli
