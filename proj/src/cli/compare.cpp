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

#include "rifl/cli/compare.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rifl/error.hpp"

namespace rifl::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool to_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool key_equal(const std::string& a, const std::string& b) {
  double x = 0, y = 0;
  if (to_number(a, x) && to_number(b, y)) return std::fabs(x - y) < 0.01;
  return a == b;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

const std::string& CsvTable::at(std::size_t row, const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw Error(ErrorKind::config, "no column '" + name + "'");
  return rows.at(row).at(static_cast<std::size_t>(c));
}

CsvTable CsvTable::parse(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \r") == std::string::npos)
      continue;
    auto fields = split(line);
    if (t.columns.empty()) {
      t.columns = std::move(fields);
      continue;
    }
    if (fields.size() != t.columns.size())
      throw Error(ErrorKind::config, "CSV row has " + std::to_string(fields.size()) +
                                         " fields, header has " +
                                         std::to_string(t.columns.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.columns.empty()) throw Error(ErrorKind::config, "CSV has no header row");
  return t;
}

CsvTable CsvTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open " + path);
  return parse(in);
}

bool Tolerance::accepts(double actual, double reference) const {
  const double diff = std::fabs(actual - reference);
  const double bound = kind == Kind::absolute ? value : value * std::fabs(reference);
  return diff <= bound + 1e-9;
}

Tolerance Tolerance::parse(const std::string& text) {
  const auto colon = text.find(':');
  Tolerance t;
  double v = 0;
  if (colon == std::string::npos || !to_number(text.substr(colon + 1), v) || v < 0)
    throw Error(ErrorKind::config, "tolerance must look like abs:1.5 or rel:0.2, got '" +
                                       text + "'");
  const std::string kind = text.substr(0, colon);
  if (kind == "abs") {
    t.kind = Kind::absolute;
  } else if (kind == "rel") {
    t.kind = Kind::relative;
  } else {
    throw Error(ErrorKind::config, "tolerance kind must be abs or rel, got '" + kind + "'");
  }
  t.value = v;
  return t;
}

std::string Tolerance::str() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%g", kind == Kind::absolute ? "abs" : "rel", value);
  return buf;
}

std::map<std::string, Tolerance> default_tolerances() {
  std::map<std::string, Tolerance> m;
  m["utilization"] = {Tolerance::Kind::absolute, 1.5};
  for (const char* p : {"p0", "p1", "p50", "p75", "p90", "p95", "p99", "p100"})
    m[p] = {Tolerance::Kind::relative, 0.2};
  return m;
}

std::vector<Verdict> compare_reports(const CsvTable& report, const CsvTable& reference,
                                     const CompareOptions& opts) {
  std::vector<std::string> keys;
  for (const std::string& k : opts.keys)
    if (report.column(k) >= 0 && reference.column(k) >= 0) keys.push_back(k);

  std::vector<Verdict> out;
  std::size_t paired = 0;
  for (std::size_t r = 0; r < reference.rows.size(); ++r) {
    for (std::size_t a = 0; a < report.rows.size(); ++a) {
      bool match = true;
      for (const std::string& k : keys) match = match && key_equal(report.at(a, k), reference.at(r, k));
      if (!match) continue;
      ++paired;
      std::string key;
      for (const std::string& k : keys) key += (key.empty() ? "" : "/") + reference.at(r, k);
      for (const auto& [metric, tol] : opts.tolerances) {
        if (reference.column(metric) < 0 || report.column(metric) < 0) continue;
        double want = 0, got = 0;
        if (!to_number(reference.at(r, metric), want)) continue;
        Verdict v;
        v.key = key;
        v.metric = metric;
        v.reference = want;
        v.tolerance = tol;
        v.pass = to_number(report.at(a, metric), got) && tol.accepts(got, want);
        v.actual = got;
        out.push_back(v);
      }
    }
  }
  if (paired == 0) throw Error(ErrorKind::config, "no report row matches any reference row");
  return out;
}

void write_verdicts(std::ostream& os, const std::vector<Verdict>& verdicts) {
  os << "key,metric,actual,reference,tolerance,pass\n";
  for (const Verdict& v : verdicts) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%g,%g,%s,%d\n", v.key.c_str(), v.metric.c_str(),
                  v.actual, v.reference, v.tolerance.str().c_str(), v.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace rifl::cli
