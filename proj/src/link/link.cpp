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

#include <fstream>
#include <sstream>

#include "rifl/error.hpp"
#include "rifl/link/duplex.hpp"
#include "rifl/link/frame.hpp"

namespace rifl::link {

std::string_view to_string(FrameKind kind) {
  switch (kind) {
    case FrameKind::idle: return "idle";
    case FrameKind::data: return "data";
    case FrameKind::rereq: return "rereq";
    case FrameKind::redata: return "redata";
    case FrameKind::flowctl: return "flowctl";
    case FrameKind::control: return "control";
  }
  return "?";
}

std::vector<FaultEvent> parse_fault_schedule(std::istream& in) {
  std::vector<FaultEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string dir;
    if (!(fields >> dir)) continue;

    FaultEvent ev;
    if (dir == "ab") {
      ev.direction = Direction::a_to_b;
    } else if (dir == "ba") {
      ev.direction = Direction::b_to_a;
    } else {
      throw Error(ErrorKind::config, "fault schedule line " +
                                         std::to_string(lineno) +
                                         ": direction must be ab or ba");
    }
    long long slot = -1;
    if (!(fields >> slot) || slot < 0)
      throw Error(ErrorKind::config, "fault schedule line " +
                                         std::to_string(lineno) +
                                         ": bad cell time");
    ev.slot = static_cast<std::uint64_t>(slot);
    int force = 1;
    if (fields >> force) {
      if (force != 0 && force != 1)
        throw Error(ErrorKind::config, "fault schedule line " +
                                           std::to_string(lineno) +
                                           ": force-corrupt must be 0 or 1");
    }
    ev.force_corrupt = force == 1;
    std::string extra;
    if (fields >> extra)
      throw Error(ErrorKind::config, "fault schedule line " +
                                         std::to_string(lineno) +
                                         ": trailing fields");
    events.push_back(ev);
  }
  return events;
}

std::vector<FaultEvent> load_fault_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open fault schedule " + path);
  return parse_fault_schedule(in);
}

}  // namespace rifl::link
