/*
 * Copyright 2026 The FedMark Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedmark/fl/metrics.h"

#include <cstdio>
#include <ostream>

namespace fedmark::fl {
namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string RoundsCsvHeader(bool with_timing) {
  std::string h = "round,test_acc,wm_acc,selected_clients";
  if (with_timing) h += ",wall_ms";
  return h;
}

std::string RoundsCsvRow(const RoundMetrics& m, bool with_timing) {
  std::string row = std::to_string(m.round) + "," + Fixed(m.test_acc, 6) + ",";
  if (m.wm_acc) row += Fixed(*m.wm_acc, 6);
  row += ",";
  for (std::size_t i = 0; i < m.selected.size(); ++i) {
    if (i > 0) row += ";";
    row += std::to_string(m.selected[i]);
  }
  if (with_timing) row += "," + Fixed(m.wall_ms, 3);
  return row;
}

void WriteRoundsCsv(std::ostream& out, std::span<const RoundMetrics> rows, bool with_timing) {
  out << RoundsCsvHeader(with_timing) << '\n';
  for (const auto& m : rows) out << RoundsCsvRow(m, with_timing) << '\n';
}

}  // namespace fedmark::fl
