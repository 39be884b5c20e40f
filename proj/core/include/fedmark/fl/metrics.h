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

#ifndef FEDMARK_FL_METRICS_H_
#define FEDMARK_FL_METRICS_H_

#include <iosfwd>
#include <span>
#include <string>

#include "fedmark/fl/federation.h"

namespace fedmark::fl {

// Header: round,test_acc,wm_acc,selected_clients[,wall_ms]. Selected client
// ids are ';'-separated; a missing wm_acc is an empty field.
std::string RoundsCsvHeader(bool with_timing);
std::string RoundsCsvRow(const RoundMetrics& m, bool with_timing);
void WriteRoundsCsv(std::ostream& out, std::span<const RoundMetrics> rows, bool with_timing);

}  // namespace fedmark::fl

#endif  // FEDMARK_FL_METRICS_H_
