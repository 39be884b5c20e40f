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

#ifndef FEDMARK_TOOLS_PROCESS_API_H_
#define FEDMARK_TOOLS_PROCESS_API_H_

#include <memory>
#include <string>

#include "fedmark/watermark/verify.h"

namespace fedmark::tools {

// A model endpoint running as a child process that speaks the line protocol
// of wm::MakeStreamApi on its stdin/stdout.
class ProcessApi {
 public:
  // Starts `command` through the shell. TransportError if it cannot start.
  explicit ProcessApi(const std::string& command);
  ~ProcessApi();

  ProcessApi(const ProcessApi&) = delete;
  ProcessApi& operator=(const ProcessApi&) = delete;

  const wm::ModelApi& api() const { return api_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  wm::ModelApi api_;
};

}  // namespace fedmark::tools

#endif  // FEDMARK_TOOLS_PROCESS_API_H_
