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

#include "process_api.h"

#include <boost/process.hpp>

#include "fedmark/common/error.h"

namespace fedmark::tools {

namespace bp = boost::process;

struct ProcessApi::Impl {
  bp::opstream requests;
  bp::ipstream responses;
  bp::child child;
};

ProcessApi::ProcessApi(const std::string& command) : impl_(std::make_unique<Impl>()) {
  try {
    impl_->child = bp::child(bp::search_path("sh"), "-c", command,
                             bp::std_in<impl_->requests, bp::std_out> impl_->responses);
  } catch (const std::exception& e) {
    throw TransportError("cannot start model endpoint: " + std::string(e.what()));
  }
  api_ = wm::MakeStreamApi(impl_->responses, impl_->requests);
}

ProcessApi::~ProcessApi() {
  try {
    impl_->requests.pipe().close();
    if (impl_->child.running()) impl_->child.wait();
  } catch (...) {
  }
}

}  // namespace fedmark::tools
