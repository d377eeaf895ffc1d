// Copyright 2026 The bansec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include <stdexcept>

#include "bansec/assessment.hpp"

namespace bansec::assessment {

static const char* kEmbeddedData =
#include "assessment_data.inc"
    ;

const Registry& Registry::embedded() {
  static const Registry registry = [] {
    auto loaded = Registry::load(kEmbeddedData);
    if (!loaded) throw std::runtime_error("embedded assessment dataset failed validation");
    return *loaded;
  }();
  return registry;
}

}  // namespace bansec::assessment
