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

#ifndef BANSEC_PROFILE_HPP_
#define BANSEC_PROFILE_HPP_

#include <cstdint>
#include <string_view>

namespace bansec {

// Baseline models the standard as written; Hardened adds the improvement set
// (configurable BAN size, ACL admission, liveness detection, backup hubs,
// AES-256 suites, rate limiting, sealed key storage, peer-to-peer topology).
enum class Profile : uint8_t { Baseline, Hardened };

inline std::string_view profile_name(Profile p) {
  return p == Profile::Baseline ? "baseline" : "hardened";
}

}  // namespace bansec

#endif  // BANSEC_PROFILE_HPP_
