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

#ifndef BANSEC_RESULT_HPP_
#define BANSEC_RESULT_HPP_

#include <cassert>
#include <string_view>
#include <utility>
#include <variant>

namespace bansec {

enum class Err {
  Encode,             // frame violates the wire contract (payload too long, bad MIC length)
  Truncated,          // decode input shorter than its declared layout
  Malformed,          // decode input inconsistent (level/MIC mismatch, bad enum value)
  SequenceExhausted,  // 48-bit counter space used up, key must be retired
  Crypto,             // entropy failure or degenerate curve arithmetic
  InvalidPublicKey,   // peer point off-curve, identity, or out of field range
  NonceReuse,         // caller attempted to seal twice under the same (key, nonce)
  AuthFailure,        // MIC/tag verification failed
  UnsupportedCipher,  // cipher slot present but not implemented (Camellia stub)
  Usage,              // precondition violated by the caller (bad label, bad metric, ...)
  KeyConflict,        // second Active key of the same role for a pair without replace
  MissingMasterKey,   // rotation requested with no Active MK
  NotSecured,         // group member lacks an Active PTK
  NotFound,           // unknown record / address / pair
  Config,             // scenario or session configuration invalid
  DisplayUnavailable, // protocol V endpoint without a display
  Unauthorized,       // ACL update by a non-admin caller
  NetworkDown,        // no alive hub to elect
  Registry,           // assessment data references an unknown attribute id
  Traceability,       // unsatisfied spec with no motivating recommendation
};

std::string_view err_name(Err e);

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Err e) : v_(e) {}                   // NOLINT(google-explicit-constructor)

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  T& operator*() {
    assert(ok());
    return std::get<T>(v_);
  }
  const T& operator*() const {
    assert(ok());
    return std::get<T>(v_);
  }
  T* operator->() { return &**this; }
  const T* operator->() const { return &**this; }

  T& value() { return **this; }
  const T& value() const { return **this; }

  Err error() const {
    assert(!ok());
    return std::get<Err>(v_);
  }

 private:
  std::variant<T, Err> v_;
};

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};
using Status = Result<Unit>;

inline Status ok_status() { return Status(Unit{}); }

}  // namespace bansec

#endif  // BANSEC_RESULT_HPP_
