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

#include "bansec/result.hpp"

namespace bansec {

std::string_view err_name(Err e) {
  switch (e) {
    case Err::Encode: return "Encode";
    case Err::Truncated: return "Truncated";
    case Err::Malformed: return "Malformed";
    case Err::SequenceExhausted: return "SequenceExhausted";
    case Err::Crypto: return "Crypto";
    case Err::InvalidPublicKey: return "InvalidPublicKey";
    case Err::NonceReuse: return "NonceReuse";
    case Err::AuthFailure: return "AuthFailure";
    case Err::UnsupportedCipher: return "UnsupportedCipher";
    case Err::Usage: return "Usage";
    case Err::KeyConflict: return "KeyConflict";
    case Err::MissingMasterKey: return "MissingMasterKey";
    case Err::NotSecured: return "NotSecured";
    case Err::NotFound: return "NotFound";
    case Err::Config: return "Config";
    case Err::DisplayUnavailable: return "DisplayUnavailable";
    case Err::Unauthorized: return "Unauthorized";
    case Err::NetworkDown: return "NetworkDown";
    case Err::Registry: return "Registry";
    case Err::Traceability: return "Traceability";
  }
  return "Unknown";
}

}  // namespace bansec
