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

#ifndef BANSEC_CHANNEL_HPP_
#define BANSEC_CHANNEL_HPP_

#include "bansec/keystore.hpp"

namespace bansec {

// Secure channel over one live key: sequence bookkeeping, nonce construction,
// CCM sealing. Level 2 encrypts the payload; level 1 authenticates the header
// and payload with an empty ciphertext; the 10-octet header is always AAD.

// Seals `payload` from sender to recipient, advancing the record's tx
// counter. mic_octets is 8 for data traffic, 16 for key-carrying management
// frames. Fails with NonceReuse if the advanced counter is not strictly
// fresh, SequenceExhausted when the counter space is used up.
Result<Frame> seal_frame(KeyRecord& rec, crypto::CipherFunction cipher, FrameType type,
                         SecurityLevel level, Address sender, Address recipient,
                         ByteView payload, size_t mic_octets = 8);

struct OpenOutcome {
  bool delivered = false;
  DiscardReason reason = DiscardReason::None;
  Bytes payload;  // plaintext when delivered
};

// Verifies and decrypts an inbound sealed frame under `rec`, enforcing
// freshness. The transmitted frame carries only the low-order sequence
// number; the high half is reconstructed from the receive counter and
// validated by the MIC (a replayed low value fails as NotFresh before any
// MIC work, matching the discard rule for non-increasing low-order numbers).
OpenOutcome open_frame(KeyRecord& rec, crypto::CipherFunction cipher, const Frame& frame);

}  // namespace bansec

#endif  // BANSEC_CHANNEL_HPP_
