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

#include "bansec/channel.hpp"

namespace bansec {

using crypto::CipherFunction;

Result<Frame> seal_frame(KeyRecord& rec, CipherFunction cipher, FrameType type,
                         SecurityLevel level, Address sender, Address recipient, ByteView payload,
                         size_t mic_octets) {
  if (rec.state != KeyState::Active) return Err::Usage;
  if (payload.size() > kMaxPayloadOctets) return Err::Encode;

  Frame f;
  f.sender = sender;
  f.recipient = recipient;
  f.frame_type = type;
  f.level = level;
  f.key_id = static_cast<uint8_t>(rec.id & 0xFF);
  f.payload.assign(payload.begin(), payload.end());

  if (level == SecurityLevel::Level0Unsecured) {
    f.seq = SequencePair{0, 0};
    return f;
  }

  auto advanced = advance_sequence(rec.last_seq_tx);
  if (!advanced) return advanced.error();
  if (!(*advanced > rec.last_seq_tx)) return Err::NonceReuse;
  f.seq = *advanced;

  Nonce nonce = build_nonce(sender, recipient, level_tag_of(level, type), f.seq);
  Bytes aad = f.header();
  Result<crypto::Sealed> sealed = Err::Usage;
  if (level == SecurityLevel::Level2AuthEnc) {
    sealed = crypto::ccm_seal(cipher, rec.key, nonce, aad, f.payload, mic_octets);
  } else {
    append(aad, f.payload);
    sealed = crypto::ccm_seal(cipher, rec.key, nonce, aad, Bytes{}, mic_octets);
  }
  if (!sealed) return sealed.error();

  if (level == SecurityLevel::Level2AuthEnc) f.payload = std::move(sealed->ciphertext);
  f.mic = std::move(sealed->mic);
  rec.last_seq_tx = f.seq;
  return f;
}

OpenOutcome open_frame(KeyRecord& rec, CipherFunction cipher, const Frame& frame) {
  if (rec.state == KeyState::Revoked) return {false, DiscardReason::RevokedKey, {}};
  if (rec.state != KeyState::Active) return {false, DiscardReason::UnknownKey, {}};
  if (frame.level == SecurityLevel::Level0Unsecured || frame.mic.empty()) {
    return {false, DiscardReason::LevelViolation, {}};
  }

  // Reconstruct the untransmitted high half of the sequence number. A
  // non-increasing low value is either a stale frame (same high, discarded)
  // or a genuine low wrap (high + 1); the MIC decides, since the nonce binds
  // the candidate.
  const SequencePair last = rec.last_seq_rx;
  SequencePair candidate{last.high, frame.seq.low};
  bool stale_unless_wrapped = false;
  if (frame.seq.low <= last.low) {
    if (last.high == 0xFFFFFFFFu) return {false, DiscardReason::HighWrap, {}};
    candidate.high = last.high + 1;
    stale_unless_wrapped = true;
  }

  Nonce nonce = build_nonce(frame.sender, frame.recipient,
                            level_tag_of(frame.level, frame.frame_type), candidate);
  Bytes aad = frame.header();
  Result<Bytes> plain = Err::AuthFailure;
  if (frame.level == SecurityLevel::Level2AuthEnc) {
    plain = crypto::ccm_open(cipher, rec.key, nonce, aad, frame.payload, frame.mic);
  } else {
    append(aad, frame.payload);
    plain = crypto::ccm_open(cipher, rec.key, nonce, aad, Bytes{}, frame.mic);
    if (plain.ok()) *plain = frame.payload;
  }
  if (!plain) {
    return {false, stale_unless_wrapped ? DiscardReason::NotFresh : DiscardReason::BadMic, {}};
  }

  ReplayVerdict verdict = check_replay(last, candidate);
  if (!verdict.accept) return {false, verdict.reason, {}};

  rec.last_seq_rx = candidate;
  return {true, DiscardReason::None, std::move(*plain)};
}

}  // namespace bansec
