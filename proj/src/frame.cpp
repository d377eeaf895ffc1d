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

#include "bansec/frame.hpp"

namespace bansec {

std::string_view level_name(SecurityLevel level) {
  switch (level) {
    case SecurityLevel::Level0Unsecured: return "Level0";
    case SecurityLevel::Level1AuthOnly: return "Level1";
    case SecurityLevel::Level2AuthEnc: return "Level2";
  }
  return "?";
}

std::string_view frame_type_name(FrameType t) {
  switch (t) {
    case FrameType::Beacon: return "Beacon";
    case FrameType::Management: return "Management";
    case FrameType::Control: return "Control";
    case FrameType::Data: return "Data";
    case FrameType::WakeUp: return "WakeUp";
  }
  return "?";
}

std::string_view protocol_name(SecuritySuiteSelector::Protocol p) {
  using P = SecuritySuiteSelector::Protocol;
  switch (p) {
    case P::I_PreSharedMK: return "I";
    case P::II_Unauthenticated: return "II";
    case P::III_PublicKeyHidden: return "III";
    case P::IV_PasswordAuthenticated: return "IV";
    case P::V_DisplayAuthenticated: return "V";
  }
  return "?";
}

std::string_view discard_reason_name(DiscardReason r) {
  switch (r) {
    case DiscardReason::None: return "None";
    case DiscardReason::NotFresh: return "NotFresh";
    case DiscardReason::HighWrap: return "HighWrap";
    case DiscardReason::NoKeys: return "NoKeys";
    case DiscardReason::BadMic: return "BadMic";
    case DiscardReason::LevelViolation: return "LevelViolation";
    case DiscardReason::UnknownKey: return "UnknownKey";
    case DiscardReason::RevokedKey: return "RevokedKey";
    case DiscardReason::RateLimited: return "RateLimited";
    case DiscardReason::HubBusy: return "HubBusy";
    case DiscardReason::Jammed: return "Jammed";
    case DiscardReason::PeerDead: return "PeerDead";
    case DiscardReason::NoRoute: return "NoRoute";
    case DiscardReason::BanFull: return "BanFull";
    case DiscardReason::Unauthorized: return "Unauthorized";
    case DiscardReason::SuiteMismatch: return "SuiteMismatch";
    case DiscardReason::NotReachable: return "NotReachable";
  }
  return "?";
}

uint8_t level_tag_of(SecurityLevel level, FrameType type) {
  return static_cast<uint8_t>((static_cast<uint8_t>(level) << 4) | static_cast<uint8_t>(type));
}

Nonce build_nonce(Address sender, Address recipient, uint8_t level_tag, SequencePair seq) {
  Nonce n{};
  n[0] = static_cast<uint8_t>(sender.value >> 8);
  n[1] = static_cast<uint8_t>(sender.value & 0xFF);
  n[2] = static_cast<uint8_t>(recipient.value >> 8);
  n[3] = static_cast<uint8_t>(recipient.value & 0xFF);
  n[4] = level_tag;
  n[5] = static_cast<uint8_t>(seq.high >> 24);
  n[6] = static_cast<uint8_t>(seq.high >> 16);
  n[7] = static_cast<uint8_t>(seq.high >> 8);
  n[8] = static_cast<uint8_t>(seq.high & 0xFF);
  n[9] = static_cast<uint8_t>(seq.low >> 8);
  n[10] = static_cast<uint8_t>(seq.low & 0xFF);
  n[11] = 0;
  n[12] = 0;
  return n;
}

Bytes Frame::header() const {
  Bytes h;
  h.reserve(kHeaderOctets);
  put_u16(h, sender.value);
  put_u16(h, recipient.value);
  h.push_back(static_cast<uint8_t>(frame_type));
  h.push_back(static_cast<uint8_t>(level));
  h.push_back(key_id);
  put_u16(h, seq.low);
  h.push_back(static_cast<uint8_t>(payload.size()));
  return h;
}

namespace {

bool valid_mic_len(SecurityLevel level, size_t mic_len) {
  if (level == SecurityLevel::Level0Unsecured) return mic_len == 0;
  return mic_len == 8 || mic_len == 16;
}

}  // namespace

Result<Bytes> encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayloadOctets) return Err::Encode;
  if (!valid_mic_len(frame.level, frame.mic.size())) return Err::Encode;

  Bytes out = frame.header();
  append(out, frame.payload);
  append(out, frame.mic);
  return out;
}

Result<Frame> decode_frame(ByteView bytes) {
  if (bytes.size() < kHeaderOctets) return Err::Truncated;

  Frame f;
  f.sender.value = get_u16(bytes, 0);
  f.recipient.value = get_u16(bytes, 2);
  uint8_t type = bytes[4];
  uint8_t level = bytes[5];
  if (type > static_cast<uint8_t>(FrameType::WakeUp)) return Err::Malformed;
  if (level > static_cast<uint8_t>(SecurityLevel::Level2AuthEnc)) return Err::Malformed;
  f.frame_type = static_cast<FrameType>(type);
  f.level = static_cast<SecurityLevel>(level);
  f.key_id = bytes[6];
  f.seq = SequencePair{0, get_u16(bytes, 7)};
  const size_t payload_len = bytes[9];

  if (bytes.size() < kHeaderOctets + payload_len) return Err::Truncated;
  const size_t mic_len = bytes.size() - kHeaderOctets - payload_len;
  if (!valid_mic_len(f.level, mic_len)) return Err::Malformed;

  f.payload.assign(bytes.begin() + kHeaderOctets, bytes.begin() + kHeaderOctets + payload_len);
  f.mic.assign(bytes.begin() + kHeaderOctets + payload_len, bytes.end());
  return f;
}

Result<SequencePair> advance_sequence(SequencePair seq) {
  if (seq.low == 0xFFFF) {
    if (seq.high == 0xFFFFFFFFu) return Err::SequenceExhausted;
    return SequencePair{seq.high + 1, 0};
  }
  return SequencePair{seq.high, static_cast<uint16_t>(seq.low + 1)};
}

ReplayVerdict check_replay(SequencePair last_accepted, SequencePair incoming) {
  if (incoming.high < last_accepted.high) return {false, DiscardReason::HighWrap};
  if (incoming <= last_accepted) return {false, DiscardReason::NotFresh};
  return {true, DiscardReason::None};
}

}  // namespace bansec
