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

#ifndef BANSEC_FRAME_HPP_
#define BANSEC_FRAME_HPP_

#include <array>
#include <compare>
#include <string_view>

#include "bansec/bytes.hpp"
#include "bansec/result.hpp"

namespace bansec {

// 16-bit node/hub identifier. 0 is reserved for unassigned/orphan devices;
// hubs live in the range >= 0xFF00 so the two address spaces stay disjoint.
struct Address {
  uint16_t value = 0;

  static constexpr uint16_t kHubBase = 0xFF00;
  bool is_unassigned() const { return value == 0; }
  bool is_hub() const { return value >= kHubBase; }

  auto operator<=>(const Address&) const = default;
};

enum class SecurityLevel : uint8_t {
  Level0Unsecured = 0,
  Level1AuthOnly = 1,
  Level2AuthEnc = 2,
};

std::string_view level_name(SecurityLevel level);

enum class FrameType : uint8_t { Beacon = 0, Management = 1, Control = 2, Data = 3, WakeUp = 4 };

std::string_view frame_type_name(FrameType t);

// Two-part security sequence number. Only the low half travels in the frame;
// the high half is per-key context, bound to the frame through the nonce.
struct SequencePair {
  uint32_t high = 0;
  uint16_t low = 0;

  auto operator<=>(const SequencePair&) const = default;  // lexicographic (high, low)

  uint64_t flat() const { return (static_cast<uint64_t>(high) << 16) | low; }
};

// 13-octet CCM nonce:
//   sender(2) || recipient(2) || level-and-type tag(1) || high SN(4) ||
//   low SN(2) || zero pad(2)
// The layout is artifact-local; it is injective in (sender, recipient, seq)
// for a fixed tag, which is what nonce uniqueness needs.
using Nonce = std::array<uint8_t, 13>;

Nonce build_nonce(Address sender, Address recipient, uint8_t level_tag, SequencePair seq);

uint8_t level_tag_of(SecurityLevel level, FrameType type);

struct SecuritySuiteSelector {
  enum class Protocol : uint8_t {
    I_PreSharedMK = 1,
    II_Unauthenticated = 2,
    III_PublicKeyHidden = 3,
    IV_PasswordAuthenticated = 4,
    V_DisplayAuthenticated = 5,
  };

  SecurityLevel level = SecurityLevel::Level0Unsecured;
  Protocol protocol = Protocol::I_PreSharedMK;
  uint8_t cipher = 0;  // CipherFunction value; kept raw here to avoid a crypto dependency
  bool auth_control_frames = false;

  bool operator==(const SecuritySuiteSelector&) const = default;
};

std::string_view protocol_name(SecuritySuiteSelector::Protocol p);

constexpr size_t kMaxPayloadOctets = 255;
constexpr size_t kHeaderOctets = 10;

struct Frame {
  Address sender;
  Address recipient;
  FrameType frame_type = FrameType::Data;
  SecurityLevel level = SecurityLevel::Level0Unsecured;
  SequencePair seq;
  uint8_t key_id = 0;
  Bytes payload;
  Bytes mic;  // empty, 8, or 16 octets

  bool operator==(const Frame&) const = default;

  // header octets exactly as they appear on the wire (also the AAD for CCM)
  Bytes header() const;
};

// Wire layout (see docs/wire.md):
//   sender(2, BE) || recipient(2, BE) || type(1) || level(1) || key_id(1) ||
//   low SN(2, BE) || payload length(1) || payload || MIC
// The high-order SN never travels; receivers reconstruct it (see channel.hpp).
Result<Bytes> encode_frame(const Frame& frame);
Result<Frame> decode_frame(ByteView bytes);

// Low increments by one; on overflow it wraps to zero and high increments.
// SequenceExhausted once both halves are saturated: the key must be retired.
Result<SequencePair> advance_sequence(SequencePair seq);

enum class DiscardReason : uint8_t {
  None = 0,
  NotFresh,
  HighWrap,
  NoKeys,
  BadMic,
  LevelViolation,
  UnknownKey,
  RevokedKey,
  RateLimited,
  HubBusy,
  Jammed,
  PeerDead,
  NoRoute,
  BanFull,
  Unauthorized,
  SuiteMismatch,
  NotReachable,
};

std::string_view discard_reason_name(DiscardReason r);

struct ReplayVerdict {
  bool accept = false;
  DiscardReason reason = DiscardReason::None;
};

// Accept iff incoming is lexicographically greater than the last accepted
// pair and the high half did not wrap past zero.
ReplayVerdict check_replay(SequencePair last_accepted, SequencePair incoming);

}  // namespace bansec

#endif  // BANSEC_FRAME_HPP_
