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

#ifndef BANSEC_HANDSHAKE_HPP_
#define BANSEC_HANDSHAKE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bansec/crypto/p256.hpp"
#include "bansec/crypto/suite.hpp"
#include "bansec/frame.hpp"
#include "bansec/keystore.hpp"
#include "bansec/rng.hpp"

namespace bansec {

// Security association as a message-driven session state machine. Every
// protocol is a three-phase handshake (request, response, activate) between
// an Initiator and a Responder:
//
//   I    pre-shared MK; challenge-response tags under a KCK derived from it,
//        so each side proves possession of the MK (mutual authentication)
//   II   plain ephemeral ECDH; key confirmation only, no authentication
//   III  the responder's static public key is pre-provisioned at the
//        initiator and never transmitted; confirmation tags both ways
//   IV   password-authenticated: both ephemeral points travel blinded by a
//        password-derived multiple of the base point
//   V    ephemeral ECDH plus an out-of-band 5-digit check value compared on
//        the two displays
//
// PTK creation / GTK distribution and disassociation (the erase exchange)
// live in keystore.hpp and the free functions at the bottom of this header.

enum class Role : uint8_t { Initiator, Responder };
enum class Phase : uint8_t { Idle, Requested, Responded, Activated, Aborted };
enum class AbortReason : uint8_t { None, AuthFailure, SuiteMismatch, ProtocolViolation };

std::string_view phase_name(Phase p);

struct HandshakeMsg {
  enum class Kind : uint8_t { Request = 1, Response = 2, Activate = 3 };

  Kind kind = Kind::Request;
  SecuritySuiteSelector sss;
  Bytes nonce;                        // 16 octets; empty in activate
  std::optional<Bytes> public_point;  // 64 octets when present
  std::optional<Bytes> confirm_tag;   // 16 octets when present

  Bytes serialize() const;
  Bytes serialize_sans_tag() const;
  static Result<HandshakeMsg> parse(ByteView octets);
};

struct SessionConfig {
  SecuritySuiteSelector sss;
  std::optional<crypto::SymmetricKey> pre_shared_mk;   // protocol I
  std::optional<Bytes> password;                       // protocol IV
  std::optional<crypto::P256Point> peer_public;        // protocol III, initiator side
  std::optional<crypto::KeyPair> own_static_keypair;   // protocol III, responder side
  bool display = false;                                // protocol V
};

struct SessionResult {
  crypto::SymmetricKey mk;
  bool mutually_authenticated = false;
};

class ProtocolSession {
 public:
  using Protocol = SecuritySuiteSelector::Protocol;

  static Result<ProtocolSession> create(Role role, Protocol protocol, Address self, Address peer,
                                        SessionConfig config, RandomSource& rng);

  // Drives the state machine. The initiator's first step takes no incoming
  // message. Returns the messages to transmit (at most one).
  std::vector<HandshakeMsg> advance(const std::optional<HandshakeMsg>& incoming);

  Phase phase() const { return phase_; }
  AbortReason abort_reason() const { return abort_reason_; }
  const std::optional<SessionResult>& result() const { return result_; }
  Role role() const { return role_; }
  Protocol protocol() const { return protocol_; }
  const Bytes& own_nonce() const { return own_nonce_; }
  const Bytes& peer_nonce() const { return peer_nonce_; }
  const std::vector<std::string>& log() const { return log_; }

  // Protocol V: 5-digit check value over the request/response transcript,
  // identical on both honest ends once the session reached Responded.
  Result<uint32_t> display_checkvalue() const;

 private:
  ProtocolSession() = default;

  void abort(AbortReason reason);
  Status derive_secrets_from_peer(const Bytes& peer_point_octets);
  Result<Bytes> password_blind(const crypto::P256Point& point, bool unblind) const;
  crypto::AuthTag tag_over(const HandshakeMsg& msg) const;
  HandshakeMsg make_request();
  Result<HandshakeMsg> make_response(const HandshakeMsg& request);
  Result<HandshakeMsg> make_activate(const HandshakeMsg& response);

  Role role_ = Role::Initiator;
  Protocol protocol_ = Protocol::I_PreSharedMK;
  Address self_, peer_;
  SessionConfig config_;
  Phase phase_ = Phase::Idle;
  AbortReason abort_reason_ = AbortReason::None;

  Bytes own_nonce_, peer_nonce_;
  std::optional<crypto::KeyPair> ephemeral_;
  std::optional<crypto::SymmetricKey> kck_;
  std::optional<crypto::SymmetricKey> kmac_key_;  // protocol V check value
  std::optional<crypto::SymmetricKey> mk_;
  Bytes transcript_;
  Bytes transcript_first_two_;  // request || response, frozen for the check value
  std::optional<SessionResult> result_;
  std::vector<std::string> log_;
};

// Authenticated disassociation (the erase phase). The request is sealed under
// the pair's PTK with a 16-octet MIC; the receiving side verifies before
// erasing. Unauthenticated erase requests are ignored when the suite demands
// security.
Result<Frame> build_disassociation(KeyStore& store, Address node, Address hub);
Status handle_disassociation(KeyStore& store, const Frame& frame, SecurityLevel min_level);

// Library-level pair teardown: runs the exchange across both stores.
Result<Frame> disassociate(KeyStore& node_store, KeyStore& hub_store, Address node, Address hub);

}  // namespace bansec

#endif  // BANSEC_HANDSHAKE_HPP_
