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

#include "bansec/handshake.hpp"

#include "bansec/channel.hpp"

namespace bansec {

using crypto::AuthTag;
using crypto::KeyBits;
using crypto::KeyPair;
using crypto::KeyRole;
using crypto::P256Point;
using crypto::SymmetricKey;

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Requested: return "Requested";
    case Phase::Responded: return "Responded";
    case Phase::Activated: return "Activated";
    case Phase::Aborted: return "Aborted";
  }
  return "?";
}

// ---- message wire form ----

Bytes HandshakeMsg::serialize_sans_tag() const {
  Bytes out;
  out.push_back(static_cast<uint8_t>(kind));
  out.push_back(static_cast<uint8_t>(sss.level));
  out.push_back(static_cast<uint8_t>(sss.protocol));
  out.push_back(sss.cipher);
  out.push_back(sss.auth_control_frames ? 1 : 0);
  out.push_back(static_cast<uint8_t>(nonce.size()));
  append(out, nonce);
  out.push_back(public_point.has_value() ? 1 : 0);
  if (public_point) append(out, *public_point);
  return out;
}

Bytes HandshakeMsg::serialize() const {
  Bytes out = serialize_sans_tag();
  out.push_back(confirm_tag.has_value() ? 1 : 0);
  if (confirm_tag) append(out, *confirm_tag);
  return out;
}

Result<HandshakeMsg> HandshakeMsg::parse(ByteView b) {
  if (b.size() < 7) return Err::Truncated;
  HandshakeMsg m;
  if (b[0] < 1 || b[0] > 3) return Err::Malformed;
  m.kind = static_cast<Kind>(b[0]);
  if (b[1] > 2 || b[2] < 1 || b[2] > 5 || b[3] > 2 || b[4] > 1) return Err::Malformed;
  m.sss.level = static_cast<SecurityLevel>(b[1]);
  m.sss.protocol = static_cast<SecuritySuiteSelector::Protocol>(b[2]);
  m.sss.cipher = b[3];
  m.sss.auth_control_frames = b[4] == 1;
  size_t at = 5;
  size_t nonce_len = b[at++];
  if (nonce_len != 0 && nonce_len != 16) return Err::Malformed;
  if (b.size() < at + nonce_len + 1) return Err::Truncated;
  m.nonce.assign(b.begin() + at, b.begin() + at + nonce_len);
  at += nonce_len;
  uint8_t has_pub = b[at++];
  if (has_pub > 1) return Err::Malformed;
  if (has_pub) {
    if (b.size() < at + 64) return Err::Truncated;
    m.public_point = Bytes(b.begin() + at, b.begin() + at + 64);
    at += 64;
  }
  if (b.size() < at + 1) return Err::Truncated;
  uint8_t has_tag = b[at++];
  if (has_tag > 1) return Err::Malformed;
  if (has_tag) {
    if (b.size() < at + 16) return Err::Truncated;
    m.confirm_tag = Bytes(b.begin() + at, b.begin() + at + 16);
    at += 16;
  }
  if (at != b.size()) return Err::Malformed;
  return m;
}

// ---- session ----

namespace {

Bytes address_context(Address initiator, Address responder, const Bytes& ni, const Bytes& nr) {
  Bytes ctx;
  append(ctx, ni);
  append(ctx, nr);
  put_u16(ctx, initiator.value);
  put_u16(ctx, responder.value);
  return ctx;
}

bool uses_ecdh(ProtocolSession::Protocol p) {
  return p != ProtocolSession::Protocol::I_PreSharedMK;
}

bool sends_point(ProtocolSession::Protocol p, Role role) {
  using P = ProtocolSession::Protocol;
  switch (p) {
    case P::I_PreSharedMK: return false;
    case P::III_PublicKeyHidden: return role == Role::Initiator;  // static key stays hidden
    default: return true;
  }
}

bool gives_mutual_auth(ProtocolSession::Protocol p) {
  return p != ProtocolSession::Protocol::II_Unauthenticated;
}

}  // namespace

Result<ProtocolSession> ProtocolSession::create(Role role, Protocol protocol, Address self,
                                                Address peer, SessionConfig config,
                                                RandomSource& rng) {
  using P = Protocol;
  switch (protocol) {
    case P::I_PreSharedMK:
      if (!config.pre_shared_mk) return Err::Config;
      break;
    case P::III_PublicKeyHidden:
      if (role == Role::Initiator && !config.peer_public) return Err::Config;
      if (role == Role::Responder && !config.own_static_keypair) return Err::Config;
      break;
    case P::IV_PasswordAuthenticated:
      if (!config.password || config.password->empty()) return Err::Config;
      break;
    case P::V_DisplayAuthenticated:
      if (!config.display) return Err::DisplayUnavailable;
      break;
    default:
      break;
  }
  if (config.sss.protocol != protocol) config.sss.protocol = protocol;

  ProtocolSession s;
  s.role_ = role;
  s.protocol_ = protocol;
  s.self_ = self;
  s.peer_ = peer;
  s.config_ = std::move(config);
  s.own_nonce_ = rng.bytes(16);

  if (uses_ecdh(protocol)) {
    if (protocol == P::III_PublicKeyHidden && role == Role::Responder) {
      s.ephemeral_ = *s.config_.own_static_keypair;
    } else {
      auto kp = crypto::generate_keypair(rng);
      if (!kp) return kp.error();
      s.ephemeral_ = *kp;
    }
  }
  return s;
}

void ProtocolSession::abort(AbortReason reason) {
  phase_ = Phase::Aborted;
  abort_reason_ = reason;
  // Partial secrets do not outlive a failed association.
  ephemeral_.reset();
  kck_.reset();
  kmac_key_.reset();
  mk_.reset();
  result_.reset();
  log_.push_back("aborted");
}

Result<Bytes> ProtocolSession::password_blind(const P256Point& point, bool unblind) const {
  Bytes pw_key_material = Bytes(16, 0);
  auto pw_key = SymmetricKey::make(KeyBits::K128, pw_key_material, KeyRole::KCK);
  AuthTag pw = crypto::cmac_tag(*pw_key, *config_.password);
  auto pw_as_key = SymmetricKey::make(KeyBits::K128, pw, KeyRole::KCK);

  Address init = role_ == Role::Initiator ? self_ : peer_;
  Address resp = role_ == Role::Initiator ? peer_ : self_;
  Bytes ctx = {'p', 'a', 'k', 'e', 0x01};
  put_u16(ctx, init.value);
  put_u16(ctx, resp.value);
  Bytes w_material = crypto::cmac_tag(*pw_as_key, ctx);
  ctx[4] = 0x02;
  append(w_material, crypto::cmac_tag(*pw_as_key, ctx));
  auto w = crypto::p256_scalar_from_bytes(w_material);

  auto wg = crypto::p256_base_mul(w);
  if (!wg) return wg.error();
  auto mask = unblind ? crypto::p256_negate(*wg) : Result<P256Point>(*wg);
  if (!mask) return mask.error();
  auto blinded = crypto::p256_add(point, *mask);
  if (!blinded) return blinded.error();
  return blinded->encode();
}

Status ProtocolSession::derive_secrets_from_peer(const Bytes& peer_point_octets) {
  Address init = role_ == Role::Initiator ? self_ : peer_;
  Address resp = role_ == Role::Initiator ? peer_ : self_;
  const Bytes& ni = role_ == Role::Initiator ? own_nonce_ : peer_nonce_;
  const Bytes& nr = role_ == Role::Initiator ? peer_nonce_ : own_nonce_;
  Bytes ctx = address_context(init, resp, ni, nr);

  Bytes base;  // 32 octets the key material grows from
  if (protocol_ == Protocol::I_PreSharedMK) {
    mk_ = *config_.pre_shared_mk;
    base = mk_->material;
    base.resize(32, 0x5C);  // widen the 128-bit MK for derivation
  } else {
    P256Point peer_point;
    if (protocol_ == Protocol::III_PublicKeyHidden && role_ == Role::Initiator) {
      peer_point = *config_.peer_public;
    } else {
      auto decoded = P256Point::decode(peer_point_octets);
      if (!decoded) return decoded.error();
      peer_point = *decoded;
    }
    auto shared = crypto::derive_shared_secret(ephemeral_->private_scalar, peer_point);
    if (!shared) return shared.error();
    base = *shared;

    auto shared_key = SymmetricKey::make(KeyBits::K256, base, KeyRole::MK);
    AuthTag mk_material = crypto::cmac_tag(*shared_key, ctx);
    auto mk = SymmetricKey::make(KeyBits::K128, mk_material, KeyRole::MK);
    if (!mk) return mk.error();
    mk_ = *mk;
  }

  auto kck = crypto::derive_key(base, "KCK", ctx, KeyBits::K128, KeyRole::KCK);
  if (!kck) return kck.error();
  kck_ = *kck;
  if (protocol_ == Protocol::V_DisplayAuthenticated) {
    auto kmac = crypto::derive_key(base, "KMAC", ctx, KeyBits::K128, KeyRole::KCK);
    if (!kmac) return kmac.error();
    kmac_key_ = *kmac;
  }
  return ok_status();
}

AuthTag ProtocolSession::tag_over(const HandshakeMsg& msg) const {
  Bytes input = transcript_;
  append(input, msg.serialize_sans_tag());
  return crypto::cmac_tag(*kck_, input);
}

HandshakeMsg ProtocolSession::make_request() {
  HandshakeMsg m;
  m.kind = HandshakeMsg::Kind::Request;
  m.sss = config_.sss;
  m.nonce = own_nonce_;
  if (sends_point(protocol_, Role::Initiator)) {
    if (protocol_ == Protocol::IV_PasswordAuthenticated) {
      auto blinded = password_blind(ephemeral_->public_point, /*unblind=*/false);
      if (blinded) m.public_point = *blinded;
    } else {
      m.public_point = ephemeral_->public_point.encode();
    }
  }
  return m;
}

Result<HandshakeMsg> ProtocolSession::make_response(const HandshakeMsg& request) {
  HandshakeMsg m;
  m.kind = HandshakeMsg::Kind::Response;
  m.sss = config_.sss;
  m.nonce = own_nonce_;
  if (sends_point(protocol_, Role::Responder)) {
    if (protocol_ == Protocol::IV_PasswordAuthenticated) {
      auto blinded = password_blind(ephemeral_->public_point, /*unblind=*/false);
      if (!blinded) return blinded.error();
      m.public_point = *blinded;
    } else {
      m.public_point = ephemeral_->public_point.encode();
    }
  }

  Bytes peer_octets;
  if (request.public_point) {
    peer_octets = *request.public_point;
    if (protocol_ == Protocol::IV_PasswordAuthenticated) {
      auto decoded = P256Point::decode(peer_octets);
      if (!decoded) return decoded.error();
      auto unblinded = password_blind(*decoded, /*unblind=*/true);
      if (!unblinded) return unblinded.error();
      peer_octets = *unblinded;
    }
  }
  auto derived = derive_secrets_from_peer(peer_octets);
  if (!derived.ok()) return derived.error();

  m.confirm_tag = tag_over(m);
  return m;
}

Result<HandshakeMsg> ProtocolSession::make_activate(const HandshakeMsg& response) {
  Bytes peer_octets;
  if (response.public_point) {
    peer_octets = *response.public_point;
    if (protocol_ == Protocol::IV_PasswordAuthenticated) {
      auto decoded = P256Point::decode(peer_octets);
      if (!decoded) return decoded.error();
      auto unblinded = password_blind(*decoded, /*unblind=*/true);
      if (!unblinded) return unblinded.error();
      peer_octets = *unblinded;
    }
  }
  auto derived = derive_secrets_from_peer(peer_octets);
  if (!derived.ok()) return derived.error();

  // The response tag must verify against the transcript before it.
  if (!response.confirm_tag ||
      !ct_equal(*response.confirm_tag, tag_over(response))) {
    return Err::AuthFailure;
  }

  HandshakeMsg m;
  m.kind = HandshakeMsg::Kind::Activate;
  m.sss = config_.sss;
  return m;
}

std::vector<HandshakeMsg> ProtocolSession::advance(const std::optional<HandshakeMsg>& incoming) {
  using Kind = HandshakeMsg::Kind;
  std::vector<HandshakeMsg> out;
  if (phase_ == Phase::Aborted || phase_ == Phase::Activated) return out;

  // Initiator's opening step.
  if (!incoming) {
    if (role_ != Role::Initiator || phase_ != Phase::Idle) {
      abort(AbortReason::ProtocolViolation);
      return out;
    }
    HandshakeMsg request = make_request();
    append(transcript_, request.serialize());
    phase_ = Phase::Requested;
    log_.push_back("sent request (" + std::to_string(request.serialize().size()) + " octets)");
    out.push_back(std::move(request));
    return out;
  }

  const HandshakeMsg& msg = *incoming;
  if (msg.sss.protocol != protocol_) {
    abort(AbortReason::ProtocolViolation);
    return out;
  }

  if (role_ == Role::Responder && phase_ == Phase::Idle) {
    if (msg.kind != Kind::Request) {
      abort(AbortReason::ProtocolViolation);
      return out;
    }
    if (msg.sss != config_.sss) {
      abort(AbortReason::SuiteMismatch);
      return out;
    }
    peer_nonce_ = msg.nonce;
    append(transcript_, msg.serialize());
    auto response = make_response(msg);
    if (!response) {
      abort(response.error() == Err::AuthFailure ? AbortReason::AuthFailure
                                                 : AbortReason::ProtocolViolation);
      return out;
    }
    append(transcript_, response->serialize());
    transcript_first_two_ = transcript_;
    phase_ = Phase::Responded;
    log_.push_back("sent response (" + std::to_string(response->serialize().size()) + " octets)");
    out.push_back(std::move(*response));
    return out;
  }

  if (role_ == Role::Initiator && phase_ == Phase::Requested) {
    if (msg.kind != Kind::Response) {
      abort(AbortReason::ProtocolViolation);
      return out;
    }
    if (msg.sss != config_.sss) {
      // The suite echoed in the response must match the request.
      abort(AbortReason::SuiteMismatch);
      return out;
    }
    peer_nonce_ = msg.nonce;
    auto activate = make_activate(msg);
    if (!activate) {
      abort(activate.error() == Err::AuthFailure ? AbortReason::AuthFailure
                                                 : AbortReason::ProtocolViolation);
      return out;
    }
    log_.push_back("verified response tag");
    append(transcript_, msg.serialize());
    transcript_first_two_ = transcript_;
    activate->confirm_tag = tag_over(*activate);
    append(transcript_, activate->serialize());
    phase_ = Phase::Activated;
    result_ = SessionResult{*mk_, gives_mutual_auth(protocol_)};
    log_.push_back("sent activate; session keys established");
    out.push_back(std::move(*activate));
    return out;
  }

  if (role_ == Role::Responder && phase_ == Phase::Responded) {
    if (msg.kind != Kind::Activate) {
      abort(AbortReason::ProtocolViolation);
      return out;
    }
    if (!msg.confirm_tag || !ct_equal(*msg.confirm_tag, tag_over(msg))) {
      abort(AbortReason::AuthFailure);
      return out;
    }
    append(transcript_, msg.serialize());
    phase_ = Phase::Activated;
    result_ = SessionResult{*mk_, gives_mutual_auth(protocol_)};
    log_.push_back("verified activate tag; session keys established");
    return out;
  }

  abort(AbortReason::ProtocolViolation);
  return out;
}

Result<uint32_t> ProtocolSession::display_checkvalue() const {
  if (protocol_ != Protocol::V_DisplayAuthenticated) return Err::Usage;
  if (phase_ != Phase::Responded && phase_ != Phase::Activated) return Err::Usage;
  if (!kmac_key_) return Err::Usage;
  AuthTag t = crypto::cmac_tag(*kmac_key_, transcript_first_two_);
  uint32_t first17 = (static_cast<uint32_t>(t[0]) << 9) | (static_cast<uint32_t>(t[1]) << 1) |
                     (t[2] >> 7);
  return first17 % 100000;
}

// ---- disassociation (protocol VII) ----

namespace {
const Bytes kErasePayload = from_string("ERASE");
}

Result<Frame> build_disassociation(KeyStore& store, Address node, Address hub) {
  KeyRecord* ptk = store.find_active(KeyRole::PTK, node, hub);
  if (ptk == nullptr) return Err::NotFound;
  return seal_frame(*ptk, crypto::CipherFunction::Aes128Ccm, FrameType::Management,
                    SecurityLevel::Level2AuthEnc, node, hub, kErasePayload, 16);
}

Status handle_disassociation(KeyStore& store, const Frame& frame, SecurityLevel min_level) {
  // DoS hardening: an unauthenticated erase request never erases anything
  // when the suite demands security.
  if (min_level > SecurityLevel::Level0Unsecured) {
    if (frame.level == SecurityLevel::Level0Unsecured || frame.mic.empty()) {
      return Err::AuthFailure;
    }
    KeyRecord* ptk = store.find_active(KeyRole::PTK, frame.sender, frame.recipient);
    if (ptk == nullptr) ptk = store.find_active(KeyRole::PTK, frame.recipient, frame.sender);
    if (ptk == nullptr) return Err::NotFound;
    OpenOutcome out = open_frame(*ptk, crypto::CipherFunction::Aes128Ccm, frame);
    if (!out.delivered || out.payload != kErasePayload) return Err::AuthFailure;
  }
  Address node = frame.sender.is_hub() ? frame.recipient : frame.sender;
  Address hub = frame.sender.is_hub() ? frame.sender : frame.recipient;
  return store.erase_pair(node, hub);
}

Result<Frame> disassociate(KeyStore& node_store, KeyStore& hub_store, Address node, Address hub) {
  auto frame = build_disassociation(node_store, node, hub);
  if (!frame) return frame.error();
  Status handled = handle_disassociation(hub_store, *frame, SecurityLevel::Level1AuthOnly);
  if (!handled.ok()) return handled.error();
  Status own = node_store.erase_pair(node, hub);
  if (!own.ok()) return own.error();
  return frame;
}

}  // namespace bansec
