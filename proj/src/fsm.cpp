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

#include "bansec/fsm.hpp"

#include "bansec/channel.hpp"

namespace bansec {

std::string_view state_name(SecurityState s) {
  switch (s) {
    case SecurityState::Orphan: return "Orphan";
    case SecurityState::Associated: return "Associated";
    case SecurityState::Secured: return "Secured";
    case SecurityState::Connected: return "Connected";
  }
  return "?";
}

std::string_view event_name(FsmEvent e) {
  switch (e) {
    case FsmEvent::AssocSuccess: return "AssocSuccess";
    case FsmEvent::AssocAborted: return "AssocAborted";
    case FsmEvent::PtkEstablished: return "PtkEstablished";
    case FsmEvent::ConnectionAssigned: return "ConnectionAssigned";
    case FsmEvent::DisassocDone: return "DisassocDone";
    case FsmEvent::PeerUnreachable: return "PeerUnreachable";
    case FsmEvent::KeyRevoked: return "KeyRevoked";
  }
  return "?";
}

Transition handle_event(SecurityState state, FsmEvent event, Profile profile) {
  using S = SecurityState;
  using E = FsmEvent;

  // Events that force a return to Orphan from anywhere.
  if (event == E::AssocAborted || event == E::DisassocDone) {
    if (state == S::Orphan) return {S::Orphan, FsmAction::None};
    return {S::Orphan, FsmAction::EraseKeys};
  }
  if (event == E::PeerUnreachable) {
    // Hardened liveness detection; the baseline standard hangs silently.
    if (profile == Profile::Hardened && state != S::Orphan) {
      return {S::Orphan, FsmAction::EraseKeys};
    }
    return {state, FsmAction::Diagnostic};
  }

  switch (state) {
    case S::Orphan:
      if (event == E::AssocSuccess) return {S::Associated, FsmAction::None};
      break;
    case S::Associated:
      if (event == E::PtkEstablished) return {S::Secured, FsmAction::None};
      break;
    case S::Secured:
      if (event == E::ConnectionAssigned) return {S::Connected, FsmAction::None};
      if (event == E::KeyRevoked) return {S::Associated, FsmAction::None};
      break;
    case S::Connected:
      if (event == E::KeyRevoked) return {S::Associated, FsmAction::None};
      break;
  }
  // Stray frames and duplicate events must not derail a live node.
  return {state, FsmAction::Diagnostic};
}

SuiteDecision negotiate_suite(const SecuritySuiteSelector& node_sss, const HubPolicy& policy) {
  HubPolicy p = policy.normalized();
  if (node_sss.level < p.min_level) return {ConnectionStatus::RejectedSuiteMismatch, {}};
  if (!p.allowed_protocols.empty() && !p.allowed_protocols.contains(node_sss.protocol)) {
    return {ConnectionStatus::RejectedSuiteMismatch, {}};
  }
  const bool cipher_listed = p.allowed_ciphers.empty()
                                 ? node_sss.cipher == 0  // default: AES-128 only
                                 : p.allowed_ciphers.contains(node_sss.cipher);
  if (!cipher_listed) return {ConnectionStatus::RejectedSuiteMismatch, {}};
  if (node_sss.cipher == 1 && p.profile != Profile::Hardened) {
    return {ConnectionStatus::RejectedSuiteMismatch, {}};
  }
  return {ConnectionStatus::Accepted, node_sss};
}

InboundVerdict accept_inbound(SecurityState state, const Frame& frame, KeyStore& keys,
                              const HubPolicy& policy, bool touch_secure_link) {
  HubPolicy p = policy.normalized();

  if (frame.level == SecurityLevel::Level0Unsecured) {
    if (p.min_level == SecurityLevel::Level0Unsecured ||
        (touch_secure_link && p.allow_touch_secure_level0)) {
      return {true, DiscardReason::None, frame.payload};
    }
    return {false, DiscardReason::LevelViolation, {}};
  }

  if (frame.level < p.min_level) return {false, DiscardReason::LevelViolation, {}};

  // Sealed traffic needs an established PTK, which only exists from Secured on.
  if (state != SecurityState::Secured && state != SecurityState::Connected) {
    return {false, DiscardReason::NoKeys, {}};
  }

  KeyRecord* rec = keys.find_active(crypto::KeyRole::PTK, frame.sender, frame.recipient);
  if (rec == nullptr) rec = keys.find_active(crypto::KeyRole::PTK, frame.recipient, frame.sender);
  if (rec == nullptr) {
    // Distinguish a revoked key from a never-seen one.
    for (auto& r : keys.records()) {
      if (r.key.role == crypto::KeyRole::PTK && r.state == KeyState::Revoked &&
          ((r.node == frame.sender && r.hub == frame.recipient) ||
           (r.node == frame.recipient && r.hub == frame.sender))) {
        return {false, DiscardReason::RevokedKey, {}};
      }
    }
    return {false, DiscardReason::NoKeys, {}};
  }

  crypto::CipherFunction cipher = rec->key.bits == crypto::KeyBits::K256
                                      ? crypto::CipherFunction::Aes256Ccm
                                      : crypto::CipherFunction::Aes128Ccm;
  OpenOutcome out = open_frame(*rec, cipher, frame);
  return {out.delivered, out.reason, std::move(out.payload)};
}

}  // namespace bansec
