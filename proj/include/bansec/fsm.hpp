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

#ifndef BANSEC_FSM_HPP_
#define BANSEC_FSM_HPP_

#include "bansec/hub.hpp"
#include "bansec/keystore.hpp"
#include "bansec/profile.hpp"

namespace bansec {

// Per-node MAC security state machine (see docs/fsm.md): orphan, associated,
// secured, connected, forward path only via AssocSuccess -> PtkEstablished ->
// ConnectionAssigned. Illegal events self-loop with a diagnostic.

enum class SecurityState : uint8_t { Orphan, Associated, Secured, Connected };
enum class FsmEvent : uint8_t {
  AssocSuccess,
  AssocAborted,
  PtkEstablished,
  ConnectionAssigned,
  DisassocDone,
  PeerUnreachable,  // hardened liveness extension
  KeyRevoked,
};
enum class FsmAction : uint8_t { None, Diagnostic, EraseKeys };

std::string_view state_name(SecurityState s);
std::string_view event_name(FsmEvent e);

struct Transition {
  SecurityState next = SecurityState::Orphan;
  FsmAction action = FsmAction::None;
};

// Total and deterministic over the full state x event alphabet.
Transition handle_event(SecurityState state, FsmEvent event, Profile profile);

// Suite negotiation against hub policy: the node's proposal is accepted
// unchanged when it satisfies minimum level, allowed protocols, and allowed
// ciphers.
struct SuiteDecision {
  ConnectionStatus status = ConnectionStatus::Accepted;
  SecuritySuiteSelector suite;
};

SuiteDecision negotiate_suite(const SecuritySuiteSelector& node_sss, const HubPolicy& policy);

// Inbound filter for one node's channel: level-2 frames are delivered only in
// Secured/Connected with a valid MIC, decryption, and a fresh sequence
// number; level 1 the same without decryption; level 0 only when the suite
// permits it.
struct InboundVerdict {
  bool deliver = false;
  DiscardReason reason = DiscardReason::None;
  Bytes payload;
};

InboundVerdict accept_inbound(SecurityState state, const Frame& frame, KeyStore& keys,
                              const HubPolicy& policy, bool touch_secure_link = false);

}  // namespace bansec

#endif  // BANSEC_FSM_HPP_
