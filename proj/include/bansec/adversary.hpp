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

#ifndef BANSEC_ADVERSARY_HPP_
#define BANSEC_ADVERSARY_HPP_

#include <string>
#include <vector>

#include "bansec/frame.hpp"
#include "bansec/profile.hpp"
#include "bansec/result.hpp"
#include "bansec/sim/scenario.hpp"

namespace bansec::adversary {

// Executable attack library against a running simulation. The adversary only
// ever handles wire octets from links it sits on plus whatever secrets it was
// given; success predicates are evaluated by the harness from simulator
// metrics.

enum class AttackKind : uint8_t {
  Eavesdrop,
  Replay,
  Impersonate,
  MitmHandshake,
  DosWakeupFlood,
  DosInvalidFrameFlood,
};

std::string_view attack_name(AttackKind k);
Result<AttackKind> attack_from_name(std::string_view name);

struct AdversaryModel {
  std::vector<std::pair<Address, Address>> observed_links;  // radio position
  bool can_inject = false;  // active attacks need a transmitter
  bool touching = false;    // touch-secure links are opaque otherwise
  std::vector<Bytes> knows;  // secrets granted to the adversary, if any

  bool observes(Address a, Address b) const;
  static AdversaryModel passive_on(std::vector<std::pair<Address, Address>> links);
  static AdversaryModel active_on(std::vector<std::pair<Address, Address>> links);
};

struct AttackReport {
  AttackKind kind = AttackKind::Eavesdrop;
  Profile profile = Profile::Baseline;
  uint64_t attempts = 0;
  uint64_t successes = 0;
  int64_t side_metric = 0;
  std::string side_metric_name;

  double success_rate() const { return attempts == 0 ? 0.0 : double(successes) / attempts; }
};

// Runs one attack kind against the scenario under the given profile.
// Deterministic in (scenario, kind, adversary, profile, seed, attempts).
Result<AttackReport> run_attack(const std::string& scenario_text, AttackKind kind,
                                const AdversaryModel& adversary, Profile profile, uint64_t seed,
                                uint64_t attempts = 1000);

// Protocol-level dual-session relay oracle used by the MitmHandshake kind:
// the adversary answers the initiator and separately courts the responder,
// substituting its own key material. Success means both honest ends activate
// while the adversary holds the session secrets (protocol V additionally
// requires the out-of-band check values to collide).
struct MitmOutcome {
  uint64_t attempts = 0;
  uint64_t successes = 0;
};
MitmOutcome mitm_handshake_oracle(SecuritySuiteSelector::Protocol protocol, uint64_t seed,
                                  uint64_t attempts);

// Side-by-side baseline/hardened table for the given kinds.
Result<std::vector<AttackReport>> compare_profiles(const std::string& scenario_text,
                                                   const std::vector<AttackKind>& kinds,
                                                   const AdversaryModel& adversary, uint64_t seed,
                                                   uint64_t attempts = 1000);

// kind,profile,attempts,successes,side_metric
std::string report_csv(const std::vector<AttackReport>& reports);

}  // namespace bansec::adversary

#endif  // BANSEC_ADVERSARY_HPP_
