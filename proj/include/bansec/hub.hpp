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

#ifndef BANSEC_HUB_HPP_
#define BANSEC_HUB_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bansec/frame.hpp"
#include "bansec/profile.hpp"
#include "bansec/result.hpp"

namespace bansec {

enum class Authorization : uint8_t { SensorRead, ActuatorCommand, Admin };
enum class AclStatus : uint8_t { Authorized, Revoked };

std::string_view authorization_name(Authorization a);

struct AclEntry {
  Address node;
  Bytes identity;  // fingerprint of the key the association established
  Authorization authorization = Authorization::SensorRead;
  AclStatus status = AclStatus::Authorized;

  bool operator==(const AclEntry&) const = default;
};

enum class AclOp : uint8_t { Add, Revoke };

// One entry per node; revoked entries stay for the audit trail and never
// admit.
class Acl {
 public:
  Status update(AclOp op, AclEntry entry, Authorization caller);
  const AclEntry* lookup(Address node) const;
  size_t size() const { return entries_.size(); }

  // One line per entry: addr,fingerprint-hex,authorization,status
  std::string to_text() const;
  static Result<Acl> from_text(std::string_view text);

 private:
  std::map<uint16_t, AclEntry> entries_;
};

struct HubPolicy {
  Profile profile = Profile::Baseline;
  uint32_t max_ban_size = 64;  // the standard's mMaxBANSize; configurable only when hardened
  SecurityLevel min_level = SecurityLevel::Level1AuthOnly;
  bool acl_required = false;
  uint32_t rate_limit = 0;  // frames per tick per source; 0 = unlimited
  std::vector<Address> backup_hubs;
  std::set<SecuritySuiteSelector::Protocol> allowed_protocols;  // empty = all
  std::set<uint8_t> allowed_ciphers;                            // CipherFunction values
  bool allow_touch_secure_level0 = false;  // inherently secure links may skip crypto

  // Baseline pins max_ban_size to 64, drops ACL requirements, backups, and
  // rate limits, and forbids the 256-bit cipher.
  HubPolicy normalized() const;
};

enum class ConnectionStatus : uint8_t {
  Accepted,
  RejectedBanFull,
  RejectedUnauthorized,
  RejectedSuiteMismatch,
  RejectedNotReachable,  // hardened only (connection-status extension)
};

std::string_view connection_status_name(ConnectionStatus s);

struct AdmissionRequest {
  Address node;
  SecuritySuiteSelector sss;
  Bytes identity;  // fingerprint presented by the completed association
  // Request arrived over an inherently secure link (e.g. MHz ultrasound);
  // when the policy allows it, suite negotiation is waived because the link
  // physics replaces the cryptography the device cannot run.
  bool touch_secure = false;
};

// Hub-side admission control: BAN size cap, suite policy, and (hardened) the
// access-control list. Every decision lands in an append-only audit log.
class HubAccessControl {
 public:
  explicit HubAccessControl(HubPolicy policy) : policy_(policy.normalized()) {}

  ConnectionStatus admit(const AdmissionRequest& request);

  // Cheap gate evaluated on the association request, before any handshake
  // work: suite policy and BAN size only (identity is checked by admit once
  // the association completed). Rejections are audited; a pass records
  // nothing.
  ConnectionStatus precheck(const AdmissionRequest& request);

  void release(Address node);                 // disassociation
  ConnectionStatus mark_unreachable(Address node);  // hardened liveness path

  // Audited ACL maintenance.
  Status update_acl(AclOp op, AclEntry entry, Authorization caller);

  bool is_admitted(Address node) const { return admitted_.contains(node.value); }
  size_t admitted_count() const { return admitted_.size(); }
  const std::vector<Address>& unreachable_report() const { return unreachable_; }

  Acl& acl() { return acl_; }
  const Acl& acl() const { return acl_; }
  const HubPolicy& policy() const { return policy_; }

  const std::vector<std::string>& audit_log() const { return audit_; }

 private:
  void audit(Address node, std::string_view decision);

  HubPolicy policy_;
  Acl acl_;
  std::set<uint16_t> admitted_;
  std::vector<Address> unreachable_;
  std::vector<std::string> audit_;
};

// Failover (hardened): lowest-address alive hub becomes active. Baseline
// networks die with their single hub.
Result<Address> elect_hub(const HubPolicy& policy, Address primary,
                          const std::set<uint16_t>& alive_hubs);

}  // namespace bansec

#endif  // BANSEC_HUB_HPP_
