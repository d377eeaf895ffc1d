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

#include "bansec/hub.hpp"

#include <sstream>

#include "bansec/fsm.hpp"

namespace bansec {

std::string_view authorization_name(Authorization a) {
  switch (a) {
    case Authorization::SensorRead: return "SensorRead";
    case Authorization::ActuatorCommand: return "ActuatorCommand";
    case Authorization::Admin: return "Admin";
  }
  return "?";
}

std::string_view connection_status_name(ConnectionStatus s) {
  switch (s) {
    case ConnectionStatus::Accepted: return "Accepted";
    case ConnectionStatus::RejectedBanFull: return "RejectedBanFull";
    case ConnectionStatus::RejectedUnauthorized: return "RejectedUnauthorized";
    case ConnectionStatus::RejectedSuiteMismatch: return "RejectedSuiteMismatch";
    case ConnectionStatus::RejectedNotReachable: return "RejectedNotReachable";
  }
  return "?";
}

Status Acl::update(AclOp op, AclEntry entry, Authorization caller) {
  if (caller != Authorization::Admin) return Err::Unauthorized;
  auto it = entries_.find(entry.node.value);
  if (op == AclOp::Add) {
    entry.status = AclStatus::Authorized;
    entries_[entry.node.value] = std::move(entry);
    return ok_status();
  }
  // Revoke keeps the entry for the audit trail.
  if (it == entries_.end()) return Err::NotFound;
  it->second.status = AclStatus::Revoked;
  return ok_status();
}

const AclEntry* Acl::lookup(Address node) const {
  auto it = entries_.find(node.value);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Acl::to_text() const {
  std::ostringstream out;
  for (const auto& [addr, entry] : entries_) {
    out << addr << ',' << to_hex(entry.identity) << ','
        << authorization_name(entry.authorization) << ','
        << (entry.status == AclStatus::Authorized ? "Authorized" : "Revoked") << '\n';
  }
  return out.str();
}

Result<Acl> Acl::from_text(std::string_view text) {
  Acl acl;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string addr, fp, auth, status;
    if (!std::getline(row, addr, ',') || !std::getline(row, fp, ',') ||
        !std::getline(row, auth, ',') || !std::getline(row, status)) {
      return Err::Malformed;
    }
    AclEntry entry;
    entry.node.value = static_cast<uint16_t>(std::stoul(addr));
    entry.identity = from_hex(fp);
    if (auth == "SensorRead") entry.authorization = Authorization::SensorRead;
    else if (auth == "ActuatorCommand") entry.authorization = Authorization::ActuatorCommand;
    else if (auth == "Admin") entry.authorization = Authorization::Admin;
    else return Err::Malformed;
    if (status == "Authorized") entry.status = AclStatus::Authorized;
    else if (status == "Revoked") entry.status = AclStatus::Revoked;
    else return Err::Malformed;
    acl.entries_[entry.node.value] = std::move(entry);
  }
  return acl;
}

HubPolicy HubPolicy::normalized() const {
  HubPolicy p = *this;
  if (p.profile == Profile::Baseline) {
    p.max_ban_size = 64;
    p.acl_required = false;
    p.rate_limit = 0;
    p.backup_hubs.clear();
    p.allowed_ciphers.erase(1);  // Aes256Ccm needs the hardened profile
  }
  return p;
}

ConnectionStatus HubAccessControl::admit(const AdmissionRequest& request) {
  const bool waive_suite = request.touch_secure && policy_.allow_touch_secure_level0;
  if (!waive_suite) {
    SuiteDecision suite = negotiate_suite(request.sss, policy_);
    if (suite.status != ConnectionStatus::Accepted) {
      audit(request.node, connection_status_name(suite.status));
      return suite.status;
    }
  }

  if (policy_.profile == Profile::Hardened && policy_.acl_required) {
    const AclEntry* entry = acl_.lookup(request.node);
    if (entry == nullptr || entry->status != AclStatus::Authorized ||
        entry->identity != request.identity) {
      audit(request.node, connection_status_name(ConnectionStatus::RejectedUnauthorized));
      return ConnectionStatus::RejectedUnauthorized;
    }
  }

  if (!admitted_.contains(request.node.value) && admitted_.size() >= policy_.max_ban_size) {
    audit(request.node, connection_status_name(ConnectionStatus::RejectedBanFull));
    return ConnectionStatus::RejectedBanFull;
  }

  admitted_.insert(request.node.value);
  audit(request.node, connection_status_name(ConnectionStatus::Accepted));
  return ConnectionStatus::Accepted;
}

ConnectionStatus HubAccessControl::precheck(const AdmissionRequest& request) {
  const bool waive_suite = request.touch_secure && policy_.allow_touch_secure_level0;
  if (!waive_suite) {
    SuiteDecision suite = negotiate_suite(request.sss, policy_);
    if (suite.status != ConnectionStatus::Accepted) {
      audit(request.node, connection_status_name(suite.status));
      return suite.status;
    }
  }
  if (!admitted_.contains(request.node.value) && admitted_.size() >= policy_.max_ban_size) {
    audit(request.node, connection_status_name(ConnectionStatus::RejectedBanFull));
    return ConnectionStatus::RejectedBanFull;
  }
  if (policy_.profile == Profile::Hardened && policy_.acl_required) {
    const AclEntry* entry = acl_.lookup(request.node);
    if (entry == nullptr || entry->status != AclStatus::Authorized) {
      audit(request.node, connection_status_name(ConnectionStatus::RejectedUnauthorized));
      return ConnectionStatus::RejectedUnauthorized;
    }
  }
  return ConnectionStatus::Accepted;
}

void HubAccessControl::release(Address node) {
  admitted_.erase(node.value);
  audit(node, "Released");
}

ConnectionStatus HubAccessControl::mark_unreachable(Address node) {
  if (policy_.profile != Profile::Hardened) {
    // The baseline standard has no connection status for this case.
    return ConnectionStatus::Accepted;
  }
  admitted_.erase(node.value);
  unreachable_.push_back(node);
  audit(node, connection_status_name(ConnectionStatus::RejectedNotReachable));
  return ConnectionStatus::RejectedNotReachable;
}

Status HubAccessControl::update_acl(AclOp op, AclEntry entry, Authorization caller) {
  Address node = entry.node;
  Status s = acl_.update(op, std::move(entry), caller);
  audit(node, s.ok() ? (op == AclOp::Add ? "AclAdd" : "AclRevoke") : "AclDenied");
  return s;
}

void HubAccessControl::audit(Address node, std::string_view decision) {
  audit_.push_back(std::to_string(audit_.size()) + "," + std::to_string(node.value) + "," +
                   std::string(decision));
}

Result<Address> elect_hub(const HubPolicy& policy, Address primary,
                          const std::set<uint16_t>& alive_hubs) {
  if (policy.profile == Profile::Baseline) {
    // Single point of failure by construction.
    if (alive_hubs.contains(primary.value)) return primary;
    return Err::NetworkDown;
  }
  Address best{0};
  for (uint16_t candidate : alive_hubs) {
    bool known = candidate == primary.value;
    for (Address b : policy.backup_hubs) known = known || b.value == candidate;
    if (!known) continue;
    if (best.value == 0 || candidate < best.value) best.value = candidate;
  }
  if (best.value == 0) return Err::NetworkDown;
  return best;
}

}  // namespace bansec
