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

#include "bansec/sim/engine.hpp"

#include <algorithm>
#include <sstream>

#include "bansec/channel.hpp"

namespace bansec::sim {

using crypto::CipherFunction;
using crypto::KeyBits;
using crypto::KeyRole;
using crypto::SymmetricKey;

namespace {

constexpr uint64_t kAssocRetryTicks = 64;
const std::string kFwdPrefix = "FWD:";

bool looks_like_handshake(const Bytes& payload) {
  return !payload.empty() && payload[0] >= 1 && payload[0] <= 3;
}

std::string payload_text(const Bytes& payload) {
  return std::string(payload.begin(), payload.end());
}

CipherFunction cipher_of(const SecuritySuiteSelector& sss) {
  return static_cast<CipherFunction>(sss.cipher);
}

}  // namespace

Simulation::LinkKey Simulation::link_key(Address a, Address b) {
  return {std::min(a.value, b.value), std::max(a.value, b.value)};
}

Simulation::Simulation(ScenarioConfig config, uint64_t seed)
    : cfg_(std::move(config)), seed_(seed), rng_(seed) {
  provision();
}

crypto::SymmetricKey Simulation::provision_mk(Address a, Address b) const {
  Bytes ctx;
  put_u16(ctx, std::min(a.value, b.value));
  put_u16(ctx, std::max(a.value, b.value));
  auto tag = crypto::cmac_tag(provision_root_, ctx);
  return *SymmetricKey::make(KeyBits::K128, tag, KeyRole::MK);
}

Bytes Simulation::provision_password(Address a, Address b) const {
  Bytes ctx = from_string("pw");
  put_u16(ctx, std::min(a.value, b.value));
  put_u16(ctx, std::max(a.value, b.value));
  return crypto::cmac_tag(provision_root_, ctx);
}

void Simulation::provision() {
  provision_root_ = *SymmetricKey::make(KeyBits::K128, rng_.split("provision").bytes(16),
                                        KeyRole::MK);
  DetRng kp_rng = rng_.split("hub-static");
  hub_static_keypair_ = *crypto::generate_keypair(kp_rng);

  std::vector<Address> hub_addresses = {cfg_.hub_address};
  for (Address b : cfg_.hub_policy.backup_hubs) hub_addresses.push_back(b);
  for (Address h : hub_addresses) {
    HubRt hub;
    hub.address = h;
    hub.access = std::make_unique<HubAccessControl>(cfg_.hub_policy);
    hubs_.emplace(h.value, std::move(hub));
  }
  active_hub_ = cfg_.hub_address;

  for (const NodeSpec& spec : cfg_.nodes) {
    NodeRt node;
    node.spec = spec;
    node.has_battery = spec.energy != EnergyClass::E1Passive;
    node.battery = node.has_battery ? spec.capacity_units * EnergyCosts::kSubunitsPerUnit : 0;
    // Stagger the first association attempts so a thousand joiners do not
    // stampede one relay link in the same tick.
    node.next_assoc_attempt = spec.address.value % 512;
    nodes_.emplace(spec.address.value, std::move(node));
  }

  // Credentials: every crypto-capable node shares a provisioned MK with every
  // hub replica (the backup is a passive copy of the primary's registry), and
  // peer-linked node pairs share a pair MK.
  const bool uses_mk = cfg_.suite.protocol == SecuritySuiteSelector::Protocol::I_PreSharedMK;
  for (auto& [addr, node] : nodes_) {
    if (!node.spec.can_compute_crypto()) continue;
    if (uses_mk) {
      for (auto& [haddr, hub] : hubs_) {
        KeyRecord rec;
        rec.key = provision_mk(Address{addr}, Address{haddr});
        rec.node = Address{addr};
        rec.hub = Address{haddr};
        rec.origin = KeyOrigin::PreShared;
        node.keys.install(rec);
        KeyRecord hub_rec = rec;
        hub.keys.install(hub_rec);
      }
    }
  }
  if (uses_mk) {
    for (const auto& [a, b] : cfg_.peer_links) {
      if (is_hub_address(a) || is_hub_address(b)) continue;
      KeyRecord rec;
      rec.key = provision_mk(a, b);
      rec.node = Address{std::min(a.value, b.value)};
      rec.hub = Address{std::max(a.value, b.value)};
      rec.origin = KeyOrigin::PreShared;
      if (auto it = nodes_.find(a.value); it != nodes_.end()) it->second.keys.install(rec);
      if (auto it = nodes_.find(b.value); it != nodes_.end()) {
        KeyRecord copy = rec;
        it->second.keys.install(copy);
      }
    }
  }

  // ACL: identities of the provisioned credentials; by-address fingerprints
  // for the passive nodes whose security is their link.
  if (cfg_.hub_policy.acl_required) {
    for (auto& [haddr, hub] : hubs_) {
      for (const auto& [addr, node] : nodes_) {
        AclEntry entry;
        entry.node = Address{addr};
        if (node.spec.can_compute_crypto() && uses_mk) {
          entry.identity =
              crypto::fingerprint(provision_mk(Address{addr}, Address{haddr}).material);
        } else {
          Bytes id;
          put_u16(id, addr);
          entry.identity = crypto::fingerprint(id);
        }
        entry.authorization = Authorization::SensorRead;
        hub.access->update_acl(AclOp::Add, entry, Authorization::Admin);
      }
    }
  }

  // Topology: star and tree links hang off the parent chain; each backup hub
  // mirrors every link the primary has.
  auto add_link = [&](Address a, Address b, bool touch) {
    LinkState& link = links_[link_key(a, b)];
    link.touch_secure = link.touch_secure || touch;
  };
  if (cfg_.topology == Topology::T3Peer) {
    for (const auto& [a, b] : cfg_.peer_links) add_link(a, b, false);
  } else {
    for (const auto& [addr, node] : nodes_) {
      Address up = node.spec.parent.is_unassigned() ? cfg_.hub_address : node.spec.parent;
      add_link(Address{addr}, up, node.spec.link_touch_secure);
      if (up == cfg_.hub_address) {
        for (Address b : cfg_.hub_policy.backup_hubs) {
          add_link(Address{addr}, b, node.spec.link_touch_secure);
        }
      }
    }
  }
}

// ---- scheduling API ----

Status Simulation::schedule_node_failure(Address node, uint64_t at_tick) {
  if (!nodes_.contains(node.value) && !hubs_.contains(node.value)) return Err::NotFound;
  events_.push_back({at_tick, 0, node, 0});
  return ok_status();
}

Status Simulation::schedule_link_jam(Address a, Address b, uint64_t from_tick,
                                     uint64_t until_tick) {
  if (!links_.contains(link_key(a, b))) return Err::NotFound;
  jams_[link_key(a, b)] = {from_tick, until_tick};
  return ok_status();
}

Status Simulation::schedule_battery_set(Address node, uint64_t at_tick, int64_t units) {
  if (!nodes_.contains(node.value)) return Err::NotFound;
  events_.push_back({at_tick, 1, node, units});
  return ok_status();
}

void Simulation::schedule_injected_frame(uint64_t at_tick, Address from, Address to,
                                         Bytes octets) {
  injections_.push_back({at_tick, from, to, std::move(octets)});
}

// ---- bookkeeping ----

void Simulation::debit(Address addr, int64_t subunits) {
  auto it = nodes_.find(addr.value);
  if (it == nodes_.end() || !it->second.has_battery || !it->second.alive) return;
  NodeRt& node = it->second;
  node.battery -= subunits;
  if (node.battery <= 0) {
    node.battery = 0;
    node.alive = false;
    node.died_at = tick_;
    record(tick_, addr, addr, FrameType::Control, SecurityLevel::Level0Unsecured, "Died",
           "BatteryEmpty");
  }
}

void Simulation::record(uint64_t tick, Address src, Address dst, FrameType type,
                        SecurityLevel level, std::string_view outcome, std::string_view reason) {
  std::ostringstream row;
  row << tick << ',' << src.value << ',' << dst.value << ',' << frame_type_name(type) << ','
      << level_name(level) << ',' << outcome << ',' << reason;
  trace_.push_back(row.str());
}

void Simulation::reject_frame(DiscardReason reason) { rejected_[reason]++; }

void Simulation::emit_fsm(Address node, SecurityState from, FsmEvent event, const Transition& t) {
  std::ostringstream row;
  row << "t=" << tick_ << " node=" << node.value << " " << state_name(from) << "->"
      << state_name(t.next) << " event=" << event_name(event);
  fsm_log_.push_back(row.str());
}

void Simulation::apply_fsm_event(NodeRt& node, FsmEvent event) {
  Transition t = handle_event(node.state, event, cfg_.hub_policy.profile);
  emit_fsm(node.spec.address, node.state, event, t);
  if (t.action == FsmAction::EraseKeys) {
    // Only the session keys with the hub this association was bound to; the
    // provisioned credentials for other hub replicas stay usable.
    Address bound = node.associated_hub.is_unassigned() ? active_hub_ : node.associated_hub;
    node.keys.erase_pair(node.spec.address, bound);
    node.sessions.erase(bound.value);
    node.admitted = false;
    node.associated_hub = Address{0};
  }
  node.state = t.next;
}

// ---- session configs ----

SessionConfig Simulation::node_session_config(const NodeRt& node, Address peer) const {
  SessionConfig cfg;
  cfg.sss = cfg_.suite;
  const Address self = node.spec.address;
  switch (cfg_.suite.protocol) {
    case SecuritySuiteSelector::Protocol::I_PreSharedMK: {
      const KeyRecord* mk = node.keys.find_active(KeyRole::MK, self, peer);
      if (mk == nullptr) mk = node.keys.find_active(KeyRole::MK, peer, self);
      if (mk == nullptr) {
        mk = node.keys.find_active(KeyRole::MK, Address{std::min(self.value, peer.value)},
                                   Address{std::max(self.value, peer.value)});
      }
      if (mk != nullptr) cfg.pre_shared_mk = mk->key;
      break;
    }
    case SecuritySuiteSelector::Protocol::III_PublicKeyHidden:
      cfg.peer_public = hub_static_keypair_.public_point;
      break;
    case SecuritySuiteSelector::Protocol::IV_PasswordAuthenticated:
      cfg.password = provision_password(self, peer);
      break;
    case SecuritySuiteSelector::Protocol::V_DisplayAuthenticated:
      cfg.display = node.spec.display;
      break;
    default:
      break;
  }
  return cfg;
}

SessionConfig Simulation::hub_session_config(const HubRt& hub, Address node_addr,
                                             SecuritySuiteSelector::Protocol protocol) const {
  SessionConfig cfg;
  cfg.sss = cfg_.suite;
  cfg.sss.protocol = protocol;
  switch (protocol) {
    case SecuritySuiteSelector::Protocol::I_PreSharedMK: {
      const KeyRecord* mk = hub.keys.find_active(KeyRole::MK, node_addr, hub.address);
      if (mk != nullptr) {
        cfg.pre_shared_mk = mk->key;
      } else {
        // No shared credential: the association will fail authentication,
        // exactly as it should for a stranger.
        Bytes junk = from_string("no-mk");
        put_u16(junk, node_addr.value);
        cfg.pre_shared_mk =
            *SymmetricKey::make(KeyBits::K128, crypto::cmac_tag(provision_root_, junk),
                                KeyRole::MK);
      }
      break;
    }
    case SecuritySuiteSelector::Protocol::III_PublicKeyHidden:
      cfg.own_static_keypair = hub_static_keypair_;
      break;
    case SecuritySuiteSelector::Protocol::IV_PasswordAuthenticated:
      cfg.password = provision_password(node_addr, hub.address);
      break;
    case SecuritySuiteSelector::Protocol::V_DisplayAuthenticated:
      cfg.display = true;  // the hub side always has one
      break;
    default:
      break;
  }
  return cfg;
}

// ---- frame movement ----

Address Simulation::next_hop(Address from, Address to) const {
  if (cfg_.topology == Topology::T3Peer) {
    return links_.contains(link_key(from, to)) ? to : Address{0};
  }
  if (links_.contains(link_key(from, to))) return to;
  if (is_hub_address(from)) {
    // Downlink: route through the destination's relay.
    const NodeSpec* dest = cfg_.find_node(to);
    if (dest == nullptr || dest->parent.is_unassigned()) return Address{0};
    return dest->parent;
  }
  const NodeSpec* self = cfg_.find_node(from);
  if (self == nullptr) return Address{0};
  // Uplink or cross traffic: toward the hub side.
  return self->parent.is_unassigned() ? active_hub_ : self->parent;
}

void Simulation::send_frame(Address from, Address to, const Bytes& octets) {
  Address hop = next_hop(from, to);
  if (hop.is_unassigned()) {
    auto decoded = decode_frame(octets);
    if (decoded.ok()) {
      record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "NoRoute");
    }
    reject_frame(DiscardReason::NoRoute);
    return;
  }
  LinkState& link = links_[link_key(from, hop)];
  bool ab = from.value == link_key(from, hop).first;
  (ab ? link.queue_ab : link.queue_ba).push_back(octets);
}

void Simulation::deliver(Address from, Address to, const Bytes& octets, bool injected) {
  if (observer_) {
    auto it = links_.find(link_key(from, to));
    bool touch = it != links_.end() && it->second.touch_secure;
    observer_(tick_, from, to, touch, octets);
  }

  auto decoded = decode_frame(octets);

  if (is_hub_address(to)) {
    HubRt& hub = hubs_.at(to.value);
    if (!hub.alive) {
      if (decoded.ok()) {
        record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "PeerDead");
      }
      reject_frame(DiscardReason::PeerDead);
      return;
    }
    const HubPolicy& policy = hub.access->policy();
    if (policy.rate_limit > 0) {
      if (++hub.rx_this_tick[from.value] > policy.rate_limit) {
        reject_frame(DiscardReason::RateLimited);
        if (decoded.ok()) {
          record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "RateLimited");
        }
        return;
      }
    }
    if (++hub.proc_used > cfg_.hub_proc_per_tick) {
      reject_frame(DiscardReason::HubBusy);
      if (decoded.ok()) {
        record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "HubBusy");
      }
      return;
    }
    if (!decoded.ok()) {
      reject_frame(DiscardReason::BadMic);
      record(tick_, from, to, FrameType::Data, SecurityLevel::Level0Unsecured, "Discarded",
             "Malformed");
      return;
    }
    hub_receive(hub, from, *decoded, octets, injected);
    return;
  }

  auto node_it = nodes_.find(to.value);
  if (node_it == nodes_.end()) {
    reject_frame(DiscardReason::NoRoute);
    return;
  }
  NodeRt& node = node_it->second;
  if (!node.alive) {
    if (decoded.ok()) {
      record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "PeerDead");
    }
    reject_frame(DiscardReason::PeerDead);
    return;
  }
  const HubPolicy policy = cfg_.hub_policy.normalized();
  if (policy.rate_limit > 0) {
    // The hardened MAC filter drops excess frames before they wake anything,
    // so they cost the victim nothing.
    if (++node.rx_this_tick[from.value] > policy.rate_limit) {
      reject_frame(DiscardReason::RateLimited);
      if (decoded.ok()) {
        record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "RateLimited");
      }
      return;
    }
  }
  debit(to, cfg_.costs.rx);
  if (decoded.ok() && decoded->frame_type == FrameType::WakeUp) {
    debit(to, cfg_.costs.wake_processing);
  }
  if (!nodes_.at(to.value).alive) {
    // The receive itself emptied the battery.
    return;
  }
  if (!decoded.ok()) {
    reject_frame(DiscardReason::BadMic);
    record(tick_, from, to, FrameType::Data, SecurityLevel::Level0Unsecured, "Discarded",
           "Malformed");
    return;
  }
  node_receive(node, from, *decoded, octets, injected);
}

// ---- node behavior ----

void Simulation::start_association(NodeRt& node) {
  HubRt* hub = hubs_.contains(active_hub_.value) ? &hubs_.at(active_hub_.value) : nullptr;
  if (hub == nullptr || !hub->alive) return;

  if (!node.spec.can_compute_crypto()) {
    Frame join;
    join.sender = node.spec.address;
    join.recipient = active_hub_;
    join.frame_type = FrameType::Management;
    join.level = SecurityLevel::Level0Unsecured;
    join.payload = from_string("JOIN");
    auto octets = encode_frame(join);
    if (octets.ok()) send_frame(node.spec.address, active_hub_, *octets);
    node.next_assoc_attempt = tick_ + kAssocRetryTicks;
    return;
  }

  DetRng session_rng = rng_.split(node.spec.address.value).split(tick_);
  auto session = ProtocolSession::create(Role::Initiator, cfg_.suite.protocol,
                                         node.spec.address, active_hub_,
                                         node_session_config(node, active_hub_), session_rng);
  if (!session) return;  // missing credential; nothing to transmit
  if (cfg_.suite.protocol != SecuritySuiteSelector::Protocol::I_PreSharedMK) {
    debit(node.spec.address, cfg_.costs.ecdh_op);  // ephemeral key generation
  }
  auto& slot = node.sessions[active_hub_.value];
  slot = std::make_unique<ProtocolSession>(std::move(*session));
  auto msgs = slot->advance(std::nullopt);
  for (const auto& m : msgs) {
    Frame f;
    f.sender = node.spec.address;
    f.recipient = active_hub_;
    f.frame_type = FrameType::Management;
    f.level = SecurityLevel::Level0Unsecured;
    f.payload = m.serialize();
    auto octets = encode_frame(f);
    if (octets.ok()) send_frame(node.spec.address, active_hub_, *octets);
  }
  node.next_assoc_attempt = tick_ + kAssocRetryTicks;
}

void Simulation::start_peer_association(NodeRt& node, Address peer) {
  DetRng session_rng = rng_.split(node.spec.address.value).split(peer.value).split(tick_);
  auto session = ProtocolSession::create(Role::Initiator, cfg_.suite.protocol,
                                         node.spec.address, peer,
                                         node_session_config(node, peer), session_rng);
  if (!session) return;
  if (cfg_.suite.protocol != SecuritySuiteSelector::Protocol::I_PreSharedMK) {
    debit(node.spec.address, cfg_.costs.ecdh_op);
  }
  auto& slot = node.sessions[peer.value];
  slot = std::make_unique<ProtocolSession>(std::move(*session));
  auto msgs = slot->advance(std::nullopt);
  for (const auto& m : msgs) {
    Frame f;
    f.sender = node.spec.address;
    f.recipient = peer;
    f.frame_type = FrameType::Management;
    f.level = SecurityLevel::Level0Unsecured;
    f.payload = m.serialize();
    auto octets = encode_frame(f);
    if (octets.ok()) send_frame(node.spec.address, peer, *octets);
  }
}

void Simulation::send_flow_frame(KeyStore& keys, Address src, Address dst,
                                 const TrafficFlow& flow, bool budgeted) {
  Bytes payload(flow.payload_octets, static_cast<uint8_t>(flow.src.value & 0xFF));

  if (flow.level == SecurityLevel::Level0Unsecured) {
    Frame f;
    f.sender = src;
    f.recipient = dst;
    f.frame_type = FrameType::Data;
    f.level = flow.level;
    f.payload = payload;
    auto octets = encode_frame(f);
    if (octets.ok()) send_frame(src, dst, *octets);
    return;
  }

  KeyRecord* ptk = keys.find_active(KeyRole::PTK, src, dst);
  if (ptk == nullptr) ptk = keys.find_active(KeyRole::PTK, dst, src);
  if (ptk == nullptr) return;  // not yet secured; the schedule just misses
  auto sealed = seal_frame(*ptk, cipher_of(cfg_.suite), FrameType::Data, flow.level, src, dst,
                           payload);
  if (!sealed) return;
  auto octets = encode_frame(*sealed);
  if (!octets.ok()) return;
  if (budgeted) debit(src, cfg_.costs.ccm_cost(payload.size()));
  send_frame(src, dst, *octets);
}

void Simulation::node_tick(NodeRt& node) {
  if (!node.alive) return;

  // Hardened liveness: a hub that stopped beaconing is unreachable.
  if (cfg_.hub_policy.profile == Profile::Hardened && node.state != SecurityState::Orphan) {
    uint64_t silent = tick_ - node.last_beacon;
    if (silent > cfg_.liveness_grace + cfg_.beacon_interval) {
      apply_fsm_event(node, FsmEvent::PeerUnreachable);
      node.next_assoc_attempt = tick_ + 1;
    }
  }

  if (cfg_.auto_associate && node.state == SecurityState::Orphan && !node.gave_up &&
      tick_ >= node.next_assoc_attempt) {
    start_association(node);
  }

  // Pairwise association across declared peer links: the lower address
  // initiates once it is connected to the hub.
  if (cfg_.topology == Topology::T3Peer && node.state == SecurityState::Connected &&
      node.spec.can_compute_crypto()) {
    for (const auto& [a, b] : cfg_.peer_links) {
      Address self = node.spec.address;
      if (a != self && b != self) continue;
      Address peer = a == self ? b : a;
      if (is_hub_address(peer) || self.value > peer.value) continue;
      bool have_ptk = node.keys.find_active(KeyRole::PTK, self, peer) != nullptr ||
                      node.keys.find_active(KeyRole::PTK, peer, self) != nullptr;
      if (have_ptk || node.sessions.contains(peer.value)) continue;
      auto peer_it = nodes_.find(peer.value);
      if (peer_it == nodes_.end() || peer_it->second.state != SecurityState::Connected) continue;
      start_peer_association(node, peer);
    }
  }

  for (const TrafficFlow& flow : cfg_.flows) {
    if (flow.src != node.spec.address) continue;
    if (tick_ < flow.start || (tick_ - flow.start) % flow.period != 0) continue;
    Address dst = flow.dst == cfg_.hub_address ? active_hub_ : flow.dst;
    send_flow_frame(node.keys, node.spec.address, dst, flow, /*budgeted=*/true);
  }
}

void Simulation::hub_flows() {
  auto it = hubs_.find(active_hub_.value);
  if (it == hubs_.end() || !it->second.alive) return;
  for (const TrafficFlow& flow : cfg_.flows) {
    if (flow.src != cfg_.hub_address) continue;
    if (tick_ < flow.start || (tick_ - flow.start) % flow.period != 0) continue;
    send_flow_frame(it->second.keys, active_hub_, flow.dst, flow, /*budgeted=*/false);
  }
}

// ---- receive paths ----

void Simulation::node_receive(NodeRt& node, Address from, const Frame& frame, const Bytes& octets,
                              bool injected) {
  const Address self = node.spec.address;

  // Relay duty: anything not addressed to me moves along the tree.
  if (frame.recipient != self) {
    if (node.spec.role != NodeRole::Relay) {
      record(tick_, from, self, frame.frame_type, frame.level, "Dropped", "NoRoute");
      reject_frame(DiscardReason::NoRoute);
      return;
    }
    bool ingress_touch = false;
    if (auto it = links_.find(link_key(from, self)); it != links_.end()) {
      ingress_touch = it->second.touch_secure;
    }
    if (ingress_touch && frame.level == SecurityLevel::Level0Unsecured &&
        is_hub_address(frame.recipient)) {
      // Wrap the physically-secured ingress frame before it crosses RF.
      KeyRecord* ptk = node.keys.find_active(KeyRole::PTK, self, frame.recipient);
      if (ptk == nullptr) {
        record(tick_, from, self, frame.frame_type, frame.level, "Dropped", "NoKeys");
        reject_frame(DiscardReason::NoKeys);
        return;
      }
      Bytes payload = from_string(kFwdPrefix);
      payload.push_back(1);  // ingress was touch-secure
      append(payload, octets);
      auto wrapped = seal_frame(*ptk, cipher_of(cfg_.suite), FrameType::Management,
                                SecurityLevel::Level2AuthEnc, self, frame.recipient, payload, 16);
      if (!wrapped) return;
      auto wire = encode_frame(*wrapped);
      if (!wire.ok()) return;
      record(tick_, from, self, frame.frame_type, frame.level, "Forwarded", "Wrapped");
      send_frame(self, frame.recipient, *wire);
      return;
    }
    record(tick_, from, self, frame.frame_type, frame.level, "Forwarded", "None");
    send_frame(self, frame.recipient, octets);
    return;
  }

  if (frame.frame_type == FrameType::WakeUp) {
    record(tick_, from, self, frame.frame_type, frame.level, "Delivered", "WakeProcessing");
    return;
  }

  // Hub-side management plane.
  if (frame.frame_type == FrameType::Management &&
      frame.level == SecurityLevel::Level0Unsecured) {
    // Frames are end-to-end; `from` is only the last hop.
    const Address origin = frame.sender;
    std::string text = payload_text(frame.payload);
    if (text == "CONNECT") {
      // Plain connection grant for nodes that cannot open sealed frames.
      if (!node.spec.can_compute_crypto()) {
        node.associated_hub = origin;
        node.last_beacon = tick_;
        apply_fsm_event(node, FsmEvent::AssocSuccess);
        // The touch-secure channel stands in for the PTK (link security by
        // physics), so the node proceeds through the secured stage.
        apply_fsm_event(node, FsmEvent::PtkEstablished);
        apply_fsm_event(node, FsmEvent::ConnectionAssigned);
        node.admitted = true;
        record(tick_, origin, self, frame.frame_type, frame.level, "Delivered", "None");
      }
      return;
    }
    if (text.starts_with("REJECT:")) {
      node.sessions.erase(origin.value);
      apply_fsm_event(node, FsmEvent::AssocAborted);
      node.gave_up = true;
      record(tick_, origin, self, frame.frame_type, frame.level, "Delivered", text.substr(7));
      return;
    }
    if (looks_like_handshake(frame.payload) && node.spec.can_compute_crypto()) {
      auto msg = HandshakeMsg::parse(frame.payload);
      if (!msg.ok()) {
        reject_frame(DiscardReason::BadMic);
        return;
      }
      const bool from_hub = is_hub_address(origin);
      if (msg->kind == HandshakeMsg::Kind::Request && !from_hub) {
        // Pairwise association: the lower address initiates, we respond.
        DetRng session_rng = rng_.split(self.value).split(origin.value).split(tick_);
        auto session = ProtocolSession::create(Role::Responder, cfg_.suite.protocol, self,
                                               origin, node_session_config(node, origin),
                                               session_rng);
        if (!session) return;
        node.sessions[origin.value] = std::make_unique<ProtocolSession>(std::move(*session));
        if (cfg_.suite.protocol != SecuritySuiteSelector::Protocol::I_PreSharedMK) {
          debit(self, 2 * cfg_.costs.ecdh_op);  // key generation + shared secret
        }
      }
      auto session_it = node.sessions.find(origin.value);
      if (session_it == node.sessions.end()) return;
      ProtocolSession& session = *session_it->second;
      record(tick_, origin, self, frame.frame_type, frame.level, "Delivered", "Handshake");
      auto out = session.advance(*msg);
      if (msg->kind == HandshakeMsg::Kind::Response &&
          cfg_.suite.protocol != SecuritySuiteSelector::Protocol::I_PreSharedMK) {
        debit(self, cfg_.costs.ecdh_op);  // shared-secret derivation
      }
      for (const auto& m : out) {
        Frame f;
        f.sender = self;
        f.recipient = origin;
        f.frame_type = FrameType::Management;
        f.level = SecurityLevel::Level0Unsecured;
        f.payload = m.serialize();
        auto wire = encode_frame(f);
        if (wire.ok()) send_frame(self, origin, *wire);
      }
      if (session.phase() == Phase::Activated) {
        const auto& result = session.result();
        KeyRecord mk;
        mk.key = result->mk;
        mk.node = session.role() == Role::Initiator ? self : origin;
        mk.hub = session.role() == Role::Initiator ? origin : self;
        mk.origin = static_cast<KeyOrigin>(static_cast<int>(cfg_.suite.protocol));
        node.keys.install(mk, /*replace=*/true);
        const Bytes& ni = session.role() == Role::Initiator ? session.own_nonce()
                                                            : session.peer_nonce();
        const Bytes& nr = session.role() == Role::Initiator ? session.peer_nonce()
                                                            : session.own_nonce();
        node.keys.rotate_ptk(mk.node, mk.hub, ni, nr,
                             cipher_of(cfg_.suite) == CipherFunction::Aes256Ccm
                                 ? KeyBits::K256
                                 : KeyBits::K128);
        if (from_hub) {
          node.associated_hub = origin;
          node.last_beacon = tick_;  // the handshake itself proves liveness
          apply_fsm_event(node, FsmEvent::AssocSuccess);
          apply_fsm_event(node, FsmEvent::PtkEstablished);
        }
        node.sessions.erase(session_it);
      } else if (session.phase() == Phase::Aborted) {
        if (from_hub) apply_fsm_event(node, FsmEvent::AssocAborted);
        node.sessions.erase(session_it);
        node.next_assoc_attempt = tick_ + kAssocRetryTicks;
      }
      return;
    }
    record(tick_, from, self, frame.frame_type, frame.level, "Discarded", "Malformed");
    reject_frame(DiscardReason::BadMic);
    return;
  }

  // Sealed management: connection assignment or erase exchange.
  if (frame.frame_type == FrameType::Management) {
    HubPolicy policy = cfg_.hub_policy;
    InboundVerdict v = accept_inbound(node.state, frame, node.keys, policy,
                                      node.spec.link_touch_secure);
    if (!v.deliver) {
      record(tick_, from, self, frame.frame_type, frame.level, "Discarded",
             discard_reason_name(v.reason));
      reject_frame(v.reason);
      return;
    }
    debit(self, cfg_.costs.ccm_cost(frame.payload.size()));
    std::string text = payload_text(v.payload);
    if (text == "CONNECT") {
      apply_fsm_event(node, FsmEvent::ConnectionAssigned);
      node.admitted = true;
    } else if (text == "ERASE") {
      node.keys.erase_pair(self, frame.sender);
      apply_fsm_event(node, FsmEvent::DisassocDone);
    } else if (is_hub_address(frame.sender)) {
      // Group-key distribution payload.
      install_gtk_from_payload(node.keys, self, frame.sender, v.payload);
    }
    record(tick_, from, self, frame.frame_type, frame.level, "Delivered", "None");
    return;
  }

  // Data plane.
  HubPolicy policy = cfg_.hub_policy;
  InboundVerdict v = accept_inbound(node.state, frame, node.keys, policy,
                                    node.spec.link_touch_secure);
  if (v.deliver) {
    if (frame.level != SecurityLevel::Level0Unsecured) {
      debit(self, cfg_.costs.ccm_cost(frame.payload.size()));
    }
    ++delivered_data_;
    if (injected) ++delivered_injected_;
    record(tick_, from, self, frame.frame_type, frame.level, "Delivered", "None");
  } else {
    record(tick_, from, self, frame.frame_type, frame.level, "Discarded",
           discard_reason_name(v.reason));
    reject_frame(v.reason);
  }
}

void Simulation::finish_hub_association(HubRt& hub, Address node_addr) {
  auto session_it = hub.sessions.find(node_addr.value);
  if (session_it == hub.sessions.end()) return;
  ProtocolSession& session = *session_it->second;
  const auto& result = session.result();
  if (!result) return;

  AdmissionRequest request;
  request.node = node_addr;
  request.sss = cfg_.suite;
  request.identity = crypto::fingerprint(result->mk.material);
  ConnectionStatus status = hub.access->admit(request);

  if (status != ConnectionStatus::Accepted) {
    Frame f;
    f.sender = hub.address;
    f.recipient = node_addr;
    f.frame_type = FrameType::Management;
    f.level = SecurityLevel::Level0Unsecured;
    f.payload = from_string(std::string("REJECT:") + std::string(connection_status_name(status)));
    auto wire = encode_frame(f);
    if (wire.ok()) send_frame(hub.address, node_addr, *wire);
    hub.sessions.erase(session_it);
    return;
  }

  KeyRecord mk;
  mk.key = result->mk;
  mk.node = node_addr;
  mk.hub = hub.address;
  mk.origin = static_cast<KeyOrigin>(static_cast<int>(cfg_.suite.protocol));
  hub.keys.install(mk, /*replace=*/true);
  const Bytes& ni = session.peer_nonce();  // node initiated
  const Bytes& nr = session.own_nonce();
  hub.keys.rotate_ptk(node_addr, hub.address, ni, nr,
                      cipher_of(cfg_.suite) == CipherFunction::Aes256Ccm ? KeyBits::K256
                                                                         : KeyBits::K128);
  hub.last_heard[node_addr.value] = tick_;

  KeyRecord* ptk = hub.keys.find_active(KeyRole::PTK, node_addr, hub.address);
  if (ptk != nullptr) {
    auto connect = seal_frame(*ptk, cipher_of(cfg_.suite), FrameType::Management,
                              SecurityLevel::Level2AuthEnc, hub.address, node_addr,
                              from_string("CONNECT"), 16);
    if (connect) {
      auto wire = encode_frame(*connect);
      if (wire.ok()) send_frame(hub.address, node_addr, *wire);
    }
  }
  hub.sessions.erase(session_it);
}

void Simulation::hub_receive(HubRt& hub, Address from, const Frame& frame, const Bytes& octets,
                             bool injected) {
  (void)octets;
  hub.last_heard[frame.sender.value] = tick_;

  if (frame.frame_type == FrameType::Management &&
      frame.level == SecurityLevel::Level0Unsecured) {
    std::string text = payload_text(frame.payload);
    if (text == "JOIN") {
      // Passive-node admission over a physically secured path only. A JOIN
      // arriving bare over RF carries no such guarantee.
      record(tick_, from, hub.address, frame.frame_type, frame.level, "Delivered", "Join");
      auto link_it = links_.find(link_key(from, hub.address));
      bool direct_touch = frame.sender == from && link_it != links_.end() &&
                          link_it->second.touch_secure;
      AdmissionRequest request;
      request.node = frame.sender;
      request.sss = cfg_.suite;
      Bytes id;
      put_u16(id, frame.sender.value);
      request.identity = crypto::fingerprint(id);
      request.touch_secure = direct_touch;
      ConnectionStatus status = hub.access->admit(request);
      Frame reply;
      reply.sender = hub.address;
      reply.recipient = frame.sender;
      reply.frame_type = FrameType::Management;
      reply.level = SecurityLevel::Level0Unsecured;
      reply.payload = status == ConnectionStatus::Accepted
                          ? from_string("CONNECT")
                          : from_string(std::string("REJECT:") +
                                        std::string(connection_status_name(status)));
      auto wire = encode_frame(reply);
      if (wire.ok()) send_frame(hub.address, frame.sender, *wire);
      return;
    }
    if (looks_like_handshake(frame.payload)) {
      auto msg = HandshakeMsg::parse(frame.payload);
      if (!msg.ok()) {
        reject_frame(DiscardReason::BadMic);
        return;
      }
      if (msg->kind == HandshakeMsg::Kind::Request) {
        AdmissionRequest request;
        request.node = frame.sender;
        request.sss = msg->sss;
        ConnectionStatus early = hub.access->precheck(request);
        if (early != ConnectionStatus::Accepted) {
          Frame reply;
          reply.sender = hub.address;
          reply.recipient = frame.sender;
          reply.frame_type = FrameType::Management;
          reply.level = SecurityLevel::Level0Unsecured;
          reply.payload = from_string(std::string("REJECT:") +
                                      std::string(connection_status_name(early)));
          auto wire = encode_frame(reply);
          if (wire.ok()) send_frame(hub.address, frame.sender, *wire);
          record(tick_, from, hub.address, frame.frame_type, frame.level, "Rejected",
                 connection_status_name(early));
          return;
        }
        DetRng session_rng = rng_.split("hub-session").split(frame.sender.value).split(tick_);
        // The hub responds in whatever (policy-approved) protocol the node
        // proposed; the baseline standard supports all five.
        auto session = ProtocolSession::create(
            Role::Responder, msg->sss.protocol, hub.address, frame.sender,
            hub_session_config(hub, frame.sender, msg->sss.protocol), session_rng);
        if (!session) return;
        hub.sessions[frame.sender.value] =
            std::make_unique<ProtocolSession>(std::move(*session));
      }
      auto session_it = hub.sessions.find(frame.sender.value);
      if (session_it == hub.sessions.end()) return;
      record(tick_, from, hub.address, frame.frame_type, frame.level, "Delivered", "Handshake");
      auto out = session_it->second->advance(*msg);
      for (const auto& m : out) {
        Frame f;
        f.sender = hub.address;
        f.recipient = frame.sender;
        f.frame_type = FrameType::Management;
        f.level = SecurityLevel::Level0Unsecured;
        f.payload = m.serialize();
        auto wire = encode_frame(f);
        if (wire.ok()) send_frame(hub.address, frame.sender, *wire);
      }
      if (session_it->second->phase() == Phase::Activated) {
        finish_hub_association(hub, frame.sender);
      } else if (session_it->second->phase() == Phase::Aborted) {
        hub.sessions.erase(session_it);
      }
      return;
    }
    record(tick_, from, hub.address, frame.frame_type, frame.level, "Discarded", "Malformed");
    reject_frame(DiscardReason::BadMic);
    return;
  }

  // Sealed or plain traffic to the hub.
  SecurityState peer_state = SecurityState::Connected;
  HubPolicy policy = hub.access->policy();
  bool touch = false;
  if (auto it = links_.find(link_key(from, hub.address)); it != links_.end()) {
    touch = it->second.touch_secure && frame.sender == from;
  }
  InboundVerdict v = accept_inbound(peer_state, frame, hub.keys, policy, touch);
  if (!v.deliver) {
    record(tick_, from, hub.address, frame.frame_type, frame.level, "Discarded",
           discard_reason_name(v.reason));
    reject_frame(v.reason);
    return;
  }

  if (frame.frame_type == FrameType::Management) {
    std::string text = payload_text(v.payload);
    if (text.starts_with(kFwdPrefix) && v.payload.size() > kFwdPrefix.size() + 1) {
      bool ingress_touch = v.payload[kFwdPrefix.size()] == 1;
      Bytes inner(v.payload.begin() + static_cast<long>(kFwdPrefix.size()) + 1,
                  v.payload.end());
      auto inner_frame = decode_frame(inner);
      if (!inner_frame.ok()) {
        reject_frame(DiscardReason::BadMic);
        return;
      }
      record(tick_, from, hub.address, inner_frame->frame_type, inner_frame->level, "Unwrapped",
             "None");
      // Re-dispatch the physically secured inner frame.
      hub.last_heard[inner_frame->sender.value] = tick_;
      if (inner_frame->frame_type == FrameType::Management &&
          payload_text(inner_frame->payload) == "JOIN") {
        AdmissionRequest request;
        request.node = inner_frame->sender;
        request.sss = cfg_.suite;
        Bytes id;
        put_u16(id, inner_frame->sender.value);
        request.identity = crypto::fingerprint(id);
        request.touch_secure = ingress_touch;
        ConnectionStatus status = hub.access->admit(request);
        Frame reply;
        reply.sender = hub.address;
        reply.recipient = inner_frame->sender;
        reply.frame_type = FrameType::Management;
        reply.level = SecurityLevel::Level0Unsecured;
        reply.payload = status == ConnectionStatus::Accepted
                            ? from_string("CONNECT")
                            : from_string(std::string("REJECT:") +
                                          std::string(connection_status_name(status)));
        auto wire = encode_frame(reply);
        if (wire.ok()) send_frame(hub.address, inner_frame->sender, *wire);
        return;
      }
      if (inner_frame->frame_type == FrameType::Data) {
        hub.last_heard[inner_frame->sender.value] = tick_;
        if (ingress_touch && policy.allow_touch_secure_level0) {
          ++delivered_data_;
          if (injected) ++delivered_injected_;
          record(tick_, inner_frame->sender, hub.address, inner_frame->frame_type,
                 inner_frame->level, "Delivered", "None");
        } else {
          record(tick_, inner_frame->sender, hub.address, inner_frame->frame_type,
                 inner_frame->level, "Discarded", "LevelViolation");
          reject_frame(DiscardReason::LevelViolation);
        }
      }
      return;
    }
    if (text == "ERASE") {
      Status handled = handle_disassociation(hub.keys, frame, policy.min_level);
      if (handled.ok()) hub.access->release(frame.sender);
      record(tick_, from, hub.address, frame.frame_type, frame.level,
             handled.ok() ? "Delivered" : "Discarded", handled.ok() ? "None" : "AuthFailure");
      return;
    }
    record(tick_, from, hub.address, frame.frame_type, frame.level, "Delivered", "None");
    return;
  }

  ++delivered_data_;
  if (injected) ++delivered_injected_;
  record(tick_, from, hub.address, frame.frame_type, frame.level, "Delivered", "None");
}

Result<ConnectionStatus> Simulation::adversary_association(
    SecuritySuiteSelector::Protocol protocol, Address fake_address, RandomSource& rng) {
  auto hub_it = hubs_.find(active_hub_.value);
  if (hub_it == hubs_.end() || !hub_it->second.alive) return Err::NetworkDown;
  HubRt& hub = hub_it->second;

  SessionConfig attacker_cfg;
  attacker_cfg.sss = cfg_.suite;
  attacker_cfg.sss.protocol = protocol;
  attacker_cfg.display = true;
  auto attacker = ProtocolSession::create(Role::Initiator, protocol, fake_address, hub.address,
                                          attacker_cfg, rng);
  if (!attacker) return Err::AuthFailure;  // no credential to even start with

  auto request = attacker->advance(std::nullopt);
  if (request.empty()) return Err::AuthFailure;

  AdmissionRequest pre;
  pre.node = fake_address;
  pre.sss = attacker_cfg.sss;
  ConnectionStatus early = hub.access->precheck(pre);
  if (early != ConnectionStatus::Accepted) return early;

  DetRng hub_rng = rng_.split("hub-session").split(fake_address.value).split(tick_);
  auto responder = ProtocolSession::create(Role::Responder, protocol, hub.address, fake_address,
                                           hub_session_config(hub, fake_address, protocol),
                                           hub_rng);
  if (!responder) return Err::AuthFailure;

  auto response = responder->advance(request[0]);
  if (response.empty()) return Err::AuthFailure;
  auto activate = attacker->advance(response[0]);
  if (activate.empty()) return Err::AuthFailure;
  responder->advance(activate[0]);
  if (responder->phase() != Phase::Activated || !responder->result()) return Err::AuthFailure;

  AdmissionRequest final_request;
  final_request.node = fake_address;
  final_request.sss = attacker_cfg.sss;
  final_request.identity = crypto::fingerprint(responder->result()->mk.material);
  return hub.access->admit(final_request);
}

// ---- the tick loop ----

void Simulation::elect_and_switch() {
  std::set<uint16_t> alive;
  for (const auto& [addr, hub] : hubs_) {
    if (hub.alive) alive.insert(addr);
  }
  auto elected = elect_hub(cfg_.hub_policy, cfg_.hub_address, alive);
  if (!elected.ok()) {
    network_down_ = true;
    return;
  }
  network_down_ = false;
  if (*elected != active_hub_) {
    active_hub_ = *elected;
    fsm_log_.push_back("t=" + std::to_string(tick_) +
                       " hub-failover active=" + std::to_string(active_hub_.value));
  }
}

void Simulation::step() {
  ++tick_;

  for (const auto& ev : events_) {
    if (ev.tick != tick_) continue;
    if (ev.kind == 0) {
      if (auto it = nodes_.find(ev.node.value); it != nodes_.end()) {
        it->second.alive = false;
        it->second.died_at = tick_;
      } else if (auto hit = hubs_.find(ev.node.value); hit != hubs_.end()) {
        hit->second.alive = false;
      }
    } else if (ev.kind == 1) {
      if (auto it = nodes_.find(ev.node.value); it != nodes_.end()) {
        it->second.battery = ev.units * EnergyCosts::kSubunitsPerUnit;
        if (it->second.battery <= 0 && it->second.has_battery) {
          it->second.battery = 0;
          it->second.alive = false;
          it->second.died_at = tick_;
        }
      }
    }
  }

  elect_and_switch();

  // Beacons reach every alive node with a live relay path. A node listens
  // for the hub it is bound to (orphans listen for the active one), so a dead
  // coordinator goes silent for its own nodes even while a backup beacons.
  HubRt* active = hubs_.contains(active_hub_.value) ? &hubs_.at(active_hub_.value) : nullptr;
  if (tick_ % cfg_.beacon_interval == 0) {
    for (auto& [addr, node] : nodes_) {
      if (!node.alive) continue;
      Address own_hub = node.associated_hub.is_unassigned() ? active_hub_ : node.associated_hub;
      auto hub_it = hubs_.find(own_hub.value);
      if (hub_it == hubs_.end() || !hub_it->second.alive) continue;
      Address up = node.spec.parent.is_unassigned() ? own_hub : node.spec.parent;
      bool path_alive = true;
      int hops = 0;
      while (!is_hub_address(up)) {
        auto it = nodes_.find(up.value);
        if (it == nodes_.end() || !it->second.alive || ++hops > 16) {
          path_alive = false;
          break;
        }
        up = it->second.spec.parent.is_unassigned() ? own_hub : it->second.spec.parent;
      }
      if (path_alive) node.last_beacon = tick_;
    }
  }

  for (auto& [addr, node] : nodes_) node_tick(node);
  hub_flows();

  // Periodic group-key distribution (protocol VI): the hub re-keys every
  // connected crypto-capable member over its unicast channel.
  if (cfg_.gtk_refresh > 0 && tick_ % cfg_.gtk_refresh == 0) {
    if (auto it = hubs_.find(active_hub_.value); it != hubs_.end() && it->second.alive) {
      HubRt& hub = it->second;
      std::vector<Address> members;
      for (const auto& [addr, node] : nodes_) {
        if (node.alive && node.spec.can_compute_crypto() &&
            hub.access->is_admitted(Address{addr}) &&
            hub.keys.find_active(KeyRole::PTK, Address{addr}, hub.address) != nullptr) {
          members.push_back(Address{addr});
        }
      }
      DetRng gtk_rng = rng_.split("gtk").split(tick_);
      auto dist = distribute_gtk(hub.keys, hub.address, members, /*group_id=*/1, gtk_rng);
      if (dist.ok()) {
        for (const Frame& f : dist->frames) {
          auto wire = encode_frame(f);
          if (wire.ok()) send_frame(hub.address, f.recipient, *wire);
        }
      }
    }
  }

  // Adversary transmissions ignore the polite one-frame-per-tick budget.
  for (const auto& inj : injections_) {
    if (inj.tick == tick_) deliver(inj.from, inj.to, inj.octets, /*injected=*/true);
  }

  // Link deliveries: one frame per direction per tick, links in sorted order.
  for (auto& [key, link] : links_) {
    bool jammed = false;
    if (auto jam = jams_.find(key); jam != jams_.end()) {
      jammed = tick_ >= jam->second.first && tick_ < jam->second.second;
    }
    for (int dir = 0; dir < 2; ++dir) {
      auto& queue = dir == 0 ? link.queue_ab : link.queue_ba;
      if (queue.empty()) continue;
      Address from{dir == 0 ? key.first : key.second};
      Address to{dir == 0 ? key.second : key.first};
      Bytes octets = std::move(queue.front());
      queue.pop_front();

      // The transmitter must be alive (and powered, for passive devices).
      bool can_tx = true;
      if (auto it = nodes_.find(from.value); it != nodes_.end()) {
        can_tx = it->second.alive;
        if (can_tx && it->second.spec.energy == EnergyClass::E1Passive) {
          Address up = it->second.spec.parent.is_unassigned() ? active_hub_
                                                              : it->second.spec.parent;
          int hops = 0;
          while (can_tx && !is_hub_address(up)) {
            auto pit = nodes_.find(up.value);
            if (pit == nodes_.end() || !pit->second.alive || ++hops > 16) can_tx = false;
            else up = pit->second.spec.parent.is_unassigned() ? active_hub_
                                                              : pit->second.spec.parent;
          }
          if (can_tx && !hubs_.at(is_hub_address(up) ? up.value : active_hub_.value).alive) {
            can_tx = false;
          }
        }
      } else if (auto hit = hubs_.find(from.value); hit != hubs_.end()) {
        can_tx = hit->second.alive;
      }
      if (!can_tx) {
        reject_frame(DiscardReason::PeerDead);
        continue;
      }
      debit(from, cfg_.costs.tx_cost(octets.size() > kHeaderOctets
                                         ? octets.size() - kHeaderOctets
                                         : 0));
      if (jammed) {
        auto decoded = decode_frame(octets);
        if (decoded.ok()) {
          record(tick_, from, to, decoded->frame_type, decoded->level, "Dropped", "Jammed");
        }
        reject_frame(DiscardReason::Jammed);
        continue;
      }
      deliver(from, to, octets, /*injected=*/false);
    }
  }

  // Hardened hub scans for admitted nodes that fell silent past their
  // schedule.
  if (cfg_.hub_policy.profile == Profile::Hardened && active != nullptr && active->alive) {
    for (const auto& [addr, node] : nodes_) {
      if (!active->access->is_admitted(Address{addr})) continue;
      uint64_t min_period = 0;
      uint64_t flow_start = 0;
      for (const auto& flow : cfg_.flows) {
        if (flow.src != Address{addr}) continue;
        if (min_period == 0 || flow.period < min_period) {
          min_period = flow.period;
          flow_start = flow.start;
        }
      }
      if (min_period == 0) continue;  // nothing scheduled, nothing expected
      uint64_t heard = 0;
      if (auto it = active->last_heard.find(addr); it != active->last_heard.end()) {
        heard = it->second;
      }
      uint64_t reference = std::max(heard, flow_start);
      if (tick_ > reference && tick_ - reference > min_period + cfg_.liveness_grace) {
        active->access->mark_unreachable(Address{addr});
      }
    }
  }

  // Idle drain, recharge, housekeeping.
  for (auto& [addr, node] : nodes_) {
    node.rx_this_tick.clear();
    if (!node.alive || !node.has_battery) continue;
    debit(Address{addr}, cfg_.costs.idle_per_tick);
    if (node.alive && node.spec.energy == EnergyClass::E3Rechargeable) {
      node.battery = std::min(node.battery + node.spec.recharge_units_per_tick *
                                                 EnergyCosts::kSubunitsPerUnit,
                              node.spec.capacity_units * EnergyCosts::kSubunitsPerUnit);
    }
  }
  for (auto& [addr, hub] : hubs_) {
    hub.proc_used = 0;
    hub.rx_this_tick.clear();
  }
}

void Simulation::run_until(uint64_t end_tick) {
  while (tick_ < end_tick) step();
}

// ---- observation ----

uint64_t Simulation::rejected_frames(DiscardReason reason) const {
  auto it = rejected_.find(reason);
  return it == rejected_.end() ? 0 : it->second;
}

uint64_t Simulation::rejected_frames_total() const {
  uint64_t total = 0;
  for (const auto& [reason, count] : rejected_) total += count;
  return total;
}

Result<int64_t> Simulation::battery_subunits(Address node) const {
  auto it = nodes_.find(node.value);
  if (it == nodes_.end()) return Err::NotFound;
  if (!it->second.has_battery) return Err::Usage;  // passive device
  return it->second.battery;
}

Result<SecurityState> Simulation::node_state(Address node) const {
  auto it = nodes_.find(node.value);
  if (it == nodes_.end()) return Err::NotFound;
  return it->second.state;
}

std::optional<uint64_t> Simulation::death_tick(Address node) const {
  auto it = nodes_.find(node.value);
  if (it == nodes_.end()) return std::nullopt;
  return it->second.died_at;
}

size_t Simulation::admitted_count() const {
  auto it = hubs_.find(active_hub_.value);
  return it == hubs_.end() ? 0 : it->second.access->admitted_count();
}

const HubAccessControl* Simulation::hub_access(Address hub) const {
  auto it = hubs_.find(hub.value);
  return it == hubs_.end() ? nullptr : it->second.access.get();
}

std::vector<Address> Simulation::unreachable_report() const {
  const HubAccessControl* access = hub_access(active_hub_);
  return access == nullptr ? std::vector<Address>{} : access->unreachable_report();
}

Result<int64_t> Simulation::observe(const std::string& metric) const {
  if (metric == "delivered_frames") return static_cast<int64_t>(delivered_data_);
  if (metric == "admitted_count") return static_cast<int64_t>(admitted_count());
  auto colon = metric.find(':');
  if (colon != std::string::npos) {
    std::string kind = metric.substr(0, colon);
    std::string arg = metric.substr(colon + 1);
    if (kind == "rejected_frames") {
      for (int r = 0; r <= static_cast<int>(DiscardReason::NoRoute); ++r) {
        if (discard_reason_name(static_cast<DiscardReason>(r)) == arg) {
          return static_cast<int64_t>(rejected_frames(static_cast<DiscardReason>(r)));
        }
      }
      return Err::Usage;
    }
    if (kind == "battery") {
      try {
        return battery_subunits(Address{static_cast<uint16_t>(std::stoul(arg))});
      } catch (...) {
        return Err::Usage;
      }
    }
    if (kind == "state") {
      try {
        auto s = node_state(Address{static_cast<uint16_t>(std::stoul(arg))});
        if (!s) return s.error();
        return static_cast<int64_t>(*s);
      } catch (...) {
        return Err::Usage;
      }
    }
  }
  return Err::Usage;
}

}  // namespace bansec::sim
