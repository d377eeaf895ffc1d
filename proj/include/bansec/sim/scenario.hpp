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

#ifndef BANSEC_SIM_SCENARIO_HPP_
#define BANSEC_SIM_SCENARIO_HPP_

#include <string>
#include <vector>

#include "bansec/frame.hpp"
#include "bansec/hub.hpp"
#include "bansec/profile.hpp"
#include "bansec/result.hpp"

namespace bansec::sim {

enum class DeviceClass : uint8_t { Invasive, SemiInvasive, Wearable, Ambient };
enum class EnergyClass : uint8_t { E1Passive, E2NonRechargeable, E3Rechargeable };
enum class MemoryClass : uint8_t { M1, M2, M3 };
enum class ComputeClass : uint8_t { C1, C2, C3 };
enum class NodeRole : uint8_t { EndNode, Relay, Coordinator };

struct NodeSpec {
  Address address;
  DeviceClass device_class = DeviceClass::Wearable;
  EnergyClass energy = EnergyClass::E2NonRechargeable;
  int64_t capacity_units = 10000;
  int64_t recharge_units_per_tick = 0;  // E3 only
  MemoryClass memory = MemoryClass::M2;
  ComputeClass compute = ComputeClass::C2;
  NodeRole role = NodeRole::EndNode;
  bool display = false;
  bool link_touch_secure = false;  // the node's ingress link is secure by physics
  Address parent;                  // 0 = direct to hub

  bool can_compute_crypto() const { return compute != ComputeClass::C1; }
};

enum class Topology : uint8_t { T1Star, T2Tree, T3Peer };

std::string_view topology_name(Topology t);

struct TrafficFlow {
  Address src;
  Address dst;
  uint64_t period = 100;
  uint16_t payload_octets = 8;
  SecurityLevel level = SecurityLevel::Level2AuthEnc;
  uint64_t start = 0;
};

// All costs in integer subunits; 1 energy unit = 1600 subunits, which makes
// "2 + payload/16 units per tx" and "0.01 units idle per tick" exact.
struct EnergyCosts {
  static constexpr int64_t kSubunitsPerUnit = 1600;
  int64_t tx_base = 2 * kSubunitsPerUnit;
  int64_t tx_per_octet = 100;  // 1/16 unit per payload octet
  int64_t rx = 1 * kSubunitsPerUnit;
  int64_t ecdh_op = 20 * kSubunitsPerUnit;
  int64_t ccm_block = 1 * kSubunitsPerUnit;
  int64_t idle_per_tick = 16;  // 0.01 unit
  int64_t wake_processing = 5 * kSubunitsPerUnit;

  int64_t tx_cost(size_t payload) const {
    return tx_base + tx_per_octet * static_cast<int64_t>(payload);
  }
  int64_t ccm_cost(size_t payload) const {
    size_t blocks = payload == 0 ? 1 : (payload + 15) / 16;
    return ccm_block * static_cast<int64_t>(blocks);
  }
};

struct ScenarioConfig {
  std::string name;
  Topology topology = Topology::T1Star;
  Address hub_address{0xFF00};
  HubPolicy hub_policy;
  SecuritySuiteSelector suite;  // what nodes propose
  uint32_t beacon_interval = 10;
  uint32_t liveness_grace = 30;
  uint32_t hub_proc_per_tick = 64;
  uint64_t default_duration = 200;
  bool auto_associate = true;  // off for pre-association archetypes (legacy pump)
  uint64_t gtk_refresh = 0;    // ticks between group-key distributions; 0 = off
  std::vector<NodeSpec> nodes;                          // sorted by address
  std::vector<std::pair<Address, Address>> peer_links;  // T3 extra links
  std::vector<TrafficFlow> flows;
  EnergyCosts costs;

  const NodeSpec* find_node(Address a) const;
};

// Parses the line-oriented scenario text ([topology], [hub], [node.N],
// [peers], [traffic], [energy] sections) and validates it for the given
// profile: one coordinator in a star, powered-parent paths for passive nodes,
// peer-to-peer only under the hardened profile.
Result<ScenarioConfig> load_scenario(std::string_view text, Profile profile);
Result<ScenarioConfig> load_scenario_file(const std::string& path, Profile profile);

}  // namespace bansec::sim

#endif  // BANSEC_SIM_SCENARIO_HPP_
