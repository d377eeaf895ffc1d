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

#include "bansec/sim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace bansec::sim {

std::string_view topology_name(Topology t) {
  switch (t) {
    case Topology::T1Star: return "T1";
    case Topology::T2Tree: return "T2";
    case Topology::T3Peer: return "T3";
  }
  return "?";
}

const NodeSpec* ScenarioConfig::find_node(Address a) const {
  for (const auto& n : nodes) {
    if (n.address == a) return &n;
  }
  return nullptr;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

Result<uint64_t> parse_number(const std::string& s) {
  try {
    if (s.starts_with("0x") || s.starts_with("0X")) return std::stoull(s.substr(2), nullptr, 16);
    return std::stoull(s);
  } catch (...) {
    return Err::Config;
  }
}

Result<Address> parse_address(const std::string& s, Address hub) {
  if (s == "hub") return hub;
  auto n = parse_number(s);
  if (!n || *n > 0xFFFF) return Err::Config;
  return Address{static_cast<uint16_t>(*n)};
}

// flow = SRC -> DST : period=N len=N level=N start=N
Result<TrafficFlow> parse_flow(const std::string& value, Address hub) {
  std::string s = value;
  size_t arrow = s.find("->");
  size_t colon = s.find(':');
  if (arrow == std::string::npos || colon == std::string::npos || colon < arrow) {
    return Err::Config;
  }
  auto src = parse_address(trim(s.substr(0, arrow)), hub);
  auto dst = parse_address(trim(s.substr(arrow + 2, colon - arrow - 2)), hub);
  if (!src || !dst) return Err::Config;
  TrafficFlow flow;
  flow.src = *src;
  flow.dst = *dst;
  std::istringstream rest(s.substr(colon + 1));
  std::string kv;
  while (rest >> kv) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) return Err::Config;
    std::string key = kv.substr(0, eq);
    auto num = parse_number(kv.substr(eq + 1));
    if (!num) return Err::Config;
    if (key == "period") flow.period = *num;
    else if (key == "len") flow.payload_octets = static_cast<uint16_t>(*num);
    else if (key == "level") flow.level = static_cast<SecurityLevel>(*num);
    else if (key == "start") flow.start = *num;
    else return Err::Config;
  }
  if (flow.period == 0 || flow.payload_octets > kMaxPayloadOctets) return Err::Config;
  if (flow.level > SecurityLevel::Level2AuthEnc) return Err::Config;
  return flow;
}

struct NodeBlock {
  uint16_t base_address = 0;
  uint32_t count = 1;
  std::map<std::string, std::string> kv;
};

Result<NodeSpec> node_from_block(const NodeBlock& block, uint16_t offset, Address hub) {
  NodeSpec n;
  n.address.value = static_cast<uint16_t>(block.base_address + offset);
  for (const auto& [key, value] : block.kv) {
    if (key == "class") {
      if (value == "invasive") n.device_class = DeviceClass::Invasive;
      else if (value == "semiinvasive") n.device_class = DeviceClass::SemiInvasive;
      else if (value == "wearable") n.device_class = DeviceClass::Wearable;
      else if (value == "ambient") n.device_class = DeviceClass::Ambient;
      else return Err::Config;
    } else if (key == "energy") {
      // E1 | E2:capacity | E3:capacity:recharge
      std::istringstream es(value);
      std::string kind, cap, rate;
      std::getline(es, kind, ':');
      std::getline(es, cap, ':');
      std::getline(es, rate, ':');
      if (kind == "E1") {
        n.energy = EnergyClass::E1Passive;
      } else if (kind == "E2" || kind == "E3") {
        n.energy = kind == "E2" ? EnergyClass::E2NonRechargeable : EnergyClass::E3Rechargeable;
        if (!cap.empty()) {
          auto c = parse_number(cap);
          if (!c) return Err::Config;
          n.capacity_units = static_cast<int64_t>(*c);
        }
        if (kind == "E3" && !rate.empty()) {
          auto r = parse_number(rate);
          if (!r) return Err::Config;
          n.recharge_units_per_tick = static_cast<int64_t>(*r);
        }
      } else {
        return Err::Config;
      }
    } else if (key == "memory") {
      if (value == "M1") n.memory = MemoryClass::M1;
      else if (value == "M2") n.memory = MemoryClass::M2;
      else if (value == "M3") n.memory = MemoryClass::M3;
      else return Err::Config;
    } else if (key == "compute") {
      if (value == "C1") n.compute = ComputeClass::C1;
      else if (value == "C2") n.compute = ComputeClass::C2;
      else if (value == "C3") n.compute = ComputeClass::C3;
      else return Err::Config;
    } else if (key == "role") {
      if (value == "end") n.role = NodeRole::EndNode;
      else if (value == "relay") n.role = NodeRole::Relay;
      else if (value == "coordinator") n.role = NodeRole::Coordinator;
      else return Err::Config;
    } else if (key == "parent") {
      auto p = parse_address(value, hub);
      if (!p) return Err::Config;
      n.parent = *p;
    } else if (key == "touch_secure") {
      n.link_touch_secure = value == "true" || value == "1";
    } else if (key == "display") {
      n.display = value == "true" || value == "1";
    } else if (key != "count") {
      return Err::Config;
    }
  }
  return n;
}

}  // namespace

Result<ScenarioConfig> load_scenario(std::string_view text, Profile profile) {
  ScenarioConfig cfg;
  cfg.hub_policy.profile = profile;
  cfg.suite.level = SecurityLevel::Level2AuthEnc;
  cfg.suite.protocol = SecuritySuiteSelector::Protocol::I_PreSharedMK;

  std::vector<NodeBlock> node_blocks;
  std::vector<std::pair<std::string, std::string>> hub_kv, topo_kv, energy_kv;
  std::vector<std::string> peer_lines, flow_lines;

  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section.starts_with("node.")) {
        auto base = parse_number(section.substr(5));
        if (!base || *base == 0 || *base > 0xFFFF) return Err::Config;
        node_blocks.push_back({static_cast<uint16_t>(*base), 1, {}});
      }
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) return Err::Config;
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section == "topology") topo_kv.emplace_back(key, value);
    else if (section == "hub") hub_kv.emplace_back(key, value);
    else if (section == "energy") energy_kv.emplace_back(key, value);
    else if (section == "peers" && key == "link") peer_lines.push_back(value);
    else if (section == "traffic" && key == "flow") flow_lines.push_back(value);
    else if (section.starts_with("node.")) {
      if (node_blocks.empty()) return Err::Config;
      if (key == "count") {
        auto c = parse_number(value);
        if (!c || *c == 0 || *c > 0x10000) return Err::Config;
        node_blocks.back().count = static_cast<uint32_t>(*c);
      }
      node_blocks.back().kv[key] = value;
    } else {
      return Err::Config;
    }
  }

  for (const auto& [key, value] : topo_kv) {
    if (key == "kind") {
      if (value == "T1") cfg.topology = Topology::T1Star;
      else if (value == "T2") cfg.topology = Topology::T2Tree;
      else if (value == "T3") cfg.topology = Topology::T3Peer;
      else return Err::Config;
    } else if (key == "name") {
      cfg.name = value;
    } else {
      return Err::Config;
    }
  }

  for (const auto& [key, value] : hub_kv) {
    if (key == "address") {
      auto a = parse_number(value);
      if (!a || *a < Address::kHubBase || *a > 0xFFFF) return Err::Config;
      cfg.hub_address.value = static_cast<uint16_t>(*a);
    } else if (key == "min_level") {
      auto v = parse_number(value);
      if (!v || *v > 2) return Err::Config;
      cfg.hub_policy.min_level = static_cast<SecurityLevel>(*v);
    } else if (key == "protocol") {
      if (value == "I") cfg.suite.protocol = SecuritySuiteSelector::Protocol::I_PreSharedMK;
      else if (value == "II") cfg.suite.protocol = SecuritySuiteSelector::Protocol::II_Unauthenticated;
      else if (value == "III") cfg.suite.protocol = SecuritySuiteSelector::Protocol::III_PublicKeyHidden;
      else if (value == "IV") cfg.suite.protocol = SecuritySuiteSelector::Protocol::IV_PasswordAuthenticated;
      else if (value == "V") cfg.suite.protocol = SecuritySuiteSelector::Protocol::V_DisplayAuthenticated;
      else return Err::Config;
    } else if (key == "cipher") {
      if (value == "aes128") cfg.suite.cipher = 0;
      else if (value == "aes256") cfg.suite.cipher = 1;
      else if (value == "camellia128") cfg.suite.cipher = 2;
      else return Err::Config;
    } else if (key == "max_ban_size") {
      auto v = parse_number(value);
      if (!v || *v == 0) return Err::Config;
      cfg.hub_policy.max_ban_size = static_cast<uint32_t>(*v);
    } else if (key == "acl_required") {
      cfg.hub_policy.acl_required = value == "true" || value == "1";
    } else if (key == "rate_limit") {
      auto v = parse_number(value);
      if (!v) return Err::Config;
      cfg.hub_policy.rate_limit = static_cast<uint32_t>(*v);
    } else if (key == "backup") {
      auto a = parse_number(value);
      if (!a || *a < Address::kHubBase) return Err::Config;
      cfg.hub_policy.backup_hubs.push_back(Address{static_cast<uint16_t>(*a)});
    } else if (key == "beacon_interval") {
      auto v = parse_number(value);
      if (!v || *v == 0) return Err::Config;
      cfg.beacon_interval = static_cast<uint32_t>(*v);
    } else if (key == "liveness_grace") {
      auto v = parse_number(value);
      if (!v) return Err::Config;
      cfg.liveness_grace = static_cast<uint32_t>(*v);
    } else if (key == "proc_per_tick") {
      auto v = parse_number(value);
      if (!v || *v == 0) return Err::Config;
      cfg.hub_proc_per_tick = static_cast<uint32_t>(*v);
    } else if (key == "duration") {
      auto v = parse_number(value);
      if (!v) return Err::Config;
      cfg.default_duration = *v;
    } else if (key == "touch_secure_level0") {
      cfg.hub_policy.allow_touch_secure_level0 = value == "true" || value == "1";
    } else if (key == "assoc") {
      cfg.auto_associate = value != "off" && value != "false" && value != "0";
    } else if (key == "gtk_refresh") {
      auto v = parse_number(value);
      if (!v) return Err::Config;
      cfg.gtk_refresh = *v;
    } else {
      return Err::Config;
    }
  }
  // The ciphers a hub accepts: AES-128 always; AES-256 rides the hardened
  // profile (normalized() strips it from baseline policies).
  cfg.hub_policy.allowed_ciphers = {0, 1};

  for (const auto& block : node_blocks) {
    if (block.base_address + block.count - 1 >= Address::kHubBase) return Err::Config;
    for (uint32_t i = 0; i < block.count; ++i) {
      auto node = node_from_block(block, static_cast<uint16_t>(i), cfg.hub_address);
      if (!node) return node.error();
      if (node->address.is_hub() || node->address.is_unassigned()) return Err::Config;
      cfg.nodes.push_back(*node);
    }
  }
  std::sort(cfg.nodes.begin(), cfg.nodes.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.address < b.address; });
  for (size_t i = 1; i < cfg.nodes.size(); ++i) {
    if (cfg.nodes[i].address == cfg.nodes[i - 1].address) return Err::Config;
  }

  for (const auto& p : peer_lines) {
    std::istringstream ps(p);
    std::string a, b;
    if (!(ps >> a >> b)) return Err::Config;
    auto pa = parse_address(a, cfg.hub_address);
    auto pb = parse_address(b, cfg.hub_address);
    if (!pa || !pb || *pa == *pb) return Err::Config;
    cfg.peer_links.emplace_back(*pa, *pb);
  }
  for (const auto& f : flow_lines) {
    auto flow = parse_flow(f, cfg.hub_address);
    if (!flow) return flow.error();
    cfg.flows.push_back(*flow);
  }
  for (const auto& [key, value] : energy_kv) {
    auto v = parse_number(value);
    if (!v) return Err::Config;
    const auto units = static_cast<int64_t>(*v);
    if (key == "tx_base") cfg.costs.tx_base = units * EnergyCosts::kSubunitsPerUnit;
    else if (key == "rx") cfg.costs.rx = units * EnergyCosts::kSubunitsPerUnit;
    else if (key == "ecdh") cfg.costs.ecdh_op = units * EnergyCosts::kSubunitsPerUnit;
    else if (key == "ccm_block") cfg.costs.ccm_block = units * EnergyCosts::kSubunitsPerUnit;
    else if (key == "wake") cfg.costs.wake_processing = units * EnergyCosts::kSubunitsPerUnit;
    else if (key == "idle_centi") cfg.costs.idle_per_tick = units * 16;
    else return Err::Config;
  }

  // ---- validation ----

  if (cfg.topology == Topology::T3Peer && profile != Profile::Hardened) {
    // Peer-to-peer lies outside the baseline standard.
    return Err::Config;
  }
  if (cfg.topology == Topology::T1Star) {
    for (const auto& n : cfg.nodes) {
      if (n.role == NodeRole::Coordinator) return Err::Config;  // exactly one coordinator
      if (!n.parent.is_unassigned() && n.parent != cfg.hub_address) return Err::Config;
    }
  }
  for (const auto& n : cfg.nodes) {
    if (n.energy == EnergyClass::E1Passive) {
      // Passive nodes transmit only while powered by a parent chain that
      // terminates at the hub.
      Address at = n.parent.is_unassigned() ? cfg.hub_address : n.parent;
      int hops = 0;
      while (!at.is_hub()) {
        const NodeSpec* parent = cfg.find_node(at);
        if (parent == nullptr || ++hops > 16) return Err::Config;
        at = parent->parent.is_unassigned() ? cfg.hub_address : parent->parent;
      }
    }
    if (!n.parent.is_unassigned() && !n.parent.is_hub() && cfg.find_node(n.parent) == nullptr) {
      return Err::Config;
    }
  }
  for (const auto& f : cfg.flows) {
    bool src_ok = f.src == cfg.hub_address || cfg.find_node(f.src) != nullptr;
    bool dst_ok = f.dst == cfg.hub_address || cfg.find_node(f.dst) != nullptr;
    if (!src_ok || !dst_ok) return Err::Config;
  }
  for (const auto& [a, b] : cfg.peer_links) {
    for (Address e : {a, b}) {
      if (e != cfg.hub_address && cfg.find_node(e) == nullptr) return Err::Config;
    }
  }
  return cfg;
}

Result<ScenarioConfig> load_scenario_file(const std::string& path, Profile profile) {
  std::ifstream in(path);
  if (!in) return Err::NotFound;
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str(), profile);
}

}  // namespace bansec::sim
