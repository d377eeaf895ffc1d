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

#ifndef BANSEC_SIM_ENGINE_HPP_
#define BANSEC_SIM_ENGINE_HPP_

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "bansec/fsm.hpp"
#include "bansec/handshake.hpp"
#include "bansec/hub.hpp"
#include "bansec/keystore.hpp"
#include "bansec/rng.hpp"
#include "bansec/sim/scenario.hpp"

namespace bansec::sim {

// Deterministic discrete-event simulator. Time is integer ticks; each link
// delivers one frame per direction per tick; every energy debit is integer
// subunits. A run is a pure function of (scenario, profile, seed): all state
// lives in ordered containers and all randomness flows from the seed.
//
// Per tick, in order: scheduled injections fire; the active hub beacons (on
// its interval); nodes act in address order (liveness, association progress,
// scheduled flows); adversary-injected frames arrive; links deliver in sorted
// order; the hub scans for silent nodes (hardened); idle debits, recharge,
// and death checks close the tick.

// Observer sees every frame that traverses an observed link (tick, from, to,
// link-is-touch-secure, wire octets). Passive: it cannot mutate anything.
using FrameObserver =
    std::function<void(uint64_t, Address, Address, bool, const Bytes&)>;

class Simulation {
 public:
  Simulation(ScenarioConfig config, uint64_t seed);

  void run_until(uint64_t end_tick);
  uint64_t now() const { return tick_; }
  const ScenarioConfig& config() const { return cfg_; }

  // ---- failure / adversary injection ----
  Status schedule_node_failure(Address node, uint64_t at_tick);
  Status schedule_link_jam(Address a, Address b, uint64_t from_tick, uint64_t until_tick);
  Status schedule_battery_set(Address node, uint64_t at_tick, int64_t units);

  void set_observer(FrameObserver observer) { observer_ = std::move(observer); }
  // Adversary transmission: bypasses the link budget (a radio flood is not a
  // polite queue participant). Delivered at the given tick in FIFO order.
  void schedule_injected_frame(uint64_t at_tick, Address from, Address to, Bytes octets);

  // ---- observation ----
  uint64_t delivered_data_frames() const { return delivered_data_; }
  uint64_t delivered_injected_frames() const { return delivered_injected_; }
  uint64_t rejected_frames(DiscardReason reason) const;
  uint64_t rejected_frames_total() const;
  Result<int64_t> battery_subunits(Address node) const;
  Result<SecurityState> node_state(Address node) const;
  std::optional<uint64_t> death_tick(Address node) const;
  size_t admitted_count() const;
  Address active_hub() const { return active_hub_; }
  bool network_down() const { return network_down_; }
  const HubAccessControl* hub_access(Address hub) const;
  std::vector<Address> unreachable_report() const;

  // Generic metric interface: delivered_frames, rejected_frames:<Reason>,
  // battery:<addr> (subunits), state:<addr>, admitted_count.
  Result<int64_t> observe(const std::string& metric) const;

  // Adversarial association attempt against the active hub: a formally valid
  // handshake in the given protocol from an unprovisioned address. The
  // exchange runs through real sessions and ends at the hub's real admission
  // decision. Returns the connection status, or AuthFailure if the handshake
  // itself broke down.
  Result<ConnectionStatus> adversary_association(SecuritySuiteSelector::Protocol protocol,
                                                 Address fake_address, RandomSource& rng);

  const std::vector<std::string>& trace() const { return trace_; }
  const std::vector<std::string>& fsm_log() const { return fsm_log_; }

 private:
  struct NodeRt {
    NodeSpec spec;
    SecurityState state = SecurityState::Orphan;
    KeyStore keys;
    std::map<uint16_t, std::unique_ptr<ProtocolSession>> sessions;  // keyed by peer
    bool has_battery = false;
    int64_t battery = 0;  // subunits
    bool alive = true;
    std::optional<uint64_t> died_at;
    bool admitted = false;
    bool gave_up = false;  // permanent admission rejection
    Address associated_hub;  // unassigned until an association completed
    uint64_t last_beacon = 0;
    uint64_t next_assoc_attempt = 0;
    std::map<uint16_t, uint32_t> rx_this_tick;  // per-source rate limiting
  };

  struct HubRt {
    Address address;
    bool alive = true;
    KeyStore keys;
    std::map<uint16_t, std::unique_ptr<ProtocolSession>> sessions;
    std::unique_ptr<HubAccessControl> access;
    std::map<uint16_t, uint64_t> last_heard;
    uint32_t proc_used = 0;  // per tick
    std::map<uint16_t, uint32_t> rx_this_tick;
  };

  struct LinkState {
    bool touch_secure = false;
    uint64_t jammed_until = 0;  // exclusive
    std::deque<Bytes> queue_ab, queue_ba;  // wire octets, per direction
  };

  struct Injection {
    uint64_t tick;
    Address from, to;
    Bytes octets;
  };

  struct ScheduledEvent {
    uint64_t tick;
    int kind;  // 0 failure, 1 battery set
    Address node;
    int64_t units;
  };

  using LinkKey = std::pair<uint16_t, uint16_t>;
  static LinkKey link_key(Address a, Address b);

  void step();
  void provision();
  void emit_fsm(Address node, SecurityState from, FsmEvent event, const Transition& t);
  void apply_fsm_event(NodeRt& node, FsmEvent event);
  void node_tick(NodeRt& node);
  void hub_flows();
  void start_association(NodeRt& node);
  void start_peer_association(NodeRt& node, Address peer);
  void send_flow_frame(KeyStore& keys, Address src, Address dst, const TrafficFlow& flow,
                       bool budgeted);
  void send_frame(Address from, Address to, const Bytes& octets);
  Address next_hop(Address from, Address to) const;
  void deliver(Address from, Address to, const Bytes& octets, bool injected);
  void node_receive(NodeRt& node, Address from, const Frame& frame, const Bytes& octets,
                    bool injected);
  void hub_receive(HubRt& hub, Address from, const Frame& frame, const Bytes& octets,
                   bool injected);
  void finish_hub_association(HubRt& hub, Address node_addr);
  void debit(Address node, int64_t subunits);
  void record(uint64_t tick, Address src, Address dst, FrameType type, SecurityLevel level,
              std::string_view outcome, std::string_view reason);
  void reject_frame(DiscardReason reason);
  bool is_hub_address(Address a) const { return hubs_.contains(a.value); }
  SessionConfig node_session_config(const NodeRt& node, Address peer) const;
  SessionConfig hub_session_config(const HubRt& hub, Address node_addr,
                                   SecuritySuiteSelector::Protocol protocol) const;
  crypto::SymmetricKey provision_mk(Address a, Address b) const;
  Bytes provision_password(Address a, Address b) const;
  void elect_and_switch();

  ScenarioConfig cfg_;
  uint64_t seed_;
  DetRng rng_;
  uint64_t tick_ = 0;

  std::map<uint16_t, NodeRt> nodes_;
  std::map<uint16_t, HubRt> hubs_;
  Address active_hub_;
  bool network_down_ = false;
  std::map<LinkKey, LinkState> links_;
  std::vector<Injection> injections_;  // sorted by tick, stable
  std::vector<ScheduledEvent> events_;
  std::map<LinkKey, std::pair<uint64_t, uint64_t>> jams_;

  crypto::KeyPair hub_static_keypair_;  // protocol III responder credential
  crypto::SymmetricKey provision_root_;

  uint64_t delivered_data_ = 0;
  uint64_t delivered_injected_ = 0;
  std::map<DiscardReason, uint64_t> rejected_;
  std::vector<std::string> trace_;
  std::vector<std::string> fsm_log_;
  FrameObserver observer_;
};

}  // namespace bansec::sim

#endif  // BANSEC_SIM_ENGINE_HPP_
