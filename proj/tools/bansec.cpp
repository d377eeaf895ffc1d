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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bansec/adversary.hpp"
#include "bansec/assessment.hpp"
#include "bansec/crypto/vectors.hpp"
#include "bansec/handshake.hpp"
#include "bansec/sim/engine.hpp"

using namespace bansec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVectors = 3;

std::ostream& open_sink(const std::string& out_path, std::ofstream& file) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  return file;
}

Result<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Err::NotFound;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Result<Profile> parse_profile(const std::string& name) {
  if (name == "baseline") return Profile::Baseline;
  if (name == "hardened") return Profile::Hardened;
  return Err::Usage;
}

Result<SecuritySuiteSelector::Protocol> parse_protocol(const std::string& name) {
  using P = SecuritySuiteSelector::Protocol;
  if (name == "I") return P::I_PreSharedMK;
  if (name == "II") return P::II_Unauthenticated;
  if (name == "III") return P::III_PublicKeyHidden;
  if (name == "IV") return P::IV_PasswordAuthenticated;
  if (name == "V") return P::V_DisplayAuthenticated;
  return Err::Usage;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- handshake ----

int run_handshake(const std::string& protocol_name, uint64_t seed, std::ostream& out) {
  auto protocol = parse_protocol(protocol_name);
  if (!protocol) {
    std::cerr << "unknown protocol '" << protocol_name << "' (use I..V)\n";
    return kExitUsage;
  }

  DetRng rng(seed);
  const Address node{7}, hub{0xFF00};
  SessionConfig ci, cr;
  ci.sss.level = SecurityLevel::Level2AuthEnc;
  ci.sss.protocol = *protocol;
  cr.sss = ci.sss;
  using P = SecuritySuiteSelector::Protocol;
  switch (*protocol) {
    case P::I_PreSharedMK: {
      auto mk = crypto::SymmetricKey::make(crypto::KeyBits::K128, rng.split("mk").bytes(16),
                                           crypto::KeyRole::MK);
      ci.pre_shared_mk = *mk;
      cr.pre_shared_mk = *mk;
      break;
    }
    case P::III_PublicKeyHidden: {
      DetRng kr = rng.split("static");
      auto station = crypto::generate_keypair(kr);
      cr.own_static_keypair = *station;
      ci.peer_public = station->public_point;
      break;
    }
    case P::IV_PasswordAuthenticated:
      ci.password = rng.split("pw").bytes(12);
      cr.password = ci.password;
      break;
    case P::V_DisplayAuthenticated:
      ci.display = cr.display = true;
      break;
    default:
      break;
  }

  DetRng ri = rng.split("initiator"), rr = rng.split("responder");
  auto initiator = ProtocolSession::create(Role::Initiator, *protocol, node, hub, ci, ri);
  auto responder = ProtocolSession::create(Role::Responder, *protocol, hub, node, cr, rr);
  if (!initiator.ok() || !responder.ok()) {
    std::cerr << "session setup failed\n";
    return kExitConfig;
  }

  out << "protocol " << protocol_name << " handshake (seed " << seed << ")\n";
  auto shuttle = [&](ProtocolSession& to, std::vector<HandshakeMsg> msgs, const char* dir) {
    if (msgs.empty()) return msgs;
    Bytes wire = msgs[0].serialize();
    out << "  " << dir << " phase " << static_cast<int>(msgs[0].kind) << " (" << wire.size()
        << " octets)\n";
    auto parsed = HandshakeMsg::parse(wire);
    return to.advance(*parsed);
  };
  auto m1 = initiator->advance(std::nullopt);
  auto m2 = shuttle(*responder, std::move(m1), "I->R");
  auto m3 = shuttle(*initiator, std::move(m2), "R->I");
  shuttle(*responder, std::move(m3), "I->R");

  for (const auto& line : initiator->log()) out << "  initiator: " << line << "\n";
  for (const auto& line : responder->log()) out << "  responder: " << line << "\n";
  out << "  initiator phase: " << phase_name(initiator->phase()) << "\n";
  out << "  responder phase: " << phase_name(responder->phase()) << "\n";
  if (initiator->result() && responder->result()) {
    bool same = initiator->result()->mk.material == responder->result()->mk.material;
    out << "  master keys match: " << (same ? "yes" : "NO") << "\n";
    out << "  mutually authenticated: "
        << (initiator->result()->mutually_authenticated ? "yes" : "no") << "\n";
    if (*protocol == P::V_DisplayAuthenticated) {
      out << "  display check value: " << *initiator->display_checkvalue() << "\n";
    }
  }
  return kExitOk;
}

// ---- simulate ----

int run_simulate(const std::string& scenario, Profile profile, uint64_t seed, uint64_t ticks,
                 const std::string& format, bool fsm_log, std::ostream& out) {
  auto cfg = sim::load_scenario_file(scenario, profile);
  if (!cfg) {
    std::cerr << "scenario error: " << err_name(cfg.error()) << "\n";
    return kExitConfig;
  }
  uint64_t duration = ticks > 0 ? ticks : cfg->default_duration;
  sim::Simulation simulation(*cfg, seed);
  simulation.run_until(duration);

  if (format == "csv") {
    out << "tick,src,dst,type,level,outcome,reason\n";
    for (const auto& row : simulation.trace()) out << row << "\n";
  } else {
    out << "scenario " << (cfg->name.empty() ? scenario : cfg->name) << " ("
        << profile_name(profile) << ", seed " << seed << ", " << duration << " ticks)\n";
    out << "  admitted nodes:    " << simulation.admitted_count() << "\n";
    out << "  data delivered:    " << simulation.delivered_data_frames() << "\n";
    out << "  frames rejected:   " << simulation.rejected_frames_total() << "\n";
    out << "  network down:      " << (simulation.network_down() ? "yes" : "no") << "\n";
    auto unreachable = simulation.unreachable_report();
    if (!unreachable.empty()) {
      out << "  unreachable nodes:";
      for (Address a : unreachable) out << ' ' << a.value;
      out << "\n";
    }
  }
  if (fsm_log) {
    for (const auto& line : simulation.fsm_log()) out << line << "\n";
  }
  return kExitOk;
}

// ---- attack ----

int run_attack_cmd(const std::string& scenario, const std::string& kinds_csv,
                   const std::string& profiles_csv, uint64_t seed, uint64_t attempts,
                   std::ostream& out) {
  auto text = slurp(scenario);
  if (!text) {
    std::cerr << "cannot read scenario '" << scenario << "'\n";
    return kExitConfig;
  }

  std::vector<adversary::AttackKind> kinds;
  for (const auto& name : split_list(kinds_csv)) {
    auto kind = adversary::attack_from_name(name);
    if (!kind) {
      std::cerr << "unknown attack kind '" << name << "'\n";
      return kExitUsage;
    }
    kinds.push_back(*kind);
  }
  std::vector<Profile> profiles;
  for (const auto& name : split_list(profiles_csv)) {
    auto p = parse_profile(name);
    if (!p) {
      std::cerr << "unknown profile '" << name << "'\n";
      return kExitUsage;
    }
    profiles.push_back(*p);
  }

  // The CLI adversary sits on every link of the topology with a transmitter.
  // (The hardened parse works for every valid scenario; per-profile loading
  // happens again inside each attack run.)
  auto probe_cfg = sim::load_scenario(*text, Profile::Hardened);
  if (!probe_cfg) probe_cfg = sim::load_scenario(*text, Profile::Baseline);
  if (!probe_cfg) {
    std::cerr << "scenario error: " << err_name(probe_cfg.error()) << "\n";
    return kExitConfig;
  }
  std::vector<std::pair<Address, Address>> links;
  for (const auto& n : probe_cfg->nodes) {
    Address up = n.parent.is_unassigned() ? probe_cfg->hub_address : n.parent;
    links.emplace_back(n.address, up);
    for (Address b : probe_cfg->hub_policy.backup_hubs) {
      if (up == probe_cfg->hub_address) links.emplace_back(n.address, b);
    }
  }
  for (const auto& l : probe_cfg->peer_links) links.push_back(l);
  adversary::AdversaryModel model = adversary::AdversaryModel::active_on(links);

  std::vector<adversary::AttackReport> rows;
  for (adversary::AttackKind kind : kinds) {
    for (Profile profile : profiles) {
      auto report = adversary::run_attack(*text, kind, model, profile, seed, attempts);
      if (!report) {
        std::cerr << "attack failed: " << err_name(report.error()) << "\n";
        return kExitConfig;
      }
      rows.push_back(*report);
    }
  }
  out << adversary::report_csv(rows);
  return kExitOk;
}

// ---- assess ----

int run_assess(Profile profile, const std::string& format, std::ostream& out) {
  const auto& reg = assessment::Registry::embedded();
  auto coverage = assessment::coverage_matrix(reg, {"UC1", "UC2", "UC3"});
  if (!coverage) {
    std::cerr << "assessment registry error\n";
    return kExitConfig;
  }
  auto fulfillment = assessment::fulfillment_matrix(reg, profile);
  auto trace = assessment::trace_recommendations(reg);
  if (!trace) {
    std::cerr << "traceability error\n";
    return kExitConfig;
  }

  if (format == "csv") {
    out << assessment::coverage_csv(*coverage);
    out << assessment::fulfillment_csv(fulfillment);
  } else {
    out << assessment::coverage_table(*coverage) << "\n";
    out << assessment::fulfillment_table(fulfillment) << "\n";
    out << "recommendations (" << trace->size() << "):\n";
    for (const auto& rec : reg.recommendations()) {
      out << "  " << rec.id << "  <-";
      for (const auto& spec : rec.motivating_specs) out << ' ' << spec;
      out << "  [" << rec.feature << "]\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IEEE 802.15.6 MAC security model: handshakes, simulation, attacks, assessment"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "table";
  uint64_t seed = 0;
  std::string protocol = "I";
  std::string scenario;
  std::string profile_name_opt = "baseline";
  std::string kinds = "replay";
  std::string profiles = "baseline,hardened";
  uint64_t ticks = 0;
  uint64_t attempts = 1000;
  bool fsm_log = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write output to this file instead of stdout");
    cmd->add_option("--format", format, "csv or table")
        ->check(CLI::IsMember({"csv", "table"}));
    cmd->add_option("--seed", seed, "deterministic seed (default 0)");
  };

  auto* handshake = app.add_subcommand("handshake", "run one association protocol end to end");
  handshake->add_option("--protocol", protocol, "I, II, III, IV, or V");
  add_common(handshake);

  auto* simulate = app.add_subcommand("simulate", "run a scenario and print its trace");
  simulate->add_option("scenario", scenario, "scenario file")->required();
  simulate->add_option("--profile", profile_name_opt, "baseline or hardened");
  simulate->add_option("--ticks", ticks, "override scenario duration");
  simulate->add_flag("--fsm-log", fsm_log, "also print the security state machine log");
  add_common(simulate);

  auto* attack = app.add_subcommand("attack", "run attack kinds against a scenario");
  attack->add_option("scenario", scenario, "scenario file")->required();
  attack->add_option("--kinds", kinds,
                     "comma list: eavesdrop,replay,impersonate,mitm,dos-wakeup,dos-flood");
  attack->add_option("--profile", profiles, "comma list of profiles");
  attack->add_option("--attempts", attempts, "attempts per attack where applicable");
  add_common(attack);

  auto* assess = app.add_subcommand("assess", "emit coverage and fulfillment matrices");
  assess->add_option("--profile", profile_name_opt, "baseline or hardened");
  add_common(assess);

  auto* vectors = app.add_subcommand("vectors", "run the embedded crypto known-answer vectors");
  add_common(vectors);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream& out = open_sink(out_path, file);
  if (!out_path.empty() && !file) {
    std::cerr << "cannot open '" << out_path << "'\n";
    return kExitUsage;
  }

  if (app.got_subcommand("vectors")) {
    return crypto::all_vectors_pass(out) ? kExitOk : kExitVectors;
  }
  if (app.got_subcommand("handshake")) {
    return run_handshake(protocol, seed, out);
  }
  if (app.got_subcommand("simulate") || app.got_subcommand("assess")) {
    auto profile = parse_profile(profile_name_opt);
    if (!profile) {
      std::cerr << "unknown profile '" << profile_name_opt << "'\n";
      return kExitUsage;
    }
    if (app.got_subcommand("simulate")) {
      return run_simulate(scenario, *profile, seed, ticks, format, fsm_log, out);
    }
    return run_assess(*profile, format, out);
  }
  if (app.got_subcommand("attack")) {
    return run_attack_cmd(scenario, kinds, profiles, seed, attempts, out);
  }
  return kExitUsage;
}
