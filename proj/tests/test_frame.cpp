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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bansec/channel.hpp"
#include "bansec/frame.hpp"
#include "bansec/keystore.hpp"
#include "bansec/rng.hpp"

using namespace bansec;

namespace {

// Random frame over the wire-expressible domain (the high-order SN is per-key
// context and never transmitted, so the codec's image has high == 0).
Frame random_frame(DetRng& rng) {
  Frame f;
  f.sender.value = static_cast<uint16_t>(rng.next_below(0xFF00 - 1) + 1);
  f.recipient.value = static_cast<uint16_t>(Address::kHubBase + rng.next_below(0x100));
  f.frame_type = static_cast<FrameType>(rng.next_below(5));
  f.level = static_cast<SecurityLevel>(rng.next_below(3));
  f.seq = SequencePair{0, static_cast<uint16_t>(rng.next_below(0x10000))};
  f.key_id = static_cast<uint8_t>(rng.next_below(256));
  f.payload = rng.bytes(rng.next_below(kMaxPayloadOctets + 1));
  if (f.level == SecurityLevel::Level0Unsecured) {
    f.mic.clear();
  } else {
    f.mic = rng.bytes(rng.next_below(2) ? 8 : 16);
  }
  return f;
}

KeyRecord make_record(uint8_t fill, crypto::KeyRole role = crypto::KeyRole::PTK) {
  KeyRecord rec;
  rec.key = *crypto::SymmetricKey::make(crypto::KeyBits::K128, Bytes(16, fill), role);
  rec.node = Address{5};
  rec.hub = Address{0xFF00};
  rec.id = 1;
  return rec;
}

}  // namespace

TEST_CASE("empty level0 frame encodes to the bare 10-octet header") {
  Frame f;
  f.sender = Address{1};
  f.recipient = Address{0xFF00};
  f.frame_type = FrameType::Data;
  f.level = SecurityLevel::Level0Unsecured;
  auto encoded = encode_frame(f);
  REQUIRE(encoded.ok());
  CHECK(encoded->size() == kHeaderOctets);
  CHECK(*encoded == from_hex("0001" "ff00" "03" "00" "00" "0000" "00"));
}

TEST_CASE("payload boundary") {
  Frame f;
  f.payload.assign(255, 0xAB);
  CHECK(encode_frame(f).ok());
  f.payload.assign(256, 0xAB);
  auto r = encode_frame(f);
  REQUIRE(!r.ok());
  CHECK(r.error() == Err::Encode);
}

TEST_CASE("decode(encode(f)) == f over 10000 random frames") {
  DetRng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    Frame f = random_frame(rng);
    auto encoded = encode_frame(f);
    REQUIRE(encoded.ok());
    CHECK(encoded->size() == kHeaderOctets + f.payload.size() + f.mic.size());
    auto decoded = decode_frame(*encoded);
    REQUIRE(decoded.ok());
    CHECK(*decoded == f);
  }
}

TEST_CASE("truncated and malformed inputs are rejected") {
  Frame f;
  f.sender = Address{3};
  f.recipient = Address{0xFF01};
  f.level = SecurityLevel::Level2AuthEnc;
  f.payload = from_hex("aabbcc");
  f.mic = Bytes(8, 0x11);
  auto encoded = encode_frame(f);
  REQUIRE(encoded.ok());

  SUBCASE("first five octets only") {
    auto r = decode_frame(ByteView(*encoded).subspan(0, 5));
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Truncated);
  }
  SUBCASE("header declares more payload than present") {
    Bytes bytes = *encoded;
    bytes[9] = 200;
    auto r = decode_frame(bytes);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Truncated);
  }
  SUBCASE("level 2 with zero-length mic via byte surgery") {
    Bytes bytes = *encoded;
    bytes.resize(kHeaderOctets + f.payload.size());  // chop the MIC off
    auto r = decode_frame(bytes);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Malformed);
  }
  SUBCASE("level 0 carrying a mic is malformed") {
    Bytes bytes = *encoded;
    bytes[5] = 0;
    auto r = decode_frame(bytes);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Malformed);
  }
  SUBCASE("unknown frame type") {
    Bytes bytes = *encoded;
    bytes[4] = 9;
    auto r = decode_frame(bytes);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Malformed);
  }
}

TEST_CASE("advance_sequence increments, carries, exhausts") {
  auto next = advance_sequence({2, 5});
  REQUIRE(next.ok());
  CHECK(*next == SequencePair{2, 6});

  auto carried = advance_sequence({7, 0xFFFF});
  REQUIRE(carried.ok());
  CHECK(*carried == SequencePair{8, 0});

  // High saturated but low still has room: only full saturation retires.
  auto near_end = advance_sequence({0xFFFFFFFFu, 5});
  REQUIRE(near_end.ok());
  CHECK(*near_end == SequencePair{0xFFFFFFFFu, 6});

  auto exhausted = advance_sequence({0xFFFFFFFFu, 0xFFFF});
  REQUIRE(!exhausted.ok());
  CHECK(exhausted.error() == Err::SequenceExhausted);
}

TEST_CASE("advance_sequence agrees with a flat 48-bit counter oracle") {
  DetRng rng(31337);
  for (int i = 0; i < 10000; ++i) {
    uint64_t flat = rng.next_below((1ull << 48) - 1);
    SequencePair seq{static_cast<uint32_t>(flat >> 16), static_cast<uint16_t>(flat & 0xFFFF)};
    auto next = advance_sequence(seq);
    REQUIRE(next.ok());
    CHECK(next->flat() == flat + 1);
  }
}

TEST_CASE("check_replay verdicts") {
  CHECK(!check_replay({2, 10}, {2, 10}).accept);
  CHECK(check_replay({2, 10}, {2, 10}).reason == DiscardReason::NotFresh);
  CHECK(check_replay({2, 10}, {2, 11}).accept);
  CHECK(check_replay({2, 10}, {3, 0}).accept);
  auto wrapped = check_replay({0xFFFFFFFFu, 5}, {0, 6});
  CHECK(!wrapped.accept);
  CHECK(wrapped.reason == DiscardReason::HighWrap);
  CHECK(check_replay({2, 10}, {2, 9}).reason == DiscardReason::NotFresh);
}

TEST_CASE("replay monotonicity: accepted pairs strictly increase") {
  DetRng rng(555);
  SequencePair last{0, 0};
  SequencePair sender{0, 0};
  std::vector<SequencePair> accepted;
  for (int i = 0; i < 2000; ++i) {
    SequencePair probe;
    if (rng.next_below(4) == 0 && !accepted.empty()) {
      probe = accepted[rng.next_below(accepted.size())];  // replay an old one
    } else {
      auto next = advance_sequence(sender);
      REQUIRE(next.ok());
      sender = *next;
      probe = sender;
    }
    auto verdict = check_replay(last, probe);
    if (verdict.accept) {
      CHECK(probe > last);
      last = probe;
      accepted.push_back(probe);
    }
  }
  for (size_t i = 1; i < accepted.size(); ++i) CHECK(accepted[i] > accepted[i - 1]);
}

TEST_CASE("nonce layout and uniqueness") {
  Nonce n = build_nonce(Address{0x0102}, Address{0xFF03}, 0x23, {0xA0B0C0D0u, 0x1122});
  CHECK(ByteView(n).size() == 13);
  CHECK(to_hex(n) == "0102" "ff03" "23" "a0b0c0d0" "1122" "0000");

  Nonce a = build_nonce(Address{1}, Address{2}, 0x23, {0, 0});
  Nonce b = build_nonce(Address{1}, Address{2}, 0x23, {0, 1});
  int diff_at = -1;
  int diffs = 0;
  for (int i = 0; i < 13; ++i) {
    if (a[i] != b[i]) {
      diff_at = i;
      ++diffs;
    }
  }
  CHECK(diffs == 1);
  CHECK(diff_at == 10);  // only the low-SN octets change

  // Distinct (sender, recipient, seq) inputs must give distinct nonces.
  DetRng rng(777);
  std::set<Bytes> inputs;
  std::set<Bytes> nonces;
  size_t fresh = 0;
  for (int i = 0; i < 1000000; ++i) {
    Address s{static_cast<uint16_t>(rng.next_below(0x10000))};
    Address r{static_cast<uint16_t>(rng.next_below(0x10000))};
    SequencePair seq{static_cast<uint32_t>(rng.next_u64()),
                     static_cast<uint16_t>(rng.next_below(0x10000))};
    Bytes key;
    put_u16(key, s.value);
    put_u16(key, r.value);
    put_u32(key, seq.high);
    put_u16(key, seq.low);
    if (!inputs.insert(key).second) continue;
    ++fresh;
    Nonce n2 = build_nonce(s, r, 0x23, seq);
    if (!nonces.insert(Bytes(n2.begin(), n2.end())).second) {
      CHECK(false);  // nonce collision for a fresh input
    }
  }
  CHECK(fresh > 990000);
  CHECK(nonces.size() == fresh);
}

TEST_CASE("secure channel seals, opens, and enforces freshness") {
  KeyRecord tx = make_record(0x5A);
  KeyRecord rx = tx;
  Bytes payload = from_hex("d00dfeed99");

  auto f1 = seal_frame(tx, crypto::CipherFunction::Aes128Ccm, FrameType::Data,
                       SecurityLevel::Level2AuthEnc, Address{5}, Address{0xFF00}, payload);
  REQUIRE(f1.ok());
  CHECK(f1->payload != payload);  // actually encrypted
  CHECK(f1->mic.size() == 8);

  auto out = open_frame(rx, crypto::CipherFunction::Aes128Ccm, *f1);
  CHECK(out.delivered);
  CHECK(out.payload == payload);

  SUBCASE("replaying the same frame is NotFresh") {
    auto again = open_frame(rx, crypto::CipherFunction::Aes128Ccm, *f1);
    CHECK(!again.delivered);
    CHECK(again.reason == DiscardReason::NotFresh);
  }
  SUBCASE("bit flip is BadMic") {
    auto f2 = seal_frame(tx, crypto::CipherFunction::Aes128Ccm, FrameType::Data,
                         SecurityLevel::Level2AuthEnc, Address{5}, Address{0xFF00}, payload);
    REQUIRE(f2.ok());
    Frame tampered = *f2;
    tampered.payload[0] ^= 1;
    auto bad = open_frame(rx, crypto::CipherFunction::Aes128Ccm, tampered);
    CHECK(!bad.delivered);
    CHECK(bad.reason == DiscardReason::BadMic);
  }
  SUBCASE("level 1 leaves the payload readable but authenticated") {
    auto f2 = seal_frame(tx, crypto::CipherFunction::Aes128Ccm, FrameType::Data,
                         SecurityLevel::Level1AuthOnly, Address{5}, Address{0xFF00}, payload);
    REQUIRE(f2.ok());
    CHECK(f2->payload == payload);
    auto ok = open_frame(rx, crypto::CipherFunction::Aes128Ccm, *f2);
    CHECK(ok.delivered);
    Frame tampered = *f2;
    tampered.payload[0] ^= 1;
    CHECK(!open_frame(rx, crypto::CipherFunction::Aes128Ccm, tampered).delivered);
  }
  SUBCASE("revoked key rejects everything") {
    rx.state = KeyState::Revoked;
    auto f2 = seal_frame(tx, crypto::CipherFunction::Aes128Ccm, FrameType::Data,
                         SecurityLevel::Level2AuthEnc, Address{5}, Address{0xFF00}, payload);
    auto rej = open_frame(rx, crypto::CipherFunction::Aes128Ccm, *f2);
    CHECK(!rej.delivered);
    CHECK(rej.reason == DiscardReason::RevokedKey);
  }
}

TEST_CASE("channel survives a low-order wrap") {
  KeyRecord tx = make_record(0x66);
  KeyRecord rx = tx;
  tx.last_seq_tx = SequencePair{0, 0xFFFE};
  rx.last_seq_rx = SequencePair{0, 0xFFFE};

  for (int i = 0; i < 4; ++i) {
    auto f = seal_frame(tx, crypto::CipherFunction::Aes128Ccm, FrameType::Data,
                        SecurityLevel::Level2AuthEnc, Address{5}, Address{0xFF00}, Bytes{1, 2, 3});
    REQUIRE(f.ok());
    auto out = open_frame(rx, crypto::CipherFunction::Aes128Ccm, *f);
    CHECK(out.delivered);
  }
  CHECK(rx.last_seq_rx.high == 1);  // wrapped through (1, 0)
}

TEST_CASE("install_key uniqueness and replacement") {
  KeyStore store;
  KeyRecord mk = make_record(0x01, crypto::KeyRole::MK);
  auto id1 = store.install(mk);
  REQUIRE(id1.ok());
  CHECK(store.records().size() == 1);
  CHECK(store.records()[0].state == KeyState::Active);

  auto conflict = store.install(mk);
  REQUIRE(!conflict.ok());
  CHECK(conflict.error() == Err::KeyConflict);

  auto id2 = store.install(mk, /*replace=*/true);
  REQUIRE(id2.ok());
  int active = 0;
  for (const auto& r : store.records()) {
    if (r.state == KeyState::Active) ++active;
  }
  CHECK(active == 1);
  CHECK(store.find(*id1)->state == KeyState::Retired);
}

TEST_CASE("rotate_ptk derives identical keys on both ends") {
  KeyStore node_store, hub_store;
  KeyRecord mk = make_record(0x09, crypto::KeyRole::MK);
  REQUIRE(node_store.install(mk).ok());
  REQUIRE(hub_store.install(mk).ok());

  Bytes ni = from_hex("00112233445566778899aabbccddeeff");
  Bytes nr = from_hex("ffeeddccbbaa99887766554433221100");
  auto a = node_store.rotate_ptk(Address{5}, Address{0xFF00}, ni, nr);
  auto b = hub_store.rotate_ptk(Address{5}, Address{0xFF00}, ni, nr);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  // Records are copied out: install/rotate may reallocate the store.
  KeyRecord first = *node_store.find(*a);
  KeyRecord first_hub = *hub_store.find(*b);
  CHECK(first.key.material == first_hub.key.material);
  CHECK(first.epoch == 1);
  CHECK(first.last_seq_tx == SequencePair{0, 0});

  // Second rotation: epoch moves, counters reset, material changes.
  auto c = node_store.rotate_ptk(Address{5}, Address{0xFF00}, nr, ni);
  REQUIRE(c.ok());
  auto* pc = node_store.find(*c);
  CHECK(pc->epoch == 2);
  CHECK(pc->key.material != first.key.material);

  KeyStore empty;
  auto missing = empty.rotate_ptk(Address{5}, Address{0xFF00}, ni, nr);
  REQUIRE(!missing.ok());
  CHECK(missing.error() == Err::MissingMasterKey);
}

TEST_CASE("at most one active PTK per pair across random op sequences") {
  DetRng rng(4242);
  KeyStore store;
  KeyRecord mk = make_record(0x31, crypto::KeyRole::MK);
  REQUIRE(store.install(mk).ok());
  Bytes ni(16, 1), nr(16, 2);
  for (int i = 0; i < 500; ++i) {
    switch (rng.next_below(3)) {
      case 0: store.rotate_ptk(Address{5}, Address{0xFF00}, ni, nr); break;
      case 1: {
        auto* ptk = store.find_active(crypto::KeyRole::PTK, Address{5}, Address{0xFF00});
        if (ptk != nullptr) store.revoke(ptk->id);
        break;
      }
      case 2: {
        KeyRecord extra = make_record(static_cast<uint8_t>(i), crypto::KeyRole::PTK);
        store.install(extra, rng.next_below(2) == 1);
        break;
      }
    }
    int active_ptk = 0;
    uint32_t max_epoch = 0;
    for (const auto& r : store.records()) {
      if (r.key.role == crypto::KeyRole::PTK && r.state == KeyState::Active && r.group_id == 0 &&
          r.node == Address{5} && r.hub == Address{0xFF00}) {
        ++active_ptk;
        max_epoch = std::max(max_epoch, r.epoch);
      }
    }
    CHECK(active_ptk <= 1);
  }
}

TEST_CASE("revoke semantics") {
  KeyStore store;
  auto id = store.install(make_record(0x77));
  REQUIRE(id.ok());
  CHECK(store.revoke(*id).ok());
  CHECK(store.find(*id)->state == KeyState::Revoked);
  CHECK(store.revoke(*id).ok());  // idempotent
  auto missing = store.revoke(999);
  REQUIRE(!missing.ok());
  CHECK(missing.error() == Err::NotFound);
}

TEST_CASE("gtk distribution") {
  DetRng rng(881);
  KeyStore hub_store;
  Address hub{0xFF00};
  std::vector<Address> members = {Address{1}, Address{2}, Address{3}};
  std::vector<KeyStore> member_stores(3);

  KeyRecord mk = make_record(0x21, crypto::KeyRole::MK);
  for (size_t i = 0; i < members.size(); ++i) {
    KeyRecord m = mk;
    m.node = members[i];
    REQUIRE(hub_store.install(m).ok());
    REQUIRE(member_stores[i].install(m).ok());
    Bytes ni(16, static_cast<uint8_t>(i)), nr(16, 0x99);
    REQUIRE(hub_store.rotate_ptk(members[i], hub, ni, nr).ok());
    REQUIRE(member_stores[i].rotate_ptk(members[i], hub, ni, nr).ok());
  }

  auto dist = distribute_gtk(hub_store, hub, members, /*group_id=*/7, rng);
  REQUIRE(dist.ok());
  CHECK(dist->frames.size() == 3);

  std::set<Bytes> nonce_like;  // distinct recipients and counters => distinct frames
  Bytes first_material;
  for (size_t i = 0; i < members.size(); ++i) {
    auto id = install_gtk_from_frame(member_stores[i], members[i], hub, dist->frames[i]);
    REQUIRE(id.ok());
    auto* gtk = member_stores[i].find(*id);
    REQUIRE(gtk != nullptr);
    if (first_material.empty()) {
      first_material = gtk->key.material;
    } else {
      CHECK(gtk->key.material == first_material);  // byte-identical GTK
    }
  }
  auto* hub_gtk = hub_store.find(dist->gtk_record_id);
  REQUIRE(hub_gtk != nullptr);
  CHECK(hub_gtk->key.material == first_material);

  // n members, n distinct sealing nonces (distinct recipients and counters).
  std::set<Bytes> nonces;
  for (const auto& f : dist->frames) {
    Nonce n = build_nonce(f.sender, f.recipient, level_tag_of(f.level, f.frame_type), f.seq);
    CHECK(nonces.insert(Bytes(n.begin(), n.end())).second);
  }
  CHECK(nonces.size() == 3);

  SUBCASE("empty group still records the GTK") {
    auto empty = distribute_gtk(hub_store, hub, {}, /*group_id=*/8, rng);
    REQUIRE(empty.ok());
    CHECK(empty->frames.empty());
    CHECK(hub_store.find(empty->gtk_record_id) != nullptr);
  }
  SUBCASE("orphan member fails closed") {
    auto bad = distribute_gtk(hub_store, hub, {Address{1}, Address{42}}, /*group_id=*/9, rng);
    REQUIRE(!bad.ok());
    CHECK(bad.error() == Err::NotSecured);
  }
}

TEST_CASE("keystore persist/open round-trips and seals") {
  DetRng rng(3141);
  auto store_key = *crypto::SymmetricKey::make(crypto::KeyBits::K128,
                                               from_hex("000102030405060708090a0b0c0d0e0f"),
                                               crypto::KeyRole::MK);
  for (int round = 0; round < 20; ++round) {
    KeyStore store;
    int n = static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n; ++i) {
      KeyRecord r = make_record(static_cast<uint8_t>(rng.next_below(256)),
                                rng.next_below(2) ? crypto::KeyRole::PTK : crypto::KeyRole::MK);
      r.node.value = static_cast<uint16_t>(i + 1);
      r.epoch = static_cast<uint32_t>(rng.next_below(100));
      r.last_seq_tx = SequencePair{static_cast<uint32_t>(rng.next_u64()),
                                   static_cast<uint16_t>(rng.next_below(0x10000))};
      store.install(std::move(r));
    }
    auto blob = persist_keystore(store, store_key);
    REQUIRE(blob.ok());
    auto reopened = open_keystore(*blob, store_key);
    REQUIRE(reopened.ok());
    CHECK(*reopened == store);

    // No Active key material may appear in the clear.
    for (const auto& r : store.records()) {
      auto it = std::search(blob->begin(), blob->end(), r.key.material.begin(),
                            r.key.material.end());
      CHECK(it == blob->end());
    }
  }

  KeyStore store;
  store.install(make_record(0xEE));
  auto blob = persist_keystore(store, store_key);
  REQUIRE(blob.ok());

  SUBCASE("wrong store key") {
    auto wrong_key = *crypto::SymmetricKey::make(crypto::KeyBits::K128, Bytes(16, 9),
                                                 crypto::KeyRole::MK);
    auto r = open_keystore(*blob, wrong_key);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::AuthFailure);
  }
  SUBCASE("tamper") {
    Bytes tampered = *blob;
    tampered[20] ^= 1;
    auto r = open_keystore(tampered, store_key);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::AuthFailure);
  }
  SUBCASE("bad magic") {
    Bytes tampered = *blob;
    tampered[0] = 'X';
    auto r = open_keystore(tampered, store_key);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::Malformed);
  }
}
