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

#include "bansec/keystore.hpp"

#include <algorithm>

#include "bansec/channel.hpp"

namespace bansec {

using crypto::KeyBits;
using crypto::KeyRole;
using crypto::SymmetricKey;

namespace {

bool same_slot(const KeyRecord& a, const KeyRecord& b) {
  if (a.key.role != b.key.role) return false;
  if (a.group_id != 0 || b.group_id != 0) return a.group_id == b.group_id;
  return a.node == b.node && a.hub == b.hub;
}

}  // namespace

Result<uint32_t> KeyStore::install(KeyRecord record, bool replace) {
  KeyRecord* existing = nullptr;
  for (auto& r : records_) {
    if (r.state == KeyState::Active && same_slot(r, record)) {
      existing = &r;
      break;
    }
  }
  if (existing != nullptr) {
    if (!replace) return Err::KeyConflict;
    existing->state = KeyState::Retired;
  }
  record.id = next_id_++;
  record.state = KeyState::Active;
  records_.push_back(std::move(record));
  return records_.back().id;
}

Result<uint32_t> KeyStore::rotate_ptk(Address node, Address hub, ByteView nonce_i,
                                      ByteView nonce_r, KeyBits bits) {
  KeyRecord* mk = find_active(KeyRole::MK, node, hub);
  if (mk == nullptr) return Err::MissingMasterKey;

  Bytes ctx;
  append(ctx, nonce_i);
  append(ctx, nonce_r);
  put_u16(ctx, node.value);
  put_u16(ctx, hub.value);
  auto ptk = crypto::derive_key(mk->key, "PTK", ctx, bits, KeyRole::PTK);
  if (!ptk) return ptk.error();

  uint32_t epoch = 1;
  for (const auto& r : records_) {
    if (r.key.role == KeyRole::PTK && r.node == node && r.hub == hub) {
      epoch = std::max(epoch, r.epoch + 1);
    }
  }

  KeyRecord rec;
  rec.key = *ptk;
  rec.node = node;
  rec.hub = hub;
  rec.origin = mk->origin;
  rec.epoch = epoch;
  rec.last_seq_tx = SequencePair{0, 0};  // counters reset exactly when epoch increments
  rec.last_seq_rx = SequencePair{0, 0};
  return install(std::move(rec), /*replace=*/true);
}

Status KeyStore::revoke(uint32_t record_id) {
  KeyRecord* rec = find(record_id);
  if (rec == nullptr) return Err::NotFound;
  rec->state = KeyState::Revoked;
  return ok_status();
}

Status KeyStore::erase_pair(Address node, Address hub) {
  auto before = records_.size();
  std::erase_if(records_, [&](const KeyRecord& r) {
    return r.group_id == 0 && r.node == node && r.hub == hub &&
           (r.key.role == KeyRole::MK || r.key.role == KeyRole::PTK);
  });
  return records_.size() != before ? ok_status() : Status(Err::NotFound);
}

KeyRecord* KeyStore::find_active(KeyRole role, Address node, Address hub) {
  for (auto& r : records_) {
    if (r.state == KeyState::Active && r.key.role == role && r.group_id == 0 && r.node == node &&
        r.hub == hub) {
      return &r;
    }
  }
  return nullptr;
}

const KeyRecord* KeyStore::find_active(KeyRole role, Address node, Address hub) const {
  return const_cast<KeyStore*>(this)->find_active(role, node, hub);
}

KeyRecord* KeyStore::find_active_group(uint8_t group_id) {
  for (auto& r : records_) {
    if (r.state == KeyState::Active && r.group_id == group_id) return &r;
  }
  return nullptr;
}

KeyRecord* KeyStore::find(uint32_t record_id) {
  for (auto& r : records_) {
    if (r.id == record_id) return &r;
  }
  return nullptr;
}

// ---- serialization ----

Bytes KeyStore::serialize() const {
  Bytes out;
  put_u32(out, next_id_);
  put_u64(out, store_nonce_counter_);
  put_u32(out, static_cast<uint32_t>(records_.size()));
  for (const auto& r : records_) {
    put_u32(out, r.id);
    out.push_back(static_cast<uint8_t>(r.key.role));
    out.push_back(static_cast<uint8_t>(r.key.bits));
    append(out, r.key.material);
    put_u16(out, r.node.value);
    put_u16(out, r.hub.value);
    out.push_back(r.group_id);
    out.push_back(static_cast<uint8_t>(r.origin));
    put_u32(out, r.epoch);
    out.push_back(static_cast<uint8_t>(r.state));
    put_u32(out, r.last_seq_tx.high);
    put_u16(out, r.last_seq_tx.low);
    put_u32(out, r.last_seq_rx.high);
    put_u16(out, r.last_seq_rx.low);
  }
  return out;
}

Result<KeyStore> KeyStore::deserialize(ByteView bytes) {
  KeyStore store;
  size_t at = 0;
  auto need = [&](size_t n) { return bytes.size() - at >= n; };
  if (!need(16)) return Err::Truncated;
  store.next_id_ = get_u32(bytes, at);
  at += 4;
  store.store_nonce_counter_ = get_u64(bytes, at);
  at += 8;
  uint32_t count = get_u32(bytes, at);
  at += 4;
  for (uint32_t i = 0; i < count; ++i) {
    if (!need(6)) return Err::Truncated;
    KeyRecord r;
    r.id = get_u32(bytes, at);
    at += 4;
    auto role = static_cast<KeyRole>(bytes[at++]);
    auto bits = static_cast<KeyBits>(bytes[at++]);
    size_t mat_len = crypto::key_octets(bits);
    if (!need(mat_len + 23)) return Err::Truncated;
    Bytes material(bytes.begin() + at, bytes.begin() + at + mat_len);
    at += mat_len;
    auto key = SymmetricKey::make(bits, std::move(material), role);
    if (!key) return Err::Malformed;
    r.key = *key;
    r.node.value = get_u16(bytes, at);
    at += 2;
    r.hub.value = get_u16(bytes, at);
    at += 2;
    r.group_id = bytes[at++];
    r.origin = static_cast<KeyOrigin>(bytes[at++]);
    r.epoch = get_u32(bytes, at);
    at += 4;
    r.state = static_cast<KeyState>(bytes[at++]);
    r.last_seq_tx.high = get_u32(bytes, at);
    at += 4;
    r.last_seq_tx.low = get_u16(bytes, at);
    at += 2;
    r.last_seq_rx.high = get_u32(bytes, at);
    at += 4;
    r.last_seq_rx.low = get_u16(bytes, at);
    at += 2;
    store.records_.push_back(std::move(r));
  }
  if (at != bytes.size()) return Err::Malformed;
  return store;
}

namespace {

Nonce store_nonce(uint64_t counter) {
  Nonce n{};
  n[0] = 'B';
  n[1] = 'K';
  n[2] = 'S';
  for (int i = 0; i < 8; ++i) n[3 + i] = static_cast<uint8_t>(counter >> (56 - 8 * i));
  return n;
}

constexpr char kStoreMagic[4] = {'B', 'K', 'S', '1'};

}  // namespace

Result<Bytes> persist_keystore(KeyStore& store, const SymmetricKey& store_key) {
  store.store_nonce_counter_++;
  Nonce nonce = store_nonce(store.store_nonce_counter_);
  Bytes plain = store.serialize();
  auto sealed = crypto::ccm_seal(store_key, nonce, Bytes(kStoreMagic, kStoreMagic + 4), plain, 16);
  if (!sealed) return sealed.error();

  Bytes blob(kStoreMagic, kStoreMagic + 4);
  append(blob, nonce);
  append(blob, sealed->ciphertext);
  append(blob, sealed->mic);
  return blob;
}

Result<KeyStore> open_keystore(ByteView blob, const SymmetricKey& store_key) {
  if (blob.size() < 4 + 13 + 16) return Err::Truncated;
  if (!std::equal(kStoreMagic, kStoreMagic + 4, blob.begin())) return Err::Malformed;
  ByteView nonce = blob.subspan(4, 13);
  ByteView ct = blob.subspan(17, blob.size() - 17 - 16);
  ByteView mic = blob.subspan(blob.size() - 16);
  auto plain = crypto::ccm_open(store_key, nonce, Bytes(kStoreMagic, kStoreMagic + 4), ct, mic);
  if (!plain) return plain.error();
  return KeyStore::deserialize(*plain);
}

// ---- GTK distribution ----

namespace {

Bytes gtk_wrap_context(uint8_t group_id, uint32_t epoch, Address hub) {
  Bytes ctx;
  ctx.push_back(group_id);
  put_u32(ctx, epoch);
  put_u16(ctx, hub.value);
  return ctx;
}

}  // namespace

Result<GtkDistribution> distribute_gtk(KeyStore& hub_store, Address hub,
                                       const std::vector<Address>& group, uint8_t group_id,
                                       RandomSource& rng, KeyBits bits) {
  // Every member must hold a live PTK before any frame is built.
  for (Address member : group) {
    if (hub_store.find_active(KeyRole::PTK, member, hub) == nullptr) return Err::NotSecured;
  }

  uint32_t epoch = 1;
  if (KeyRecord* old_gtk = hub_store.find_active_group(group_id)) epoch = old_gtk->epoch + 1;

  auto gtk = SymmetricKey::make(bits, rng.bytes(crypto::key_octets(bits)), KeyRole::GTK);
  if (!gtk) return gtk.error();

  GtkDistribution out;
  for (Address member : group) {
    KeyRecord* ptk = hub_store.find_active(KeyRole::PTK, member, hub);
    auto wrap = crypto::derive_key(ptk->key, "GTKWRAP", gtk_wrap_context(group_id, epoch, hub),
                                   bits, KeyRole::GTK);
    if (!wrap) return wrap.error();

    // group_id || epoch || bits || (GTK xor wrap-stream)
    Bytes payload;
    payload.push_back(group_id);
    put_u32(payload, epoch);
    payload.push_back(static_cast<uint8_t>(bits));
    for (size_t i = 0; i < gtk->material.size(); ++i) {
      payload.push_back(static_cast<uint8_t>(gtk->material[i] ^ wrap->material[i]));
    }

    auto frame = seal_frame(*ptk, crypto::CipherFunction::Aes128Ccm, FrameType::Management,
                            SecurityLevel::Level2AuthEnc, hub, member, payload, 16);
    if (!frame) return frame.error();
    out.frames.push_back(std::move(*frame));
  }

  KeyRecord gtk_rec;
  gtk_rec.key = *gtk;
  gtk_rec.hub = hub;
  gtk_rec.group_id = group_id;
  gtk_rec.origin = KeyOrigin::Gtk;
  gtk_rec.epoch = epoch;
  auto id = hub_store.install(std::move(gtk_rec), /*replace=*/true);
  if (!id) return id.error();
  out.gtk_record_id = *id;
  return out;
}

Result<uint32_t> install_gtk_from_frame(KeyStore& member_store, Address member, Address hub,
                                        const Frame& frame) {
  KeyRecord* ptk = member_store.find_active(KeyRole::PTK, member, hub);
  if (ptk == nullptr) return Err::NotSecured;

  OpenOutcome opened = open_frame(*ptk, crypto::CipherFunction::Aes128Ccm, frame);
  if (!opened.delivered) return Err::AuthFailure;
  return install_gtk_from_payload(member_store, member, hub, opened.payload);
}

Result<uint32_t> install_gtk_from_payload(KeyStore& member_store, Address member, Address hub,
                                          ByteView payload) {
  KeyRecord* ptk = member_store.find_active(KeyRole::PTK, member, hub);
  if (ptk == nullptr) return Err::NotSecured;
  Bytes p(payload.begin(), payload.end());
  if (p.size() < 6) return Err::Malformed;
  uint8_t group_id = p[0];
  uint32_t epoch = get_u32(p, 1);
  auto bits = static_cast<KeyBits>(p[5]);
  size_t mat_len = crypto::key_octets(bits);
  if (p.size() != 6 + mat_len) return Err::Malformed;

  auto wrap = crypto::derive_key(ptk->key, "GTKWRAP", gtk_wrap_context(group_id, epoch, hub), bits,
                                 KeyRole::GTK);
  if (!wrap) return wrap.error();
  Bytes material(mat_len);
  for (size_t i = 0; i < mat_len; ++i) {
    material[i] = static_cast<uint8_t>(p[6 + i] ^ wrap->material[i]);
  }
  auto gtk = SymmetricKey::make(bits, std::move(material), KeyRole::GTK);
  if (!gtk) return gtk.error();

  KeyRecord rec;
  rec.key = *gtk;
  rec.hub = hub;
  rec.node = member;
  rec.group_id = group_id;
  rec.origin = KeyOrigin::Gtk;
  rec.epoch = epoch;
  return member_store.install(std::move(rec), /*replace=*/true);
}

}  // namespace bansec
