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

#ifndef BANSEC_KEYSTORE_HPP_
#define BANSEC_KEYSTORE_HPP_

#include <optional>
#include <vector>

#include "bansec/crypto/suite.hpp"
#include "bansec/frame.hpp"
#include "bansec/rng.hpp"

namespace bansec {

enum class KeyState : uint8_t { Active, Retired, Revoked };
enum class KeyOrigin : uint8_t {
  PreShared = 0,
  ProtocolI = 1,
  ProtocolII = 2,
  ProtocolIII = 3,
  ProtocolIV = 4,
  ProtocolV = 5,
  Gtk = 6,
};

struct KeyRecord {
  uint32_t id = 0;
  crypto::SymmetricKey key;
  Address node;          // for GTK records at the hub, node is unassigned
  Address hub;
  uint8_t group_id = 0;  // nonzero identifies a GTK
  KeyOrigin origin = KeyOrigin::PreShared;
  uint32_t epoch = 0;
  KeyState state = KeyState::Active;
  SequencePair last_seq_tx;
  SequencePair last_seq_rx;

  bool operator==(const KeyRecord&) const = default;
};

// Single-owner mutable store of MK/PTK/GTK records. Transfers between
// contexts are fine; unsynchronized sharing is not.
class KeyStore {
 public:
  // Installs a record as Active. A second Active record of the same role for
  // the same pair (or group) is a KeyConflict unless replace is set, in which
  // case the old record is Retired.
  Result<uint32_t> install(KeyRecord record, bool replace = false);

  Result<uint32_t> rotate_ptk(Address node, Address hub, ByteView nonce_i, ByteView nonce_r,
                              crypto::KeyBits bits = crypto::KeyBits::K128);

  Status revoke(uint32_t record_id);  // idempotent once the record exists
  Status erase_pair(Address node, Address hub);  // drops MK and PTK records for the pair

  KeyRecord* find_active(crypto::KeyRole role, Address node, Address hub);
  const KeyRecord* find_active(crypto::KeyRole role, Address node, Address hub) const;
  KeyRecord* find_active_group(uint8_t group_id);
  KeyRecord* find(uint32_t record_id);

  const std::vector<KeyRecord>& records() const { return records_; }
  std::vector<KeyRecord>& records() { return records_; }
  uint64_t store_nonce_counter() const { return store_nonce_counter_; }

  bool operator==(const KeyStore&) const = default;

  // Serialization of the plaintext record set (persist_keystore seals it).
  Bytes serialize() const;
  static Result<KeyStore> deserialize(ByteView bytes);

 private:
  friend Result<Bytes> persist_keystore(KeyStore& store, const crypto::SymmetricKey& store_key);

  std::vector<KeyRecord> records_;
  uint32_t next_id_ = 1;
  uint64_t store_nonce_counter_ = 0;
};

// At-rest sealing: "BKS1" || nonce(13) || ciphertext || MIC(16) under the
// store key. Bumps the persistent store-nonce counter.
Result<Bytes> persist_keystore(KeyStore& store, const crypto::SymmetricKey& store_key);
Result<KeyStore> open_keystore(ByteView blob, const crypto::SymmetricKey& store_key);

// GTK distribution: one sealed unicast frame per group member, each carrying
// the same GTK under a GTKWRAP key derived from that member's PTK.
struct GtkDistribution {
  std::vector<Frame> frames;
  uint32_t gtk_record_id = 0;
};

Result<GtkDistribution> distribute_gtk(KeyStore& hub_store, Address hub,
                                       const std::vector<Address>& group, uint8_t group_id,
                                       RandomSource& rng,
                                       crypto::KeyBits bits = crypto::KeyBits::K128);

// Member side: open a distribution frame and install the carried GTK.
Result<uint32_t> install_gtk_from_frame(KeyStore& member_store, Address member, Address hub,
                                        const Frame& frame);
// Same, when the carrying frame was already opened by the channel.
Result<uint32_t> install_gtk_from_payload(KeyStore& member_store, Address member, Address hub,
                                          ByteView payload);

}  // namespace bansec

#endif  // BANSEC_KEYSTORE_HPP_
