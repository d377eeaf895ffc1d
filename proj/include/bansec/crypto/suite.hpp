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

#ifndef BANSEC_CRYPTO_SUITE_HPP_
#define BANSEC_CRYPTO_SUITE_HPP_

#include <functional>
#include <set>
#include <string_view>

#include "bansec/bytes.hpp"
#include "bansec/result.hpp"

namespace bansec::crypto {

enum class KeyBits : uint8_t { K128, K256 };
enum class KeyRole : uint8_t { MK, PTK, GTK, KCK };

inline size_t key_octets(KeyBits bits) { return bits == KeyBits::K128 ? 16 : 32; }

struct SymmetricKey {
  KeyBits bits = KeyBits::K128;
  Bytes material;
  KeyRole role = KeyRole::MK;

  static Result<SymmetricKey> make(KeyBits bits, Bytes material, KeyRole role);
  bool operator==(const SymmetricKey&) const = default;
};

using AuthTag = Bytes;  // 16-octet CMAC output, truncated where the frame demands

enum class CipherFunction : uint8_t { Aes128Ccm, Aes256Ccm, Camellia128Ccm };

std::string_view cipher_name(CipherFunction c);
KeyBits cipher_key_bits(CipherFunction c);

// ---- CMAC (NIST SP 800-38B) over AES-128/AES-256 ----

AuthTag cmac_tag(const SymmetricKey& key, ByteView message);

inline bool cmac_verify(const SymmetricKey& key, ByteView message, ByteView tag) {
  AuthTag expect = cmac_tag(key, message);
  expect.resize(tag.size() <= expect.size() ? tag.size() : expect.size());
  return ct_equal(expect, tag);
}

// Alternative tag-algorithm slot for messages longer than two cipher blocks.
// The default stays CMAC; installing an alternative reroutes only the long
// path, under the same (key, message) -> 16-octet-tag contract.
class TagAlgorithmSlot {
 public:
  using MacFn = std::function<AuthTag(const SymmetricKey&, ByteView)>;

  void set_long_message_alternative(MacFn fn) { alt_ = std::move(fn); }
  bool has_alternative() const { return static_cast<bool>(alt_); }

  AuthTag compute(const SymmetricKey& key, ByteView message) const {
    if (alt_ && message.size() > 32) return alt_(key, message);
    return cmac_tag(key, message);
  }

 private:
  MacFn alt_;
};

// ---- CCM (NIST SP 800-38C), 13-octet nonces ----

struct Sealed {
  Bytes ciphertext;
  Bytes mic;
};

// tag_octets must be even, in [4, 16]. Frames use 8, key confirmations 16.
Result<Sealed> ccm_seal(const SymmetricKey& key, ByteView nonce13, ByteView aad, ByteView plaintext,
                        size_t tag_octets);
Result<Bytes> ccm_open(const SymmetricKey& key, ByteView nonce13, ByteView aad, ByteView ciphertext,
                       ByteView mic);

// Cipher-function dispatch. Camellia is an interface slot only; selecting it
// reports UnsupportedCipher instead of silently substituting AES.
Result<Sealed> ccm_seal(CipherFunction cipher, const SymmetricKey& key, ByteView nonce13,
                        ByteView aad, ByteView plaintext, size_t tag_octets);
Result<Bytes> ccm_open(CipherFunction cipher, const SymmetricKey& key, ByteView nonce13,
                       ByteView aad, ByteView ciphertext, ByteView mic);

// Tracks nonces used for sealing under one key; the secure channel consults it
// before every seal.
class SealGuard {
 public:
  Status check_and_record(ByteView nonce13) {
    Bytes n(nonce13.begin(), nonce13.end());
    if (!used_.insert(std::move(n)).second) return Err::NonceReuse;
    return ok_status();
  }

 private:
  std::set<Bytes> used_;
};

// ---- Key derivation (CMAC in counter mode with fixed labels) ----
//
// block_i = CMAC(base, i || label || 0x00 || context); output truncated to
// out_bits. label must be one of PTK, KCK, KMAC, GTKWRAP.
Result<SymmetricKey> derive_key(ByteView base_material, std::string_view label, ByteView context,
                                KeyBits out_bits, KeyRole role);
Result<SymmetricKey> derive_key(const SymmetricKey& base, std::string_view label, ByteView context,
                                KeyBits out_bits, KeyRole role);

// Short non-secret identifier for ACL bookkeeping: CMAC under the all-zero key.
Bytes fingerprint(ByteView material);

}  // namespace bansec::crypto

#endif  // BANSEC_CRYPTO_SUITE_HPP_
