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

#include "bansec/crypto/suite.hpp"

#include <cstring>

#include "bansec/crypto/aes.hpp"

namespace bansec::crypto {

Result<SymmetricKey> SymmetricKey::make(KeyBits bits, Bytes material, KeyRole role) {
  if (material.size() != key_octets(bits)) return Err::Usage;
  return SymmetricKey{bits, std::move(material), role};
}

std::string_view cipher_name(CipherFunction c) {
  switch (c) {
    case CipherFunction::Aes128Ccm: return "Aes128Ccm";
    case CipherFunction::Aes256Ccm: return "Aes256Ccm";
    case CipherFunction::Camellia128Ccm: return "Camellia128Ccm";
  }
  return "?";
}

KeyBits cipher_key_bits(CipherFunction c) {
  return c == CipherFunction::Aes256Ccm ? KeyBits::K256 : KeyBits::K128;
}

// ---- CMAC ----

namespace {

// Doubling in GF(2^128) with the x^128 + x^7 + x^2 + x + 1 polynomial.
void dbl(uint8_t b[16]) {
  uint8_t carry = b[0] >> 7;
  for (int i = 0; i < 15; ++i) b[i] = static_cast<uint8_t>((b[i] << 1) | (b[i + 1] >> 7));
  b[15] = static_cast<uint8_t>((b[15] << 1) ^ (carry ? 0x87 : 0x00));
}

}  // namespace

AuthTag cmac_tag(const SymmetricKey& key, ByteView message) {
  Aes aes(key.material);

  uint8_t k1[16];
  std::memset(k1, 0, 16);
  aes.encrypt_block(k1, k1);
  dbl(k1);  // K1 = dbl(E_K(0))
  uint8_t k2[16];
  std::memcpy(k2, k1, 16);
  dbl(k2);  // K2 = dbl(K1)

  const size_t n = message.size();
  const size_t full = (n == 0) ? 0 : (n - 1) / 16;  // blocks before the last
  uint8_t last[16];
  if (n > 0 && n % 16 == 0) {
    for (int i = 0; i < 16; ++i) last[i] = static_cast<uint8_t>(message[full * 16 + i] ^ k1[i]);
  } else {
    std::memset(last, 0, 16);
    size_t rem = n - full * 16;
    if (rem > 0) std::memcpy(last, message.data() + full * 16, rem);
    last[rem] = 0x80;
    for (int i = 0; i < 16; ++i) last[i] ^= k2[i];
  }

  uint8_t x[16];
  std::memset(x, 0, 16);
  for (size_t b = 0; b < full; ++b) {
    for (int i = 0; i < 16; ++i) x[i] ^= message[b * 16 + i];
    aes.encrypt_block(x, x);
  }
  for (int i = 0; i < 16; ++i) x[i] ^= last[i];
  aes.encrypt_block(x, x);
  return AuthTag(x, x + 16);
}

// ---- CCM ----

namespace {

constexpr size_t kNonceOctets = 13;
constexpr size_t kQ = 15 - kNonceOctets;  // 2-octet payload-length field

bool valid_tag_len(size_t t) { return t >= 4 && t <= 16 && t % 2 == 0; }

// CBC-MAC over the B blocks, returning the untruncated 16-octet T.
void ccm_auth(const Aes& aes, ByteView nonce, ByteView aad, ByteView pt, size_t tag_octets,
              uint8_t t_out[16]) {
  uint8_t x[16];
  uint8_t b0[16];
  b0[0] = static_cast<uint8_t>((aad.empty() ? 0 : 0x40) | (((tag_octets - 2) / 2) << 3) | (kQ - 1));
  std::memcpy(b0 + 1, nonce.data(), kNonceOctets);
  b0[14] = static_cast<uint8_t>(pt.size() >> 8);
  b0[15] = static_cast<uint8_t>(pt.size() & 0xFF);
  aes.encrypt_block(b0, x);

  uint8_t block[16];
  size_t fill = 0;
  auto absorb = [&](uint8_t byte) {
    block[fill++] = byte;
    if (fill == 16) {
      for (int i = 0; i < 16; ++i) x[i] ^= block[i];
      aes.encrypt_block(x, x);
      fill = 0;
    }
  };
  auto pad_block = [&] {
    if (fill == 0) return;
    while (fill < 16) block[fill++] = 0;
    for (int i = 0; i < 16; ++i) x[i] ^= block[i];
    aes.encrypt_block(x, x);
    fill = 0;
  };

  if (!aad.empty()) {
    const size_t a = aad.size();
    if (a < 0x10000 - 0x100) {
      absorb(static_cast<uint8_t>(a >> 8));
      absorb(static_cast<uint8_t>(a & 0xFF));
    } else {
      absorb(0xFF);
      absorb(0xFE);
      absorb(static_cast<uint8_t>(a >> 24));
      absorb(static_cast<uint8_t>(a >> 16));
      absorb(static_cast<uint8_t>(a >> 8));
      absorb(static_cast<uint8_t>(a & 0xFF));
    }
    for (uint8_t byte : aad) absorb(byte);
    pad_block();
  }
  for (uint8_t byte : pt) absorb(byte);
  pad_block();
  std::memcpy(t_out, x, 16);
}

void ctr_block(const Aes& aes, ByteView nonce, uint16_t counter, uint8_t out[16]) {
  uint8_t a[16];
  a[0] = kQ - 1;
  std::memcpy(a + 1, nonce.data(), kNonceOctets);
  a[14] = static_cast<uint8_t>(counter >> 8);
  a[15] = static_cast<uint8_t>(counter & 0xFF);
  aes.encrypt_block(a, out);
}

}  // namespace

Result<Sealed> ccm_seal(const SymmetricKey& key, ByteView nonce13, ByteView aad, ByteView plaintext,
                        size_t tag_octets) {
  if (nonce13.size() != kNonceOctets || !valid_tag_len(tag_octets)) return Err::Usage;
  if (plaintext.size() > 0xFFFF) return Err::Usage;
  Aes aes(key.material);

  uint8_t t[16];
  ccm_auth(aes, nonce13, aad, plaintext, tag_octets, t);

  uint8_t s0[16];
  ctr_block(aes, nonce13, 0, s0);

  Sealed out;
  out.mic.resize(tag_octets);
  for (size_t i = 0; i < tag_octets; ++i) out.mic[i] = static_cast<uint8_t>(t[i] ^ s0[i]);

  out.ciphertext.resize(plaintext.size());
  uint8_t ks[16];
  for (size_t i = 0; i < plaintext.size(); ++i) {
    if (i % 16 == 0) ctr_block(aes, nonce13, static_cast<uint16_t>(i / 16 + 1), ks);
    out.ciphertext[i] = static_cast<uint8_t>(plaintext[i] ^ ks[i % 16]);
  }
  return out;
}

Result<Bytes> ccm_open(const SymmetricKey& key, ByteView nonce13, ByteView aad, ByteView ciphertext,
                       ByteView mic) {
  if (nonce13.size() != kNonceOctets || !valid_tag_len(mic.size())) return Err::Usage;
  if (ciphertext.size() > 0xFFFF) return Err::Usage;
  Aes aes(key.material);

  Bytes pt(ciphertext.size());
  uint8_t ks[16];
  for (size_t i = 0; i < ciphertext.size(); ++i) {
    if (i % 16 == 0) ctr_block(aes, nonce13, static_cast<uint16_t>(i / 16 + 1), ks);
    pt[i] = static_cast<uint8_t>(ciphertext[i] ^ ks[i % 16]);
  }

  uint8_t t[16];
  ccm_auth(aes, nonce13, aad, pt, mic.size(), t);
  uint8_t s0[16];
  ctr_block(aes, nonce13, 0, s0);
  Bytes expect(mic.size());
  for (size_t i = 0; i < mic.size(); ++i) expect[i] = static_cast<uint8_t>(t[i] ^ s0[i]);

  // No partial plaintext release on failure.
  if (!ct_equal(expect, mic)) return Err::AuthFailure;
  return pt;
}

Result<Sealed> ccm_seal(CipherFunction cipher, const SymmetricKey& key, ByteView nonce13,
                        ByteView aad, ByteView plaintext, size_t tag_octets) {
  if (cipher == CipherFunction::Camellia128Ccm) return Err::UnsupportedCipher;
  if (key.bits != cipher_key_bits(cipher)) return Err::Usage;
  return ccm_seal(key, nonce13, aad, plaintext, tag_octets);
}

Result<Bytes> ccm_open(CipherFunction cipher, const SymmetricKey& key, ByteView nonce13,
                       ByteView aad, ByteView ciphertext, ByteView mic) {
  if (cipher == CipherFunction::Camellia128Ccm) return Err::UnsupportedCipher;
  if (key.bits != cipher_key_bits(cipher)) return Err::Usage;
  return ccm_open(key, nonce13, aad, ciphertext, mic);
}

// ---- KDF ----

namespace {

bool known_label(std::string_view label) {
  return label == "PTK" || label == "KCK" || label == "KMAC" || label == "GTKWRAP";
}

}  // namespace

Result<SymmetricKey> derive_key(ByteView base_material, std::string_view label, ByteView context,
                                KeyBits out_bits, KeyRole role) {
  if (!known_label(label)) return Err::Usage;
  if (base_material.size() != 16 && base_material.size() != 32) return Err::Usage;
  SymmetricKey base{base_material.size() == 16 ? KeyBits::K128 : KeyBits::K256,
                    Bytes(base_material.begin(), base_material.end()), KeyRole::MK};

  const size_t out_len = key_octets(out_bits);
  Bytes out;
  uint8_t counter = 1;
  while (out.size() < out_len) {
    Bytes block_input;
    block_input.push_back(counter++);
    append(block_input, from_string(label));
    block_input.push_back(0x00);
    append(block_input, context);
    AuthTag block = cmac_tag(base, block_input);
    append(out, block);
  }
  out.resize(out_len);
  return SymmetricKey{out_bits, std::move(out), role};
}

Result<SymmetricKey> derive_key(const SymmetricKey& base, std::string_view label, ByteView context,
                                KeyBits out_bits, KeyRole role) {
  return derive_key(ByteView(base.material), label, context, out_bits, role);
}

Bytes fingerprint(ByteView material) {
  SymmetricKey zero{KeyBits::K128, Bytes(16, 0), KeyRole::MK};
  AuthTag t = cmac_tag(zero, material);
  t.resize(8);
  return t;
}

}  // namespace bansec::crypto
