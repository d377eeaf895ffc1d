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

#include "bansec/crypto/vectors.hpp"

#include "bansec/crypto/aes.hpp"
#include "bansec/crypto/p256.hpp"
#include "bansec/crypto/suite.hpp"

namespace bansec::crypto {

namespace {

struct CmacVector {
  const char* name;
  const char* key;
  const char* msg;
  const char* tag;
};

// NIST SP 800-38B examples, AES-128 (D.1) and AES-256 (D.3).
const CmacVector kCmacVectors[] = {
    {"cmac-aes128-m0", "2b7e151628aed2a6abf7158809cf4f3c", "", "bb1d6929e95937287fa37d129b756746"},
    {"cmac-aes128-m16", "2b7e151628aed2a6abf7158809cf4f3c", "6bc1bee22e409f96e93d7e117393172a",
     "070a16b46b4d4144f79bdd9dd04a287c"},
    {"cmac-aes128-m40", "2b7e151628aed2a6abf7158809cf4f3c",
     "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411",
     "dfa66747de9ae63030ca32611497c827"},
    {"cmac-aes128-m64", "2b7e151628aed2a6abf7158809cf4f3c",
     "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411"
     "e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710",
     "51f0bebf7e3b9d92fc49741779363cfe"},
    {"cmac-aes256-m0", "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4", "",
     "028962f61b7bf89efc6b551f4667d983"},
    {"cmac-aes256-m16", "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4",
     "6bc1bee22e409f96e93d7e117393172a", "28a7023f452e8f82bd4bf28d8c37c35c"},
    {"cmac-aes256-m40", "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4",
     "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411",
     "aaf3d8f1de5640c232f5b169b9c911e6"},
    {"cmac-aes256-m64", "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4",
     "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e5130c81c46a35ce411"
     "e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710",
     "e1992190549f6ed5696a2c056c315410"},
};

struct CcmVector {
  const char* name;
  const char* key;
  const char* nonce;  // 13 octets
  const char* aad;
  const char* pt;
  const char* ct;
  const char* tag;
};

// RFC 3610 packet vectors 1-4; every nonce is 13 octets as required here.
const CcmVector kCcmVectors[] = {
    {"ccm-rfc3610-1", "c0c1c2c3c4c5c6c7c8c9cacbcccdcecf", "00000003020100a0a1a2a3a4a5",
     "0001020304050607", "08090a0b0c0d0e0f101112131415161718191a1b1c1d1e",
     "588c979a61c663d2f066d0c2c0f989806d5f6b61dac384", "17e8d12cfdf926e0"},
    {"ccm-rfc3610-2", "c0c1c2c3c4c5c6c7c8c9cacbcccdcecf", "00000004030201a0a1a2a3a4a5",
     "0001020304050607", "08090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
     "72c91a36e135f8cf291ca894085c87e3cc15c439c9e43a3b", "a091d56e10400916"},
    {"ccm-rfc3610-3", "c0c1c2c3c4c5c6c7c8c9cacbcccdcecf", "00000005040302a0a1a2a3a4a5",
     "0001020304050607", "08090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f20",
     "51b1e5f44a197d1da46b0f8e2d282ae871e838bb64da859657", "4adaa76fbd9fb0c5"},
    {"ccm-rfc3610-4", "c0c1c2c3c4c5c6c7c8c9cacbcccdcecf", "00000006050403a0a1a2a3a4a5",
     "000102030405060708090a0b", "0c0d0e0f101112131415161718191a1b1c1d1e",
     "a28c6865939a9a79faaa5c4c2a9d4a91cdac8c", "96c861b9c9e61ef1"},
};

bool check_aes_block(const char* keyhex, const char* pthex, const char* cthex) {
  Aes aes(from_hex(keyhex));
  Bytes pt = from_hex(pthex);
  uint8_t out[16];
  aes.encrypt_block(pt.data(), out);
  return ct_equal(ByteView(out, 16), from_hex(cthex));
}

bool check_cmac(const CmacVector& v) {
  Bytes keyb = from_hex(v.key);
  auto key = SymmetricKey::make(keyb.size() == 16 ? KeyBits::K128 : KeyBits::K256, keyb,
                                KeyRole::KCK);
  if (!key) return false;
  return ct_equal(cmac_tag(*key, from_hex(v.msg)), from_hex(v.tag));
}

bool check_ccm(const CcmVector& v) {
  Bytes keyb = from_hex(v.key);
  auto key = SymmetricKey::make(keyb.size() == 16 ? KeyBits::K128 : KeyBits::K256, keyb,
                                KeyRole::PTK);
  if (!key) return false;
  Bytes tag = from_hex(v.tag);
  auto sealed = ccm_seal(*key, from_hex(v.nonce), from_hex(v.aad), from_hex(v.pt), tag.size());
  if (!sealed) return false;
  if (!ct_equal(sealed->ciphertext, from_hex(v.ct)) || !ct_equal(sealed->mic, tag)) return false;
  auto opened = ccm_open(*key, from_hex(v.nonce), from_hex(v.aad), sealed->ciphertext, sealed->mic);
  return opened.ok() && ct_equal(*opened, from_hex(v.pt));
}

// NIST SP 800-38C Example 4: the 13-octet-nonce case, 65536-octet AAD.
bool check_ccm_38c_example4() {
  Bytes aad;
  aad.reserve(65536);
  for (int rep = 0; rep < 256; ++rep) {
    for (int b = 0; b < 256; ++b) aad.push_back(static_cast<uint8_t>(b));
  }
  auto key = SymmetricKey::make(KeyBits::K128, from_hex("404142434445464748494a4b4c4d4e4f"),
                                KeyRole::PTK);
  auto sealed = ccm_seal(
      *key, from_hex("101112131415161718191a1b1c"), aad,
      from_hex("202122232425262728292a2b2c2d2e2f303132333435363738393a3b3c3d3e3f"), 14);
  if (!sealed) return false;
  return ct_equal(sealed->ciphertext,
                  from_hex("69915dad1e84c6376a68c2967e4dab615ae0fd1faec44cc484828529463ccf72")) &&
         ct_equal(sealed->mic, from_hex("b4ac6bec93e8598e7f0dadbcea5b"));
}

// RFC 5903 section 8.1: P-256 scalar multiplication and shared-secret vectors.
const char* kDhPrivI = "c88f01f510d9ac3f70a292daa2316de544e9aab8afe84049c62a9c57862d1433";
const char* kDhPubIx = "dad0b65394221cf9b051e1feca5787d098dfe637fc90b9ef945d0c3772581180";
const char* kDhPubIy = "5271a0461cdb8252d61f1c456fa3e59ab1f45b33accf5f58389e0577b8990bb3";
const char* kDhPrivR = "c6ef9c5d78ae012a011164acb397ce2088685d8f06bf9be0b283ab46476bee53";
const char* kDhPubRx = "d12dfb5289c8d4f81208b70270398c342296970a0bccb74c736fc7554494bf63";
const char* kDhPubRy = "56fbf3ca366cc23e8157854c13c58d6aac23f046ada30f8353e74f33039872ab";
const char* kDhShared = "d6840f6b42f6edafd13116e0e12565202fef8e9ece7dce03812464d04b9442de";

P256Point point_from_hex(const char* xh, const char* yh) {
  P256Point p;
  Bytes x = from_hex(xh), y = from_hex(yh);
  std::copy(x.begin(), x.end(), p.x.begin());
  std::copy(y.begin(), y.end(), p.y.begin());
  return p;
}

bool check_p256_scalar_mult(const char* priv, const char* pubx, const char* puby) {
  auto pub = p256_base_mul(from_hex(priv));
  return pub.ok() && *pub == point_from_hex(pubx, puby);
}

bool check_p256_shared(const char* own, const char* peerx, const char* peery) {
  auto shared = derive_shared_secret(from_hex(own), point_from_hex(peerx, peery));
  return shared.ok() && ct_equal(*shared, from_hex(kDhShared));
}

}  // namespace

std::vector<VectorResult> run_vector_selftest(std::ostream& out) {
  std::vector<VectorResult> results;
  auto record = [&](std::string name, bool pass) {
    out << (pass ? "PASS  " : "FAIL  ") << name << "\n";
    results.push_back({std::move(name), pass});
  };

  record("aes128-fips197", check_aes_block("000102030405060708090a0b0c0d0e0f",
                                           "00112233445566778899aabbccddeeff",
                                           "69c4e0d86a7b0430d8cdb78070b4c55a"));
  record("aes256-fips197",
         check_aes_block("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f",
                         "00112233445566778899aabbccddeeff",
                         "8ea2b7ca516745bfeafc49904b496089"));
  for (const auto& v : kCmacVectors) record(v.name, check_cmac(v));
  for (const auto& v : kCcmVectors) record(v.name, check_ccm(v));
  record("ccm-sp800-38c-ex4", check_ccm_38c_example4());
  record("p256-mul-i", check_p256_scalar_mult(kDhPrivI, kDhPubIx, kDhPubIy));
  record("p256-mul-r", check_p256_scalar_mult(kDhPrivR, kDhPubRx, kDhPubRy));
  record("p256-ecdh-i", check_p256_shared(kDhPrivI, kDhPubRx, kDhPubRy));
  record("p256-ecdh-r", check_p256_shared(kDhPrivR, kDhPubIx, kDhPubIy));
  return results;
}

bool all_vectors_pass(std::ostream& out) {
  auto results = run_vector_selftest(out);
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace bansec::crypto
