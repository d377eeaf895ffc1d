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

#include <sstream>

#include "bansec/crypto/p256.hpp"
#include "bansec/crypto/suite.hpp"
#include "bansec/crypto/vectors.hpp"
#include "bansec/rng.hpp"

using namespace bansec;
using namespace bansec::crypto;

namespace {

SymmetricKey key128(uint8_t fill) {
  return *SymmetricKey::make(KeyBits::K128, Bytes(16, fill), KeyRole::PTK);
}

Bytes nonce13(uint8_t fill) { return Bytes(13, fill); }

}  // namespace

TEST_CASE("embedded known-answer vectors all pass") {
  std::ostringstream sink;
  auto results = run_vector_selftest(sink);
  CHECK(results.size() >= 19);
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("cmac is deterministic and sensitive to single-bit flips") {
  SymmetricKey k = key128(0x42);
  Bytes msg = from_hex("00112233445566778899aabbccddeeff0102");
  AuthTag t1 = cmac_tag(k, msg);
  AuthTag t2 = cmac_tag(k, msg);
  CHECK(t1 == t2);
  for (size_t byte = 0; byte < msg.size(); byte += 5) {
    Bytes tampered = msg;
    tampered[byte] ^= 0x01;
    CHECK(cmac_tag(k, tampered) != t1);
  }
}

TEST_CASE("tag algorithm slot reroutes only long messages") {
  TagAlgorithmSlot slot;
  SymmetricKey k = key128(0x10);
  Bytes short_msg(20, 0xAA);
  Bytes long_msg(48);
  for (size_t i = 0; i < long_msg.size(); ++i) long_msg[i] = static_cast<uint8_t>(i);
  CHECK(slot.compute(k, short_msg) == cmac_tag(k, short_msg));
  CHECK(slot.compute(k, long_msg) == cmac_tag(k, long_msg));

  slot.set_long_message_alternative(
      [](const SymmetricKey& key, ByteView msg) {
        // Stand-in alternative: CMAC with reversed input.
        Bytes rev(msg.rbegin(), msg.rend());
        return cmac_tag(key, rev);
      });
  CHECK(slot.compute(k, short_msg) == cmac_tag(k, short_msg));
  CHECK(slot.compute(k, long_msg) != cmac_tag(k, long_msg));
  Bytes rev(long_msg.rbegin(), long_msg.rend());
  CHECK(slot.compute(k, long_msg) == cmac_tag(k, rev));
}

TEST_CASE("ccm seal/open round-trips and auth-only mode") {
  SymmetricKey k = key128(0x7E);
  Bytes aad = from_hex("a0a1a2a3");
  Bytes pt = from_hex("deadbeef00112233445566");

  auto sealed = ccm_seal(k, nonce13(1), aad, pt, 8);
  REQUIRE(sealed.ok());
  CHECK(sealed->ciphertext.size() == pt.size());
  CHECK(sealed->mic.size() == 8);
  auto opened = ccm_open(k, nonce13(1), aad, sealed->ciphertext, sealed->mic);
  REQUIRE(opened.ok());
  CHECK(*opened == pt);

  // Level 1 semantics: nothing encrypted, everything authenticated.
  auto auth_only = ccm_seal(k, nonce13(2), pt, Bytes{}, 8);
  REQUIRE(auth_only.ok());
  CHECK(auth_only->ciphertext.empty());
  CHECK(auth_only->mic.size() == 8);
  CHECK(ccm_open(k, nonce13(2), pt, Bytes{}, auth_only->mic).ok());
}

TEST_CASE("ccm rejects any single-bit modification") {
  SymmetricKey k = key128(0x33);
  Bytes aad = from_hex("0102030405");
  Bytes pt = from_hex("101112131415161718191a1b1c1d1e1f2021");
  Bytes nonce = nonce13(9);
  auto sealed = ccm_seal(k, nonce, aad, pt, 8);
  REQUIRE(sealed.ok());

  auto expect_reject = [&](ByteView n, ByteView a, ByteView ct, ByteView mic) {
    auto r = ccm_open(k, n, a, ct, mic);
    CHECK(!r.ok());
    if (!r.ok()) CHECK(r.error() == Err::AuthFailure);
  };

  for (size_t i = 0; i < sealed->ciphertext.size(); ++i) {
    Bytes ct = sealed->ciphertext;
    ct[i] ^= 1u << (i % 8);
    expect_reject(nonce, aad, ct, sealed->mic);
  }
  for (size_t i = 0; i < aad.size(); ++i) {
    Bytes a = aad;
    a[i] ^= 1u << (i % 8);
    expect_reject(nonce, a, sealed->ciphertext, sealed->mic);
  }
  for (size_t i = 0; i < nonce.size(); ++i) {
    Bytes n = nonce;
    n[i] ^= 1u << (i % 8);
    expect_reject(n, aad, sealed->ciphertext, sealed->mic);
  }
  for (size_t i = 0; i < sealed->mic.size(); ++i) {
    Bytes mic = sealed->mic;
    mic[i] ^= 1u << (i % 8);
    expect_reject(nonce, aad, sealed->ciphertext, mic);
  }
}

TEST_CASE("ccm open fails under wrong keys, sampled") {
  SymmetricKey k = key128(0x55);
  Bytes pt = from_hex("00ff00ff00ff");
  auto sealed = ccm_seal(k, nonce13(3), Bytes{}, pt, 8);
  REQUIRE(sealed.ok());

  DetRng rng(1234);
  int accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes material = rng.bytes(16);
    if (material == k.material) continue;
    auto wrong = SymmetricKey::make(KeyBits::K128, material, KeyRole::PTK);
    if (ccm_open(*wrong, nonce13(3), Bytes{}, sealed->ciphertext, sealed->mic).ok()) ++accepted;
  }
  CHECK(accepted == 0);
}

TEST_CASE("camellia slot reports UnsupportedCipher, never substitutes") {
  SymmetricKey k = key128(0x01);
  auto sealed = ccm_seal(CipherFunction::Camellia128Ccm, k, nonce13(0), Bytes{}, Bytes{2, 2}, 8);
  REQUIRE(!sealed.ok());
  CHECK(sealed.error() == Err::UnsupportedCipher);
  auto opened = ccm_open(CipherFunction::Camellia128Ccm, k, nonce13(0), Bytes{}, Bytes{}, Bytes(8, 0));
  REQUIRE(!opened.ok());
  CHECK(opened.error() == Err::UnsupportedCipher);

  // The AES-256 route is a real cipher, not a stub.
  auto k256 = SymmetricKey::make(KeyBits::K256, Bytes(32, 0x44), KeyRole::PTK);
  CHECK(ccm_seal(CipherFunction::Aes256Ccm, *k256, nonce13(0), Bytes{}, Bytes{2, 2}, 8).ok());
}

TEST_CASE("seal guard flags nonce reuse") {
  SealGuard guard;
  CHECK(guard.check_and_record(nonce13(1)).ok());
  CHECK(guard.check_and_record(nonce13(2)).ok());
  auto reuse = guard.check_and_record(nonce13(1));
  REQUIRE(!reuse.ok());
  CHECK(reuse.error() == Err::NonceReuse);
}

TEST_CASE("derive_key contract") {
  SymmetricKey base = key128(0x77);
  Bytes ctx = from_hex("c0ffee");

  auto ptk = derive_key(base, "PTK", ctx, KeyBits::K128, KeyRole::PTK);
  auto kck = derive_key(base, "KCK", ctx, KeyBits::K128, KeyRole::KCK);
  auto kmac = derive_key(base, "KMAC", ctx, KeyBits::K128, KeyRole::KCK);
  auto wrap = derive_key(base, "GTKWRAP", ctx, KeyBits::K128, KeyRole::GTK);
  REQUIRE(ptk.ok());
  REQUIRE(kck.ok());
  REQUIRE(kmac.ok());
  REQUIRE(wrap.ok());
  CHECK(ptk->material != kck->material);
  CHECK(ptk->material != kmac->material);
  CHECK(kck->material != kmac->material);
  CHECK(wrap->material != ptk->material);

  auto wide = derive_key(base, "PTK", ctx, KeyBits::K256, KeyRole::PTK);
  REQUIRE(wide.ok());
  CHECK(wide->material.size() == 32);

  auto bad = derive_key(base, "SESSION", ctx, KeyBits::K128, KeyRole::PTK);
  REQUIRE(!bad.ok());
  CHECK(bad.error() == Err::Usage);
}

TEST_CASE("derive_key agrees with the direct CMAC-counter oracle") {
  DetRng rng(99);
  for (int i = 0; i < 100; ++i) {
    Bytes base = rng.bytes(i % 2 ? 16 : 32);
    Bytes ctx = rng.bytes(i % 7);
    auto derived = derive_key(base, "KCK", ctx, KeyBits::K256, KeyRole::KCK);
    REQUIRE(derived.ok());

    auto base_key = SymmetricKey::make(base.size() == 16 ? KeyBits::K128 : KeyBits::K256, base,
                                       KeyRole::MK);
    Bytes in1 = {0x01, 'K', 'C', 'K', 0x00};
    append(in1, ctx);
    Bytes in2 = {0x02, 'K', 'C', 'K', 0x00};
    append(in2, ctx);
    Bytes expect = cmac_tag(*base_key, in1);
    append(expect, cmac_tag(*base_key, in2));
    CHECK(derived->material == expect);
  }
}

TEST_CASE("p256 keypair generation") {
  DetRng a(42), b(42);
  auto kp1 = generate_keypair(a);
  auto kp2 = generate_keypair(b);
  REQUIRE(kp1.ok());
  REQUIRE(kp2.ok());
  CHECK(kp1->private_scalar == kp2->private_scalar);
  CHECK(kp1->public_point == kp2->public_point);
  CHECK(p256_on_curve(kp1->public_point));
}

TEST_CASE("system entropy source yields valid keypairs in library mode") {
  SystemRng entropy;
  auto kp = generate_keypair(entropy);
  REQUIRE(kp.ok());
  CHECK(p256_on_curve(kp->public_point));
}

TEST_CASE("dh symmetry over random keypairs") {
  DetRng rng(7);
  for (int i = 0; i < 1000; ++i) {
    DetRng ra = rng.split(2 * i), rb = rng.split(2 * i + 1);
    auto a = generate_keypair(ra);
    auto b = generate_keypair(rb);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    auto s1 = derive_shared_secret(a->private_scalar, b->public_point);
    auto s2 = derive_shared_secret(b->private_scalar, a->public_point);
    REQUIRE(s1.ok());
    REQUIRE(s2.ok());
    CHECK(*s1 == *s2);
  }
}

TEST_CASE("peer point validation") {
  DetRng rng(5);
  auto kp = generate_keypair(rng);
  REQUIRE(kp.ok());

  SUBCASE("off-curve point rejected") {
    P256Point bad = kp->public_point;
    bad.y[31] ^= 0x01;  // perturb y so y^2 != x^3 - 3x + b
    auto r = derive_shared_secret(kp->private_scalar, bad);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::InvalidPublicKey);
  }
  SUBCASE("identity encoding rejected") {
    P256Point ident{};  // all-zero encoding
    auto r = derive_shared_secret(kp->private_scalar, ident);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::InvalidPublicKey);
  }
  SUBCASE("out-of-range coordinate rejected") {
    P256Point bad = kp->public_point;
    for (auto& byte : bad.x) byte = 0xFF;  // x >= p
    auto r = derive_shared_secret(kp->private_scalar, bad);
    REQUIRE(!r.ok());
    CHECK(r.error() == Err::InvalidPublicKey);
  }
}

TEST_CASE("p256 point addition and negation are consistent") {
  DetRng rng(11);
  auto kp = generate_keypair(rng);
  auto kq = generate_keypair(rng);
  REQUIRE(kp.ok());
  REQUIRE(kq.ok());

  auto sum = p256_add(kp->public_point, kq->public_point);
  REQUIRE(sum.ok());
  CHECK(p256_on_curve(*sum));

  // (P + Q) + (-Q) == P
  auto neg = p256_negate(kq->public_point);
  REQUIRE(neg.ok());
  auto back = p256_add(*sum, *neg);
  REQUIRE(back.ok());
  CHECK(*back == kp->public_point);

  // P + (-P) is the identity and reports Crypto.
  auto negp = p256_negate(kp->public_point);
  auto ident = p256_add(kp->public_point, *negp);
  REQUIRE(!ident.ok());
  CHECK(ident.error() == Err::Crypto);
}

TEST_CASE("fingerprint is a stable short identifier") {
  Bytes m = from_hex("0011223344");
  CHECK(fingerprint(m) == fingerprint(m));
  CHECK(fingerprint(m).size() == 8);
  CHECK(fingerprint(m) != fingerprint(from_hex("0011223345")));
}
