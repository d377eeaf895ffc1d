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

#ifndef BANSEC_CRYPTO_P256_HPP_
#define BANSEC_CRYPTO_P256_HPP_

#include <array>

#include "bansec/bytes.hpp"
#include "bansec/result.hpp"
#include "bansec/rng.hpp"

namespace bansec::crypto {

// NIST P-256 (FIPS 186) group operations: enough for ECDH key agreement with
// full public-point validation. Variable-time arithmetic; side-channel
// hardening is out of scope here.

struct P256Point {
  std::array<uint8_t, 32> x{};  // big-endian affine coordinates
  std::array<uint8_t, 32> y{};

  Bytes encode() const;                               // 64 octets, X || Y
  static Result<P256Point> decode(ByteView octets64);  // validates on-curve

  bool operator==(const P256Point&) const = default;
};

struct KeyPair {
  std::array<uint8_t, 32> private_scalar{};  // big-endian, in [1, n-1]
  P256Point public_point;
};

// True iff the coordinates are in field range and satisfy the curve equation.
bool p256_on_curve(const P256Point& p);

// scalar * G. Fails only for scalar == 0 mod n.
Result<P256Point> p256_base_mul(ByteView scalar32);

// General scalar multiplication with point validation.
Result<P256Point> p256_mul(ByteView scalar32, const P256Point& point);

// Affine point addition (used by the password-blinded association protocol).
// Returns Err::Crypto if the sum is the identity.
Result<P256Point> p256_add(const P256Point& a, const P256Point& b);

Result<P256Point> p256_negate(const P256Point& p);

// Reduce 32 arbitrary octets to a nonzero scalar mod n.
std::array<uint8_t, 32> p256_scalar_from_bytes(ByteView bytes32);

// Deterministic when given a seeded source; key-quality entropy is the
// caller's responsibility in library mode.
Result<KeyPair> generate_keypair(RandomSource& entropy);

// x-coordinate of own * peer, fixed-width 32 octets. The peer point MUST
// validate: on curve, not the identity, coordinates in range.
Result<Bytes> derive_shared_secret(ByteView own_private32, const P256Point& peer);

}  // namespace bansec::crypto

#endif  // BANSEC_CRYPTO_P256_HPP_
