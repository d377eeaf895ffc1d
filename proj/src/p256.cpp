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

#include "bansec/crypto/p256.hpp"

#include <cstring>

namespace bansec::crypto {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

// 256-bit values as 4 little-endian 64-bit limbs.
struct U256 {
  u64 v[4] = {0, 0, 0, 0};
  bool operator==(const U256&) const = default;
};

constexpr U256 kZero{};

U256 from_be(ByteView b) {
  U256 r;
  for (int i = 0; i < 4; ++i) {
    u64 w = 0;
    for (int k = 0; k < 8; ++k) w = (w << 8) | b[(3 - i) * 8 + k];
    r.v[i] = w;
  }
  return r;
}

void to_be(const U256& a, uint8_t out[32]) {
  for (int i = 0; i < 4; ++i) {
    u64 w = a.v[3 - i];
    for (int k = 0; k < 8; ++k) out[i * 8 + k] = static_cast<uint8_t>(w >> (56 - 8 * k));
  }
}

bool is_zero(const U256& a) { return (a.v[0] | a.v[1] | a.v[2] | a.v[3]) == 0; }

int cmp(const U256& a, const U256& b) {
  for (int i = 3; i >= 0; --i) {
    if (a.v[i] < b.v[i]) return -1;
    if (a.v[i] > b.v[i]) return 1;
  }
  return 0;
}

// returns carry
u64 add_raw(U256& r, const U256& a, const U256& b) {
  u128 c = 0;
  for (int i = 0; i < 4; ++i) {
    c += static_cast<u128>(a.v[i]) + b.v[i];
    r.v[i] = static_cast<u64>(c);
    c >>= 64;
  }
  return static_cast<u64>(c);
}

// returns borrow
u64 sub_raw(U256& r, const U256& a, const U256& b) {
  u128 borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 d = static_cast<u128>(a.v[i]) - b.v[i] - borrow;
    r.v[i] = static_cast<u64>(d);
    borrow = (d >> 64) & 1;
  }
  return static_cast<u64>(borrow);
}

// Montgomery arithmetic modulo a fixed odd modulus.
struct MontCtx {
  U256 mod;
  u64 n0;     // -mod^{-1} mod 2^64
  U256 rr;    // R^2 mod mod, R = 2^256
  U256 one_m; // R mod mod (Montgomery form of 1)
};

u64 inv64(u64 a) {
  // Newton iteration; a must be odd.
  u64 x = a;
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}

MontCtx make_ctx(const U256& mod) {
  MontCtx c;
  c.mod = mod;
  c.n0 = ~inv64(mod.v[0]) + 1;
  // R mod m: 2^256 - m * floor(2^256/m); for our moduli floor = 1.. compute by
  // subtraction loop from 0 - m (mod 2^256) = 2^256 - m which is < m only if
  // m > 2^255; our moduli are, so R mod m = 2^256 - m.
  U256 r_mod;
  sub_raw(r_mod, kZero, mod);  // 2^256 - m
  while (cmp(r_mod, mod) >= 0) sub_raw(r_mod, r_mod, mod);
  c.one_m = r_mod;
  // R^2 mod m by doubling R mod m 256 times.
  U256 acc = r_mod;
  for (int i = 0; i < 256; ++i) {
    U256 d;
    u64 carry = add_raw(d, acc, acc);
    if (carry || cmp(d, mod) >= 0) sub_raw(d, d, mod);
    acc = d;
  }
  c.rr = acc;
  return c;
}

U256 mont_mul(const MontCtx& c, const U256& a, const U256& b) {
  // CIOS: t has 6 limbs (t[4] plus one carry bit in t[5]).
  u64 t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    u128 carry = 0;
    for (int j = 0; j < 4; ++j) {
      carry += static_cast<u128>(a.v[i]) * b.v[j] + t[j];
      t[j] = static_cast<u64>(carry);
      carry >>= 64;
    }
    carry += t[4];
    t[4] = static_cast<u64>(carry);
    t[5] = static_cast<u64>(carry >> 64);

    u64 m = t[0] * c.n0;
    carry = static_cast<u128>(m) * c.mod.v[0] + t[0];
    carry >>= 64;
    for (int j = 1; j < 4; ++j) {
      carry += static_cast<u128>(m) * c.mod.v[j] + t[j];
      t[j - 1] = static_cast<u64>(carry);
      carry >>= 64;
    }
    carry += t[4];
    t[3] = static_cast<u64>(carry);
    t[4] = t[5] + static_cast<u64>(carry >> 64);
  }
  U256 r{t[0], t[1], t[2], t[3]};
  if (t[4] != 0 || cmp(r, c.mod) >= 0) sub_raw(r, r, c.mod);
  return r;
}

U256 to_mont(const MontCtx& c, const U256& a) { return mont_mul(c, a, c.rr); }
U256 from_mont(const MontCtx& c, const U256& a) {
  U256 one{1, 0, 0, 0};
  return mont_mul(c, a, one);
}

U256 add_mod(const MontCtx& c, const U256& a, const U256& b) {
  U256 r;
  u64 carry = add_raw(r, a, b);
  if (carry || cmp(r, c.mod) >= 0) sub_raw(r, r, c.mod);
  return r;
}

U256 sub_mod(const MontCtx& c, const U256& a, const U256& b) {
  U256 r;
  if (sub_raw(r, a, b)) add_raw(r, r, c.mod);
  return r;
}

U256 pow_mod(const MontCtx& c, const U256& base_m, const U256& exp) {
  U256 acc = c.one_m;
  for (int i = 255; i >= 0; --i) {
    acc = mont_mul(c, acc, acc);
    if ((exp.v[i / 64] >> (i % 64)) & 1) acc = mont_mul(c, acc, base_m);
  }
  return acc;
}

// Field inverse via Fermat: a^(p-2).
U256 inv_mod(const MontCtx& c, const U256& a_m) {
  U256 p_minus_2 = c.mod;
  U256 two{2, 0, 0, 0};
  sub_raw(p_minus_2, p_minus_2, two);
  return pow_mod(c, a_m, p_minus_2);
}

const U256 kP = from_be(from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff"));
const U256 kN = from_be(from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"));
const U256 kB = from_be(from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"));
const U256 kGx = from_be(from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"));
const U256 kGy = from_be(from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"));

const MontCtx& fp() {
  static const MontCtx ctx = make_ctx(kP);
  return ctx;
}
const MontCtx& fn() {
  static const MontCtx ctx = make_ctx(kN);
  return ctx;
}

// Jacobian point, coordinates in Montgomery form. Z == 0 marks the identity.
struct Jac {
  U256 x, y, z;
};

struct AffM {
  U256 x, y;  // Montgomery form
};

Jac jac_identity() { return Jac{kZero, kZero, kZero}; }
bool jac_is_identity(const Jac& p) { return is_zero(p.z); }

Jac to_jac(const AffM& a) { return Jac{a.x, a.y, fp().one_m}; }

// dbl-2001-b for a = -3.
Jac jac_double(const Jac& p) {
  const MontCtx& c = fp();
  if (jac_is_identity(p) || is_zero(p.y)) return jac_identity();
  U256 delta = mont_mul(c, p.z, p.z);
  U256 gamma = mont_mul(c, p.y, p.y);
  U256 beta = mont_mul(c, p.x, gamma);
  U256 t1 = sub_mod(c, p.x, delta);
  U256 t2 = add_mod(c, p.x, delta);
  U256 m = mont_mul(c, t1, t2);
  U256 alpha = add_mod(c, add_mod(c, m, m), m);
  Jac r;
  U256 beta4 = add_mod(c, beta, beta);
  beta4 = add_mod(c, beta4, beta4);
  U256 beta8 = add_mod(c, beta4, beta4);
  r.x = sub_mod(c, mont_mul(c, alpha, alpha), beta8);
  U256 zy = add_mod(c, p.y, p.z);
  r.z = sub_mod(c, sub_mod(c, mont_mul(c, zy, zy), gamma), delta);
  U256 g2 = mont_mul(c, gamma, gamma);
  U256 g8 = add_mod(c, g2, g2);
  g8 = add_mod(c, g8, g8);
  g8 = add_mod(c, g8, g8);
  r.y = sub_mod(c, mont_mul(c, alpha, sub_mod(c, beta4, r.x)), g8);
  return r;
}

// add-2007-bl, general Jacobian addition.
Jac jac_add(const Jac& p, const Jac& q) {
  const MontCtx& c = fp();
  if (jac_is_identity(p)) return q;
  if (jac_is_identity(q)) return p;
  U256 z1z1 = mont_mul(c, p.z, p.z);
  U256 z2z2 = mont_mul(c, q.z, q.z);
  U256 u1 = mont_mul(c, p.x, z2z2);
  U256 u2 = mont_mul(c, q.x, z1z1);
  U256 s1 = mont_mul(c, p.y, mont_mul(c, q.z, z2z2));
  U256 s2 = mont_mul(c, q.y, mont_mul(c, p.z, z1z1));
  U256 h = sub_mod(c, u2, u1);
  U256 r0 = sub_mod(c, s2, s1);
  if (is_zero(h)) {
    if (is_zero(r0)) return jac_double(p);
    return jac_identity();
  }
  U256 h2 = add_mod(c, h, h);
  U256 i = mont_mul(c, h2, h2);
  U256 j = mont_mul(c, h, i);
  U256 r = add_mod(c, r0, r0);
  U256 v = mont_mul(c, u1, i);
  Jac out;
  out.x = sub_mod(c, sub_mod(c, mont_mul(c, r, r), j), add_mod(c, v, v));
  U256 s1j = mont_mul(c, s1, j);
  out.y = sub_mod(c, mont_mul(c, r, sub_mod(c, v, out.x)), add_mod(c, s1j, s1j));
  U256 zz = add_mod(c, p.z, q.z);
  zz = sub_mod(c, sub_mod(c, mont_mul(c, zz, zz), z1z1), z2z2);
  out.z = mont_mul(c, zz, h);
  return out;
}

Result<AffM> jac_to_affine(const Jac& p) {
  if (jac_is_identity(p)) return Err::Crypto;
  const MontCtx& c = fp();
  U256 zinv = inv_mod(c, p.z);
  U256 zinv2 = mont_mul(c, zinv, zinv);
  AffM a;
  a.x = mont_mul(c, p.x, zinv2);
  a.y = mont_mul(c, p.y, mont_mul(c, zinv2, zinv));
  return a;
}

// 4-bit fixed-window scalar multiplication, most significant nibble first.
Jac scalar_mul(const U256& scalar_be_reduced, const AffM& point) {
  Jac table[16];
  table[0] = jac_identity();
  table[1] = to_jac(point);
  for (int i = 2; i < 16; ++i) table[i] = jac_add(table[i - 1], table[1]);

  Jac acc = jac_identity();
  for (int limb = 3; limb >= 0; --limb) {
    for (int shift = 60; shift >= 0; shift -= 4) {
      if (!(limb == 3 && shift == 60)) {
        acc = jac_double(acc);
        acc = jac_double(acc);
        acc = jac_double(acc);
        acc = jac_double(acc);
      }
      unsigned nib = static_cast<unsigned>((scalar_be_reduced.v[limb] >> shift) & 0xF);
      if (nib) acc = jac_add(acc, table[nib]);
    }
  }
  return acc;
}

bool on_curve_m(const AffM& a) {
  const MontCtx& c = fp();
  U256 y2 = mont_mul(c, a.y, a.y);
  U256 x2 = mont_mul(c, a.x, a.x);
  U256 x3 = mont_mul(c, x2, a.x);
  U256 threex = add_mod(c, add_mod(c, a.x, a.x), a.x);
  U256 rhs = add_mod(c, sub_mod(c, x3, threex), to_mont(c, kB));
  return y2 == rhs;
}

Result<AffM> load_point(const P256Point& p) {
  U256 x = from_be(p.x);
  U256 y = from_be(p.y);
  if (cmp(x, kP) >= 0 || cmp(y, kP) >= 0) return Err::InvalidPublicKey;
  if (is_zero(x) && is_zero(y)) return Err::InvalidPublicKey;  // identity encoding
  const MontCtx& c = fp();
  AffM a{to_mont(c, x), to_mont(c, y)};
  if (!on_curve_m(a)) return Err::InvalidPublicKey;
  return a;
}

P256Point store_point(const AffM& a) {
  const MontCtx& c = fp();
  P256Point p;
  to_be(from_mont(c, a.x), p.x.data());
  to_be(from_mont(c, a.y), p.y.data());
  return p;
}

Result<U256> load_scalar(ByteView scalar32) {
  if (scalar32.size() != 32) return Err::Usage;
  U256 s = from_be(scalar32);
  while (cmp(s, kN) >= 0) sub_raw(s, s, kN);
  if (is_zero(s)) return Err::Crypto;
  return s;
}

const AffM& base_point_m() {
  static const AffM g{to_mont(fp(), kGx), to_mont(fp(), kGy)};
  return g;
}

}  // namespace

Bytes P256Point::encode() const {
  Bytes out;
  out.reserve(64);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

Result<P256Point> P256Point::decode(ByteView octets64) {
  if (octets64.size() != 64) return Err::InvalidPublicKey;
  P256Point p;
  std::memcpy(p.x.data(), octets64.data(), 32);
  std::memcpy(p.y.data(), octets64.data() + 32, 32);
  if (!p256_on_curve(p)) return Err::InvalidPublicKey;
  return p;
}

bool p256_on_curve(const P256Point& p) { return load_point(p).ok(); }

Result<P256Point> p256_base_mul(ByteView scalar32) {
  auto s = load_scalar(scalar32);
  if (!s) return s.error();
  auto aff = jac_to_affine(scalar_mul(*s, base_point_m()));
  if (!aff) return aff.error();
  return store_point(*aff);
}

Result<P256Point> p256_mul(ByteView scalar32, const P256Point& point) {
  auto s = load_scalar(scalar32);
  if (!s) return s.error();
  auto pm = load_point(point);
  if (!pm) return pm.error();
  auto aff = jac_to_affine(scalar_mul(*s, *pm));
  if (!aff) return aff.error();
  return store_point(*aff);
}

Result<P256Point> p256_add(const P256Point& a, const P256Point& b) {
  auto am = load_point(a);
  if (!am) return am.error();
  auto bm = load_point(b);
  if (!bm) return bm.error();
  auto sum = jac_to_affine(jac_add(to_jac(*am), to_jac(*bm)));
  if (!sum) return sum.error();
  return store_point(*sum);
}

Result<P256Point> p256_negate(const P256Point& p) {
  auto pm = load_point(p);
  if (!pm) return pm.error();
  AffM neg{pm->x, sub_mod(fp(), kZero, pm->y)};
  return store_point(neg);
}

std::array<uint8_t, 32> p256_scalar_from_bytes(ByteView bytes32) {
  U256 s = from_be(bytes32.subspan(0, 32));
  while (cmp(s, kN) >= 0) sub_raw(s, s, kN);
  if (is_zero(s)) s.v[0] = 1;
  std::array<uint8_t, 32> out{};
  to_be(s, out.data());
  return out;
}

Result<KeyPair> generate_keypair(RandomSource& entropy) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Bytes candidate = entropy.bytes(32);
    U256 s = from_be(candidate);
    if (is_zero(s) || cmp(s, kN) >= 0) continue;
    KeyPair kp;
    std::memcpy(kp.private_scalar.data(), candidate.data(), 32);
    auto pub = p256_base_mul(kp.private_scalar);
    if (!pub) continue;
    kp.public_point = *pub;
    return kp;
  }
  return Err::Crypto;
}

Result<Bytes> derive_shared_secret(ByteView own_private32, const P256Point& peer) {
  auto shared = p256_mul(own_private32, peer);
  if (!shared) return shared.error();
  return Bytes(shared->x.begin(), shared->x.end());
}

}  // namespace bansec::crypto
