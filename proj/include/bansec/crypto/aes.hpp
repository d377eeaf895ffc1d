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

#ifndef BANSEC_CRYPTO_AES_HPP_
#define BANSEC_CRYPTO_AES_HPP_

#include <array>
#include <cstdint>

#include "bansec/bytes.hpp"

namespace bansec::crypto {

// AES forward cipher (FIPS 197), 128- or 256-bit keys. CMAC and CCM only ever
// need the encryption direction.
class Aes {
 public:
  // key.size() must be 16 or 32.
  explicit Aes(ByteView key);

  void encrypt_block(const uint8_t in[16], uint8_t out[16]) const;

  int rounds() const { return rounds_; }

 private:
  std::array<uint8_t, 240> round_keys_{};  // up to 15 round keys of 16 bytes
  int rounds_ = 0;
};

}  // namespace bansec::crypto

#endif  // BANSEC_CRYPTO_AES_HPP_
