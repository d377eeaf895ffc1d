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

#ifndef BANSEC_RNG_HPP_
#define BANSEC_RNG_HPP_

#include <cstdint>
#include <string_view>

#include "bansec/bytes.hpp"

namespace bansec {

class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(uint8_t* out, size_t len) = 0;

  Bytes bytes(size_t len) {
    Bytes out(len);
    fill(out.data(), len);
    return out;
  }
  uint64_t next_u64() {
    uint8_t b[8];
    fill(b, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
    return v;
  }
  // Uniform in [0, bound). bound must be nonzero.
  uint64_t next_below(uint64_t bound);
};

// Deterministic splittable generator (splitmix64 core). All simulator
// randomness flows from one seed through labeled substreams, so a run is a
// pure function of (config, seed).
class DetRng final : public RandomSource {
 public:
  explicit DetRng(uint64_t seed) : state_(seed ^ kGolden) {}

  void fill(uint8_t* out, size_t len) override;

  // Independent substream derived from this generator's seed and a label.
  DetRng split(std::string_view label) const;
  DetRng split(uint64_t salt) const;

 private:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static uint64_t mix(uint64_t z);
  uint64_t next();
  uint64_t state_;
};

// Key-quality source for library (non-simulation) use.
class SystemRng final : public RandomSource {
 public:
  void fill(uint8_t* out, size_t len) override;
};

}  // namespace bansec

#endif  // BANSEC_RNG_HPP_
