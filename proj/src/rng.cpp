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

#include "bansec/rng.hpp"

#include <random>

namespace bansec {

uint64_t RandomSource::next_below(uint64_t bound) {
  // Rejection sampling to stay unbiased.
  uint64_t limit = bound * (UINT64_MAX / bound);
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

uint64_t DetRng::mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t DetRng::next() {
  state_ += kGolden;
  return mix(state_);
}

void DetRng::fill(uint8_t* out, size_t len) {
  size_t i = 0;
  while (i < len) {
    uint64_t v = next();
    for (int k = 0; k < 8 && i < len; ++k, ++i) {
      out[i] = static_cast<uint8_t>(v >> (8 * k));
    }
  }
}

DetRng DetRng::split(std::string_view label) const {
  uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a over the label
  for (char c : label) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return split(h);
}

DetRng DetRng::split(uint64_t salt) const {
  DetRng child(0);
  child.state_ = mix(state_ ^ mix(salt));
  return child;
}

void SystemRng::fill(uint8_t* out, size_t len) {
  std::random_device rd;
  size_t i = 0;
  while (i < len) {
    unsigned int v = rd();
    for (size_t k = 0; k < sizeof(v) && i < len; ++k, ++i) {
      out[i] = static_cast<uint8_t>(v >> (8 * k));
    }
  }
}

}  // namespace bansec
