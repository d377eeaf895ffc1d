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

#ifndef BANSEC_BYTES_HPP_
#define BANSEC_BYTES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bansec {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline void put_u16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

inline void put_u32(Bytes& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

inline void put_u64(Bytes& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v >> 32));
  put_u32(out, static_cast<uint32_t>(v & 0xFFFFFFFFu));
}

inline uint16_t get_u16(ByteView in, size_t at) {
  return static_cast<uint16_t>((in[at] << 8) | in[at + 1]);
}

inline uint32_t get_u32(ByteView in, size_t at) {
  return (static_cast<uint32_t>(in[at]) << 24) | (static_cast<uint32_t>(in[at + 1]) << 16) |
         (static_cast<uint32_t>(in[at + 2]) << 8) | static_cast<uint32_t>(in[at + 3]);
}

inline uint64_t get_u64(ByteView in, size_t at) {
  return (static_cast<uint64_t>(get_u32(in, at)) << 32) | get_u32(in, at + 4);
}

inline void append(Bytes& out, ByteView more) { out.insert(out.end(), more.begin(), more.end()); }

inline Bytes from_string(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);  // throws std::invalid_argument on bad input

// Branch-free comparison for authentication tags.
bool ct_equal(ByteView a, ByteView b);

}  // namespace bansec

#endif  // BANSEC_BYTES_HPP_
