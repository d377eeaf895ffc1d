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

#ifndef BANSEC_CRYPTO_VECTORS_HPP_
#define BANSEC_CRYPTO_VECTORS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace bansec::crypto {

struct VectorResult {
  std::string name;
  bool pass;
};

// Runs every embedded known-answer vector (AES block, CMAC, CCM with 13-octet
// nonces, P-256 scalar multiplication and ECDH). Each entry prints one
// PASS/FAIL line on `out`.
std::vector<VectorResult> run_vector_selftest(std::ostream& out);

bool all_vectors_pass(std::ostream& out);

}  // namespace bansec::crypto

#endif  // BANSEC_CRYPTO_VECTORS_HPP_
