// Copyright 2026 The Credist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CREDIST_SRC_RANDOM_HASH_HPP_
#define CREDIST_SRC_RANDOM_HASH_HPP_

#include <cstdint>

namespace credist::detail {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial) {
  return mix64(mix64(seed) ^ trial);
}

// Uniform in [0, 1), keyed by (stream, item).
inline double unit_draw(std::uint64_t stream, std::uint64_t item) {
  return static_cast<double>(mix64(stream ^ mix64(item)) >> 11) * 0x1.0p-53;
}

}  // namespace credist::detail

#endif  // CREDIST_SRC_RANDOM_HASH_HPP_
