// Copyright 2026 The MGM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGM_RNG_HPP
#define MGM_RNG_HPP

#include <cstdint>
#include <random>

namespace mgm {

// Named sub-streams so that every random draw is a function of
// (seed, generation, player, purpose) and never of scheduling.
enum class Stream : std::uint32_t {
  kInit = 1,
  kBatch = 2,
  kOpponents = 3,
  kExtragradient = 4,
  kRollback = 5,
  kVariation = 6,
};

inline std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t generation,
                               int player, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation),
                    static_cast<std::uint32_t>(generation >> 32),
                    static_cast<std::uint32_t>(player),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace mgm

#endif  // MGM_RNG_HPP
