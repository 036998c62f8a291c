// Copyright 2026 The Authors.
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

#include "bfm/random_tape.h"

#include <numeric>
#include <utility>

namespace bfm {

namespace {

enum TapeStream : std::uint64_t {
  kBranch = 1,
  kPartition = 2,
  kXi = 3,
  kTCoin = 4,
  kSChoice = 5,
  kSubSeed = 6,
};

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
  std::uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ (stream * 0xD6E8FEB86659FD93ull));
  return SplitMix64(h ^ (index * 0xA0761D6478BD642Full));
}

double ToUnit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return HashCombine(seed, 0x5EEDull + stream, 0);
}

RandomTape DrawTape(std::uint64_t seed, int n) {
  RandomTape tape;
  const auto count = static_cast<std::size_t>(n > 0 ? n : 0);
  tape.branch_coin = ToUnit(HashCombine(seed, kBranch, 0));
  tape.partition_coins.resize(count);
  tape.xi_draws.resize(count);
  tape.t_coins.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    tape.partition_coins[i] = ToUnit(HashCombine(seed, kPartition, i));
    tape.xi_draws[i] = (HashCombine(seed, kXi, i) >> 63) != 0;
    tape.t_coins[i] = (HashCombine(seed, kTCoin, i) >> 63) != 0;
  }
  tape.s_choice = ToUnit(HashCombine(seed, kSChoice, 0));
  tape.sub_seed = HashCombine(seed, kSubSeed, 0);
  return tape;
}

std::uint64_t Rng::Below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::vector<int> RandomPermutation(int n, std::uint64_t seed) {
  std::vector<int> order(n > 0 ? n : 0);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

}  // namespace bfm
