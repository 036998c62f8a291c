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

#ifndef BFM_RANDOM_TAPE_H_
#define BFM_RANDOM_TAPE_H_

#include <cstdint>
#include <random>
#include <vector>

namespace bfm {

// All random decisions a mechanism may take, drawn up front from a master
// seed. Per-agent coins are indexed by agent id, so the amount of randomness
// consumed never depends on the bids. Fixing the tape fixes a deterministic
// mechanism.
struct RandomTape {
  double branch_coin = 0.0;              // uniform [0,1)
  std::vector<double> partition_coins;   // < 0.5 puts agent i in the sample
  std::vector<bool> xi_draws;            // fair coins, xi = number of heads
  std::vector<bool> t_coins;             // online T_j membership coins
  double s_choice = 0.0;                 // uniform [0,1)
  std::uint64_t sub_seed = 0;            // seed for randomized subroutines

  int agent_count() const { return static_cast<int>(partition_coins.size()); }
  bool operator==(const RandomTape&) const = default;
};

RandomTape DrawTape(std::uint64_t seed, int n);

// Counter-based hashing helpers. Identical on every platform.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index);
// Uniform double in [0,1) from the top 53 bits of `bits`.
double ToUnit(std::uint64_t bits);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Thin wrapper over mt19937_64 with portable uniform conversions (the
// standard distributions are implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return ToUnit(engine_()); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t Below(std::uint64_t bound);
  bool Coin(double p = 0.5) { return Uniform() < p; }
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Uniformly random permutation of {0..n-1} (Fisher-Yates).
std::vector<int> RandomPermutation(int n, std::uint64_t seed);

}  // namespace bfm

#endif  // BFM_RANDOM_TAPE_H_
