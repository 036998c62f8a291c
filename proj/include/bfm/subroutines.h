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

// Auxiliary optimizers used by the mechanisms, plus exact brute force for
// small instances. Everything here is a deterministic function of its inputs
// and seed. Tie-breaking is by lowest agent id.

#ifndef BFM_SUBROUTINES_H_
#define BFM_SUBROUTINES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bfm/agent_set.h"
#include "bfm/independence.h"
#include "bfm/valuation.h"

namespace bfm {

struct SolverResult {
  AgentSet chosen;
  double value = 0.0;
  std::int64_t queries = 0;
};

inline constexpr int kMaxBruteForceAgents = 20;

// Exact maximum of v over S ⊆ ground with cost(S) <= budget (ignored when
// `unconstrained`) and S independent. Ties go to the lexicographically
// smallest set. Throws std::invalid_argument if |ground| > 20.
SolverResult BruteForceOpt(const ValueOracle& oracle, const AgentSet& ground,
                           std::span<const double> costs, double budget,
                           const IndependenceSystem& system,
                           bool unconstrained = false);

// opt(ground, v, ∞).
SolverResult BruteForceUnconstrained(const ValueOracle& oracle,
                                     const AgentSet& ground);

// Randomized double greedy for unconstrained non-monotone maximization over
// `ground` in ascending order. Agent i's coin is hashed from (seed, i), so
// the randomness an agent sees does not depend on the rest of the ground
// set. A 0/0 acceptance probability counts as accept.
SolverResult DoubleGreedy(const ValueOracle& oracle, const AgentSet& ground,
                          std::uint64_t seed);

// Density greedy: repeatedly add the agent maximizing v(i|S)/c_i among those
// with positive marginal, cost within the remaining budget and S+i
// independent. Zero-cost agents come first, ordered by marginal.
AgentSet DensityGreedy(const ValueOracle& oracle, const AgentSet& ground,
                       std::span<const double> costs, double budget,
                       const IndependenceSystem& system);

// Two greedy passes (the second on what the first left), the best
// affordable singleton, and double greedy on each pass's output; returns
// the best of these.
SolverResult TwoPassKnapsack(const ValueOracle& oracle, const AgentSet& ground,
                             std::span<const double> costs, double budget,
                             std::uint64_t seed);

// Knapsack + independence-system variant. With `monotone` a single greedy
// pass is compared with the best feasible singleton; otherwise the two-pass
// scheme runs with independence enforced throughout. Under NoConstraint and
// !monotone this coincides with TwoPassKnapsack.
SolverResult ConstrainedGreedy(const ValueOracle& oracle,
                               const AgentSet& ground,
                               std::span<const double> costs, double budget,
                               const IndependenceSystem& system, bool monotone,
                               std::uint64_t seed);

// Keeps agents of `set` in ascending order while the kept set stays
// independent.
AgentSet PruneToIndependent(const AgentSet& set,
                            const IndependenceSystem& system);

// Classic secretary rule: observe the first floor(n/e) values, then take the
// first later index whose value is at least the sample maximum. Indices with
// eligible[k] == false are observed but never selected.
std::optional<std::size_t> Dynkin(std::span<const double> values,
                                  const std::vector<bool>& eligible = {});

// {i ∈ ground : coins[i]}.
AgentSet RandomHalf(const AgentSet& ground, const std::vector<bool>& coins);

}  // namespace bfm

#endif  // BFM_SUBROUTINES_H_
