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

#include "bfm/subroutines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bfm/random_tape.h"

namespace bfm {

namespace {

constexpr std::uint64_t kDoubleGreedyStream = 0xD6;

// Scoped query accounting against a shared oracle counter.
class QueryMeter {
 public:
  explicit QueryMeter(const ValueOracle& oracle)
      : oracle_(oracle), start_(oracle.queries()) {}
  std::int64_t used() const { return oracle_.queries() - start_; }

 private:
  const ValueOracle& oracle_;
  std::int64_t start_;
};

struct Candidate {
  int agent = -1;
  double marginal = 0.0;
  double cost = 0.0;
  double grown_value = 0.0;
};

// Whether `a` beats `b` in density order. Callers scan agents in ascending
// id order and only replace on a strict win, so ties keep the lower id.
bool DenserThan(const Candidate& a, const Candidate& b) {
  const bool a_free = a.cost == 0.0;
  const bool b_free = b.cost == 0.0;
  if (a_free != b_free) return a_free;
  if (a_free) return a.marginal > b.marginal;
  return a.marginal / a.cost > b.marginal / b.cost;
}

}  // namespace

SolverResult BruteForceOpt(const ValueOracle& oracle, const AgentSet& ground,
                           std::span<const double> costs, double budget,
                           const IndependenceSystem& system,
                           bool unconstrained) {
  if (ground.size() > static_cast<std::size_t>(kMaxBruteForceAgents)) {
    throw std::invalid_argument("brute force limited to 20 agents, got " +
                                std::to_string(ground.size()));
  }
  QueryMeter meter(oracle);
  SolverResult best;
  best.value = oracle.Value(best.chosen);
  const std::uint64_t full = std::uint64_t{1} << ground.size();
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    AgentSet set = FromMask(ground, mask);
    if (!unconstrained && TotalCost(set, costs) > budget) continue;
    if (!system.IsIndependent(set)) continue;
    const double value = oracle.Value(set);
    if (value > best.value ||
        (value == best.value && std::lexicographical_compare(
                                    set.begin(), set.end(), best.chosen.begin(),
                                    best.chosen.end()))) {
      best.chosen = std::move(set);
      best.value = value;
    }
  }
  best.queries = meter.used();
  return best;
}

SolverResult BruteForceUnconstrained(const ValueOracle& oracle,
                                     const AgentSet& ground) {
  return BruteForceOpt(oracle, ground, {}, 0.0, IndependenceSystem(), true);
}

SolverResult DoubleGreedy(const ValueOracle& oracle, const AgentSet& ground,
                          std::uint64_t seed) {
  QueryMeter meter(oracle);
  AgentSet lower;
  AgentSet upper = ground;
  double lower_value = oracle.Value(lower);
  double upper_value = oracle.Value(upper);
  for (int i : ground) {
    const AgentSet grown = With(lower, i);
    const AgentSet shrunk = Without(upper, i);
    const double grown_value = oracle.Value(grown);
    const double shrunk_value = oracle.Value(shrunk);
    const double gain = std::max(grown_value - lower_value, 0.0);
    const double loss = std::max(shrunk_value - upper_value, 0.0);
    bool accept = true;
    if (gain + loss > 0) {
      const double u = ToUnit(HashCombine(seed, kDoubleGreedyStream, i));
      accept = u < gain / (gain + loss);
    }
    if (accept) {
      lower = grown;
      lower_value = grown_value;
    } else {
      upper = shrunk;
      upper_value = shrunk_value;
    }
  }
  SolverResult result;
  result.chosen = std::move(lower);
  result.value = lower_value;
  result.queries = meter.used();
  return result;
}

AgentSet DensityGreedy(const ValueOracle& oracle, const AgentSet& ground,
                       std::span<const double> costs, double budget,
                       const IndependenceSystem& system) {
  AgentSet chosen;
  AgentSet pool = ground;
  double remaining = budget;
  double chosen_value = oracle.Value(chosen);
  while (!pool.empty()) {
    Candidate best;
    AgentSet still_viable;
    for (int i : pool) {
      // Budget only shrinks, marginals only shrink (submodularity) and
      // independence is downward closed, so rejects never come back.
      if (costs[i] > remaining || !system.CanAdd(chosen, i)) continue;
      const double grown_value = oracle.Value(With(chosen, i));
      const double marginal = grown_value - chosen_value;
      if (!(marginal > 0)) continue;
      still_viable.push_back(i);
      const Candidate c{i, marginal, costs[i], grown_value};
      if (best.agent < 0 || DenserThan(c, best)) best = c;
    }
    if (best.agent < 0) break;
    Insert(chosen, best.agent);
    chosen_value = best.grown_value;
    remaining -= best.cost;
    pool = Without(still_viable, best.agent);
  }
  return chosen;
}

AgentSet PruneToIndependent(const AgentSet& set,
                            const IndependenceSystem& system) {
  AgentSet kept;
  for (int i : set) {
    if (system.CanAdd(kept, i)) kept.push_back(i);
  }
  return kept;
}

SolverResult ConstrainedGreedy(const ValueOracle& oracle,
                               const AgentSet& ground,
                               std::span<const double> costs, double budget,
                               const IndependenceSystem& system, bool monotone,
                               std::uint64_t seed) {
  QueryMeter meter(oracle);
  std::vector<AgentSet> candidates;
  const AgentSet first = DensityGreedy(oracle, ground, costs, budget, system);
  candidates.push_back(first);

  AgentSet second;
  if (!monotone) {
    second = DensityGreedy(oracle, Difference(ground, first), costs, budget,
                           system);
    candidates.push_back(second);
  }

  int best_single = -1;
  double best_single_value = 0.0;
  for (int i : ground) {
    if (costs[i] > budget || !system.IsIndependent({i})) continue;
    const double value = oracle.Singleton(i);
    if (best_single < 0 || value > best_single_value) {
      best_single = i;
      best_single_value = value;
    }
  }
  candidates.push_back(best_single >= 0 ? AgentSet{best_single} : AgentSet{});

  if (!monotone) {
    candidates.push_back(PruneToIndependent(
        DoubleGreedy(oracle, first, DeriveSeed(seed, 1)).chosen, system));
    candidates.push_back(PruneToIndependent(
        DoubleGreedy(oracle, second, DeriveSeed(seed, 2)).chosen, system));
  }

  SolverResult result;
  bool have = false;
  for (auto& candidate : candidates) {
    const double value = oracle.Value(candidate);
    if (!have || value > result.value) {
      result.chosen = std::move(candidate);
      result.value = value;
      have = true;
    }
  }
  result.queries = meter.used();
  return result;
}

SolverResult TwoPassKnapsack(const ValueOracle& oracle, const AgentSet& ground,
                             std::span<const double> costs, double budget,
                             std::uint64_t seed) {
  return ConstrainedGreedy(oracle, ground, costs, budget, IndependenceSystem(),
                           /*monotone=*/false, seed);
}

std::optional<std::size_t> Dynkin(std::span<const double> values,
                                  const std::vector<bool>& eligible) {
  const std::size_t n = values.size();
  const auto sample =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) /
                                          std::numbers::e));
  double threshold = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sample; ++k) {
    threshold = std::max(threshold, values[k]);
  }
  for (std::size_t k = sample; k < n; ++k) {
    if (!eligible.empty() && !eligible[k]) continue;
    if (values[k] >= threshold) return k;
  }
  return std::nullopt;
}

AgentSet RandomHalf(const AgentSet& ground, const std::vector<bool>& coins) {
  AgentSet out;
  for (int i : ground) {
    if (coins[i]) out.push_back(i);
  }
  return out;
}

}  // namespace bfm
