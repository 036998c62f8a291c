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

#include <algorithm>
#include <array>
#include <stdexcept>

#include "bfm/mechanisms.h"
#include "mechanism_internal.h"

namespace bfm {

namespace {

void CheckOrder(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("arrival order must list every agent once");
  }
  std::vector<char> seen(n, 0);
  for (int i : order) {
    if (i < 0 || i >= n || seen[i]) {
      throw std::invalid_argument("arrival order is not a permutation");
    }
    seen[i] = 1;
  }
}

// The set returned at the end is fixed before anyone arrives.
int ChosenCandidate(double s_choice) {
  if (s_choice < 0.1) return 0;  // S1
  if (s_choice < 0.2) return 1;  // S2
  if (s_choice < 0.6) return 2;  // T1
  return 3;                      // T2
}

}  // namespace

MechanismOutcome GenSmOnline(const Instance& instance,
                             std::span<const double> bids,
                             std::span<const int> arrival_order,
                             const RandomTape& tape) {
  internal::CheckInputs(instance, bids, tape);
  internal::RequireUnconstrained(instance, "gensm-online");
  CheckOrder(arrival_order, instance.n());
  const int n = instance.n();
  const double budget = instance.budget;
  const ValueOracle oracle = instance.MakeOracle();
  MechanismOutcome outcome = internal::EmptyOutcome(instance);
  auto& trace = outcome.trace;

  if (tape.branch_coin < kOnlineDynkinProbability) {
    trace.branch = "dynkin";
    std::vector<double> values(n);
    std::vector<bool> eligible(n);
    for (int k = 0; k < n; ++k) {
      const int i = arrival_order[k];
      values[k] = oracle.Singleton(i);
      // Over-budget bids are rejected on arrival; worthless agents are
      // never hired.
      eligible[k] = bids[i] <= budget && values[k] > 0;
      if (bids[i] > budget) {
        trace.rejections.push_back({i, RejectReason::kOverBudgetCost});
      }
    }
    if (const auto pick = Dynkin(values, eligible)) {
      internal::AwardBudget(outcome, arrival_order[*pick], budget);
    }
    internal::Finish(outcome, oracle);
    return outcome;
  }

  const int chosen = ChosenCandidate(tape.s_choice);
  static constexpr std::array<const char*, 4> kNames{"S1", "S2", "T1", "T2"};
  trace.chosen = kNames[chosen];

  const auto xi = static_cast<int>(
      std::count(tape.xi_draws.begin(), tape.xi_draws.begin() + n, true));
  AgentSet sample;
  for (int k = 0; k < xi; ++k) {
    const int i = arrival_order[k];
    if (bids[i] > budget) {
      trace.rejections.push_back({i, RejectReason::kOverBudgetCost});
    } else {
      sample.push_back(i);
      trace.rejections.push_back({i, RejectReason::kSampleHalf});
    }
  }
  sample = Normalize(std::move(sample));
  const double x = TwoPassKnapsack(oracle, sample, bids, budget,
                                   DeriveSeed(tape.sub_seed, 1))
                       .value;
  trace.x = x;
  if (!(x > 0)) {
    trace.branch = "empty";
    internal::Finish(outcome, oracle);
    return outcome;
  }

  trace.branch = "greedy";
  const double rate = kOnlineBeta * budget / x;
  std::array<AgentSet, 4> sets;  // S1, S2, T1, T2
  std::array<double, 2> residual{budget, budget};
  std::array<double, 2> set_value{0.0, 0.0};
  std::vector<double> prices(n, 0.0);
  for (int k = xi; k < n; ++k) {
    const int i = arrival_order[k];
    if (bids[i] > budget) {
      trace.rejections.push_back({i, RejectReason::kOverBudgetCost});
      continue;
    }
    std::array<double, 2> grown{};
    std::array<double, 2> marginal{};
    for (int j = 0; j < 2; ++j) {
      grown[j] = oracle.Value(With(sets[j], i));
      marginal[j] = grown[j] - set_value[j];
    }
    const int slot = marginal[1] > marginal[0] ? 1 : 0;
    trace.examined.push_back(i);
    trace.examined_slot.push_back(slot + 1);
    const double price = rate * marginal[slot];
    if (bids[i] <= price && price <= residual[slot]) {
      Insert(sets[slot], i);
      residual[slot] -= price;
      set_value[slot] = grown[slot];
      prices[i] = price;
      if (tape.t_coins[i]) Insert(sets[2 + slot], i);
    } else {
      trace.rejections.push_back(
          {i, bids[i] > price ? RejectReason::kCost : RejectReason::kBudget});
    }
  }

  trace.s1 = sets[0];
  trace.s2 = sets[1];
  trace.t1 = sets[2];
  trace.t2 = sets[3];
  trace.residual1 = residual[0];
  trace.residual2 = residual[1];
  outcome.winners = sets[chosen];
  for (int i : outcome.winners) outcome.payments[i] = prices[i];
  internal::Finish(outcome, oracle);
  return outcome;
}

SolverResult SksRun(const Instance& instance,
                    std::span<const int> arrival_order,
                    const RandomTape& tape) {
  const MechanismOutcome outcome =
      GenSmOnline(instance, instance.costs, arrival_order, tape);
  return {outcome.winners, outcome.value, outcome.queries};
}

}  // namespace bfm
