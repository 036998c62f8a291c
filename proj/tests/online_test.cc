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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "bfm/generators.h"
#include "bfm/mechanisms.h"
#include "bfm/verify.h"

namespace bfm {
namespace {

Instance Additive(std::vector<double> weights, std::vector<double> costs,
                  double budget) {
  Instance instance;
  instance.valuation = AdditiveValuation{std::move(weights)};
  instance.costs = std::move(costs);
  instance.budget = budget;
  return instance;
}

std::vector<int> Identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

// A greedy-branch tape whose first `xi` arrivals form the sample.
RandomTape GreedyTape(int n, int xi, double s_choice, bool t_coin) {
  RandomTape tape = DrawTape(2, n);
  tape.branch_coin = 0.9;
  tape.s_choice = s_choice;
  for (int i = 0; i < n; ++i) {
    tape.xi_draws[i] = i < xi;
    tape.t_coins[i] = t_coin;
  }
  return tape;
}

TEST(GenSmOnlineTest, DynkinBranchHandTrace) {
  const Instance instance = Additive({1, 5, 3, 2}, {1, 1, 1, 1}, 4);
  RandomTape tape = DrawTape(3, 4);
  tape.branch_coin = 0.1;
  const MechanismOutcome out =
      GenSmOnline(instance, instance.costs, Identity(4), tape);
  EXPECT_EQ(out.trace.branch, "dynkin");
  EXPECT_EQ(out.winners, AgentSet{1});
  EXPECT_EQ(out.payments[1], 4.0);
}

TEST(GenSmOnlineTest, DynkinFollowsArrivalOrder) {
  const Instance instance = Additive({1, 5, 3, 2}, {1, 1, 1, 1}, 4);
  RandomTape tape = DrawTape(3, 4);
  tape.branch_coin = 0.1;
  // Values in arrival order: 3, 1, 5, 2 -> first later value >= 3 is agent 1.
  const std::vector<int> order{2, 0, 1, 3};
  EXPECT_EQ(GenSmOnline(instance, instance.costs, order, tape).winners,
            AgentSet{1});
}

TEST(GenSmOnlineTest, SingleAgentAllInSample) {
  const Instance instance = Additive({3}, {1}, 4);
  const MechanismOutcome out = GenSmOnline(instance, instance.costs,
                                           Identity(1), GreedyTape(1, 1, 0.5, true));
  EXPECT_TRUE(out.winners.empty());
}

TEST(GenSmOnlineTest, GreedyHandTrace) {
  // Agent 0 arrives in the sample (x = 40). Agents 1 and 2 are priced
  // 8.725 * 10/40 * v: agent 1 at 2.18125 joins S_1 and T_1; agent 2 then
  // has equal marginals, goes to S_1 and is priced 1.090625.
  const Instance instance = Additive({40, 1, 0.5}, {1, 1, 1}, 10);
  const MechanismOutcome out = GenSmOnline(
      instance, instance.costs, Identity(3), GreedyTape(3, 1, 0.5, true));
  EXPECT_EQ(out.trace.branch, "greedy");
  EXPECT_EQ(out.trace.chosen, "T1");
  EXPECT_DOUBLE_EQ(out.trace.x, 40.0);
  EXPECT_EQ(out.trace.s1, (AgentSet{1, 2}));
  EXPECT_EQ(out.trace.t1, (AgentSet{1, 2}));
  EXPECT_EQ(out.winners, (AgentSet{1, 2}));
  EXPECT_NEAR(out.payments[1], 2.18125, 1e-12);
  EXPECT_NEAR(out.payments[2], 1.090625, 1e-12);
  EXPECT_NEAR(out.trace.residual1, 10 - 2.18125 - 1.090625, 1e-12);
}

TEST(GenSmOnlineTest, ChosenSetIsFixedByTheTape) {
  const Instance instance = Additive({40, 1, 0.5}, {1, 1, 1}, 10);
  const auto run = [&](double s_choice) {
    return GenSmOnline(instance, instance.costs, Identity(3),
                       GreedyTape(3, 1, s_choice, false));
  };
  EXPECT_EQ(run(0.05).trace.chosen, "S1");
  EXPECT_EQ(run(0.05).winners, (AgentSet{1, 2}));
  EXPECT_EQ(run(0.15).trace.chosen, "S2");
  EXPECT_TRUE(run(0.15).winners.empty());
  EXPECT_EQ(run(0.3).trace.chosen, "T1");
  EXPECT_TRUE(run(0.3).winners.empty());  // no t-coin came up heads
  EXPECT_EQ(run(0.9).trace.chosen, "T2");
}

TEST(GenSmOnlineTest, RejectsBadOrders) {
  const Instance instance = Additive({1, 2}, {1, 1}, 4);
  const RandomTape tape = DrawTape(1, 2);
  EXPECT_THROW(GenSmOnline(instance, instance.costs, std::vector<int>{0}, tape),
               std::invalid_argument);
  EXPECT_THROW(
      GenSmOnline(instance, instance.costs, std::vector<int>{1, 1}, tape),
      std::invalid_argument);
}

TEST(SksRunTest, MatchesOnlineWinnersAndFitsBudget) {
  for (const auto& test : MakeCases(Family::kCut, 10, 3, 10, 21)) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const RandomTape tape = DrawTape(seed, test.instance.n());
      const auto order = ArrivalOrderForSeed(test.instance.n(), seed);
      const SolverResult sks = SksRun(test.instance, order, tape);
      const MechanismOutcome online =
          GenSmOnline(test.instance, test.instance.costs, order, tape);
      EXPECT_EQ(sks.chosen, online.winners);
      EXPECT_EQ(sks.value, online.value);
      EXPECT_LE(TotalCost(sks.chosen, test.instance.costs),
                test.instance.budget * (1 + 1e-12));
    }
  }
}

TEST(GenSmOnlineTest, LoweringAWinningBidChangesNothing) {
  for (const auto& test : MakeCases(Family::kCoverage, 20, 6, 10, 4)) {
    const Instance& instance = test.instance;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const RandomTape tape = DrawTape(seed, instance.n());
      const auto order = ArrivalOrderForSeed(instance.n(), seed);
      const MechanismOutcome truth =
          GenSmOnline(instance, instance.costs, order, tape);
      for (int w : truth.winners) {
        std::vector<double> bids = instance.costs;
        for (double f : {0.0, 0.25, 0.5, 0.99}) {
          bids[w] = f * instance.costs[w];
          const MechanismOutcome lie = GenSmOnline(instance, bids, order, tape);
          EXPECT_EQ(lie.winners, truth.winners);
          EXPECT_EQ(lie.payments, truth.payments);
        }
      }
    }
  }
}

}  // namespace
}  // namespace bfm
