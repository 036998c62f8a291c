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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bfm/generators.h"
#include "bfm/instance.h"
#include "bfm/random_tape.h"

namespace bfm {
namespace {

Instance PathCut() {
  Instance instance;
  CutValuation cut;
  cut.vertices = 3;
  cut.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  cut.agent_vertex = {0, 1, 2};
  instance.valuation = cut;
  instance.costs = {1, 1, 1};
  instance.budget = 3;
  return instance;
}

Instance Additive(std::vector<double> weights, std::vector<double> costs,
                  double budget) {
  Instance instance;
  instance.valuation = AdditiveValuation{std::move(weights)};
  instance.costs = std::move(costs);
  instance.budget = budget;
  return instance;
}

// Plain enumeration of every subset, independent of the solver's code.
double ReferenceOpt(const Instance& instance, bool use_budget) {
  const int n = instance.n();
  const ValueOracle oracle = instance.MakeOracle();
  const IndependenceSystem system = instance.MakeSystem();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    AgentSet s;
    double cost = 0;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1) {
        s.push_back(i);
        cost += instance.costs[i];
      }
    }
    if (use_budget && cost > instance.budget) continue;
    if (!system.IsIndependent(s)) continue;
    best = std::max(best, oracle.Value(s));
  }
  return best;
}

std::vector<Instance> RandomInstances(int count, int n,
                                      ConstraintKind kind = ConstraintKind::kNone) {
  std::vector<Instance> out;
  for (int k = 0; k < count; ++k) {
    const Family family = static_cast<Family>(k % 3);
    GeneratorParams params;
    params.n = n;
    Instance instance = GenerateInstance(family, params, 1000 + k);
    instance.constraint = RandomConstraint(kind, n, 2000 + k);
    out.push_back(instance);
  }
  return out;
}

TEST(BruteForceOptTest, HandExamples) {
  const Instance a = Additive({5, 3}, {2, 2}, 2);
  const SolverResult r = BruteForceOpt(a.MakeOracle(), Range(2), a.costs,
                                       a.budget, a.MakeSystem());
  EXPECT_EQ(r.chosen, AgentSet{0});
  EXPECT_EQ(r.value, 5.0);

  const SolverResult empty = BruteForceOpt(a.MakeOracle(), {}, a.costs,
                                           a.budget, a.MakeSystem());
  EXPECT_TRUE(empty.chosen.empty());
  EXPECT_EQ(empty.value, 0.0);

  const Instance cut = PathCut();
  const SolverResult c = BruteForceOpt(cut.MakeOracle(), Range(3), cut.costs,
                                       cut.budget, cut.MakeSystem());
  EXPECT_EQ(c.value, 2.0);
  // {0,2} and {1} both cut 2; {0,2} is lexicographically first.
  EXPECT_EQ(c.chosen, (AgentSet{0, 2}));
}

TEST(BruteForceOptTest, MatchesReference) {
  for (ConstraintKind kind :
       {ConstraintKind::kNone, ConstraintKind::kPartition,
        ConstraintKind::kMatching}) {
    for (const Instance& instance : RandomInstances(9, 8, kind)) {
      const ValueOracle oracle = instance.MakeOracle();
      const SolverResult r = BruteForceOpt(oracle, Range(8), instance.costs,
                                           instance.budget,
                                           instance.MakeSystem());
      EXPECT_NEAR(r.value, ReferenceOpt(instance, true), 1e-12);
      EXPECT_NEAR(r.value, oracle.Value(r.chosen), 1e-12);
      EXPECT_NEAR(BruteForceOpt(oracle, Range(8), instance.costs,
                                instance.budget, instance.MakeSystem(), true)
                      .value,
                  ReferenceOpt(instance, false), 1e-12);
    }
  }
}

TEST(BruteForceOptTest, RefusesHugeGround) {
  const Instance a = Additive(std::vector<double>(21, 1.0),
                              std::vector<double>(21, 1.0), 5);
  EXPECT_THROW(BruteForceOpt(a.MakeOracle(), Range(21), a.costs, a.budget,
                             a.MakeSystem()),
               std::invalid_argument);
}

TEST(DoubleGreedyTest, AdditiveTakesEverything) {
  const Instance a = Additive({1, 0, 2, 3}, {1, 1, 1, 1}, 1);
  EXPECT_EQ(DoubleGreedy(a.MakeOracle(), Range(4), 5).chosen,
            (AgentSet{0, 1, 2, 3}));
  EXPECT_TRUE(DoubleGreedy(a.MakeOracle(), {}, 5).chosen.empty());
}

TEST(DoubleGreedyTest, HalfApproximationOnPathInExpectation) {
  const Instance cut = PathCut();
  const ValueOracle oracle = cut.MakeOracle();
  double total = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    total += DoubleGreedy(oracle, Range(3), seed).value;
  }
  EXPECT_GE(total / 2000, 1.0);
}

TEST(DoubleGreedyTest, HalfApproximationOnRandomCuts) {
  for (int k = 0; k < 5; ++k) {
    GeneratorParams params;
    params.n = 10;
    const Instance instance = GenerateInstance(Family::kCut, params, 50 + k);
    const ValueOracle oracle = instance.MakeOracle();
    const double opt = ReferenceOpt(instance, false);
    double total = 0;
    const int trials = 1000;
    for (int seed = 0; seed < trials; ++seed) {
      total += DoubleGreedy(oracle, Range(10), seed).value;
    }
    EXPECT_GE(total / trials, 0.5 * opt);
  }
}

TEST(TwoPassKnapsackTest, HandExamples) {
  const Instance a = Additive({4, 3}, {2, 2}, 2);
  EXPECT_EQ(TwoPassKnapsack(a.MakeOracle(), Range(2), a.costs, a.budget, 1)
                .value,
            4.0);
  const Instance poor = Additive({4, 3}, {2, 2}, 1);
  const SolverResult r =
      TwoPassKnapsack(poor.MakeOracle(), Range(2), poor.costs, poor.budget, 1);
  EXPECT_TRUE(r.chosen.empty());
  EXPECT_EQ(r.value, 0.0);
}

TEST(TwoPassKnapsackTest, WithinSixOfOptimumOnCuts) {
  for (int k = 0; k < 30; ++k) {
    GeneratorParams params;
    params.n = 6 + k % 7;
    const Instance instance = GenerateInstance(Family::kCut, params, 300 + k);
    const ValueOracle oracle = instance.MakeOracle();
    const double opt = ReferenceOpt(instance, true);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SolverResult r = TwoPassKnapsack(oracle, Range(instance.n()),
                                             instance.costs, instance.budget,
                                             seed);
      EXPECT_GE(r.value, opt / 6) << "instance " << k << " seed " << seed;
      EXPECT_LE(TotalCost(r.chosen, instance.costs), instance.budget);
      EXPECT_EQ(r.value, oracle.Value(r.chosen));
    }
  }
}

// The two-pass estimate is not monotone in B. At B = 10 pass one takes
// {0, 2} and pass two takes {1, 3} (value 10); at B = 11 pass one also
// absorbs agent 1 and the best candidate is worth 9.
TEST(TwoPassKnapsackTest, LargerBudgetCanLowerTheEstimate) {
  const Instance a = Additive({2, 1, 6, 9}, {4, 2, 5, 8}, 10);
  const ValueOracle oracle = a.MakeOracle();
  const SolverResult at10 = TwoPassKnapsack(oracle, Range(4), a.costs, 10, 1);
  const SolverResult at11 = TwoPassKnapsack(oracle, Range(4), a.costs, 11, 1);
  EXPECT_EQ(at10.value, 10.0);
  EXPECT_EQ(at10.chosen, (AgentSet{1, 3}));
  EXPECT_EQ(at11.value, 9.0);
  EXPECT_EQ(BruteForceOpt(oracle, Range(4), a.costs, 11, a.MakeSystem()).value,
            10.0);
}

TEST(ConstrainedGreedyTest, CardinalityOneTakesBestSingleton) {
  Instance a = Additive({4, 3}, {1, 1}, 10);
  a.constraint = CardinalityConstraint{1};
  for (bool monotone : {true, false}) {
    const SolverResult r =
        ConstrainedGreedy(a.MakeOracle(), Range(2), a.costs, a.budget,
                          a.MakeSystem(), monotone, 3);
    EXPECT_EQ(r.chosen, AgentSet{0});
    EXPECT_EQ(r.value, 4.0);
  }
}

TEST(ConstrainedGreedyTest, UnconstrainedEqualsTwoPass) {
  for (const Instance& instance : RandomInstances(50, 9)) {
    const ValueOracle oracle = instance.MakeOracle();
    for (std::uint64_t seed : {1u, 2u}) {
      EXPECT_EQ(ConstrainedGreedy(oracle, Range(9), instance.costs,
                                  instance.budget, instance.MakeSystem(),
                                  false, seed)
                    .value,
                TwoPassKnapsack(oracle, Range(9), instance.costs,
                                instance.budget, seed)
                    .value);
    }
  }
}

TEST(ConstrainedGreedyTest, OutputsAreFeasibleAndFresh) {
  for (ConstraintKind kind :
       {ConstraintKind::kCardinality, ConstraintKind::kPartition,
        ConstraintKind::kMatching}) {
    for (const Instance& instance : RandomInstances(15, 9, kind)) {
      const ValueOracle oracle = instance.MakeOracle();
      const IndependenceSystem system = instance.MakeSystem();
      for (bool monotone : {true, false}) {
        const SolverResult r =
            ConstrainedGreedy(oracle, Range(9), instance.costs,
                              instance.budget, system, monotone, 4);
        EXPECT_TRUE(system.IsIndependent(r.chosen));
        EXPECT_LE(TotalCost(r.chosen, instance.costs), instance.budget);
        EXPECT_EQ(r.value, oracle.Value(r.chosen));
      }
    }
  }
}

TEST(DensityGreedyTest, PrefersDensityAndRespectsBudget) {
  const Instance a = Additive({6, 4, 3}, {3, 1, 1}, 2);
  EXPECT_EQ(DensityGreedy(a.MakeOracle(), Range(3), a.costs, a.budget,
                          a.MakeSystem()),
            (AgentSet{1, 2}));
}

TEST(DensityGreedyTest, ZeroCostAgentsFirst) {
  const Instance a = Additive({1, 5, 2}, {0, 1, 0}, 0.5);
  EXPECT_EQ(DensityGreedy(a.MakeOracle(), Range(3), a.costs, a.budget,
                          a.MakeSystem()),
            (AgentSet{0, 2}));
}

TEST(PruneToIndependentTest, KeepsPrefix) {
  const IndependenceSystem sys(CardinalityConstraint{2}, 5);
  EXPECT_EQ(PruneToIndependent({0, 2, 3, 4}, sys), (AgentSet{0, 2}));
}

TEST(DynkinTest, HandTraces) {
  const std::vector<double> a{1, 5, 3, 2};
  EXPECT_EQ(Dynkin(a), std::optional<std::size_t>(1));
  const std::vector<double> one{7};
  EXPECT_EQ(Dynkin(one), std::optional<std::size_t>(0));
  const std::vector<double> decreasing{4, 3, 2, 1};
  EXPECT_EQ(Dynkin(decreasing), std::nullopt);
  EXPECT_EQ(Dynkin(std::vector<double>{}), std::nullopt);
}

TEST(DynkinTest, SampleSizeIsFloorNOverE) {
  // n = 6: floor(6/e) = 2 observed; the first later value >= max(1, 9)
  // is index 5.
  const std::vector<double> v{1, 9, 2, 3, 8, 9};
  EXPECT_EQ(Dynkin(v), std::optional<std::size_t>(5));
}

TEST(DynkinTest, IneligibleIndicesAreSkipped) {
  const std::vector<double> v{1, 5, 6, 2};
  EXPECT_EQ(Dynkin(v, {true, false, true, true}),
            std::optional<std::size_t>(2));
}

TEST(RandomHalfTest, CoinsSelectMembers) {
  const AgentSet ground{0, 2, 3};
  EXPECT_EQ(RandomHalf(ground, {true, true, true, true}), ground);
  EXPECT_TRUE(RandomHalf(ground, {false, false, false, false}).empty());
  EXPECT_EQ(RandomHalf(ground, {true, true, false, true}), (AgentSet{0, 3}));
}

}  // namespace
}  // namespace bfm
