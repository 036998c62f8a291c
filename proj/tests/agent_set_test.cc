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

#include "bfm/agent_set.h"

#include <gtest/gtest.h>

#include <stdexcept>

namespace bfm {
namespace {

TEST(AgentSetTest, InsertKeepsSortedAndUnique) {
  AgentSet s;
  Insert(s, 4);
  Insert(s, 1);
  Insert(s, 4);
  Insert(s, 2);
  EXPECT_EQ(s, (AgentSet{1, 2, 4}));
  EXPECT_TRUE(Contains(s, 2));
  EXPECT_FALSE(Contains(s, 3));
}

TEST(AgentSetTest, WithAndWithoutDoNotMutate) {
  const AgentSet s{0, 3};
  EXPECT_EQ(With(s, 1), (AgentSet{0, 1, 3}));
  EXPECT_EQ(Without(s, 3), (AgentSet{0}));
  EXPECT_EQ(Without(s, 7), s);
  EXPECT_EQ(s, (AgentSet{0, 3}));
}

TEST(AgentSetTest, SetAlgebra) {
  const AgentSet a{0, 2, 4, 6};
  const AgentSet b{1, 2, 6};
  EXPECT_EQ(Union(a, b), (AgentSet{0, 1, 2, 4, 6}));
  EXPECT_EQ(Difference(a, b), (AgentSet{0, 4}));
  EXPECT_TRUE(IsSubset(AgentSet{2, 6}, a));
  EXPECT_FALSE(IsSubset(b, a));
  EXPECT_TRUE(IsSubset(AgentSet{}, b));
}

TEST(AgentSetTest, NormalizeSortsAndDeduplicates) {
  EXPECT_EQ(Normalize({5, 1, 5, 0}), (AgentSet{0, 1, 5}));
}

TEST(AgentSetTest, RangeAndMask) {
  EXPECT_EQ(Range(0), AgentSet{});
  EXPECT_EQ(Range(3), (AgentSet{0, 1, 2}));
  const std::vector<int> ground{3, 5, 9};
  EXPECT_EQ(FromMask(ground, 0b101), (AgentSet{3, 9}));
  EXPECT_EQ(FromMask(ground, 0), AgentSet{});
}

TEST(AgentSetTest, TotalCost) {
  const std::vector<double> costs{1.5, 2.0, 4.0};
  EXPECT_DOUBLE_EQ(TotalCost(AgentSet{0, 2}, costs), 5.5);
  EXPECT_DOUBLE_EQ(TotalCost(AgentSet{}, costs), 0.0);
}

}  // namespace
}  // namespace bfm
