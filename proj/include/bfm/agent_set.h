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

#ifndef BFM_AGENT_SET_H_
#define BFM_AGENT_SET_H_

#include <cstdint>
#include <span>
#include <vector>

namespace bfm {

// A set of agent ids, kept sorted ascending and duplicate free. Agent ids are
// always the caller's original indices.
using AgentSet = std::vector<int>;

bool Contains(const AgentSet& set, int agent);

// Returns set ∪ {agent}.
AgentSet With(const AgentSet& set, int agent);

// Returns set \ {agent}.
AgentSet Without(const AgentSet& set, int agent);

// In-place insertion; no-op if already present.
void Insert(AgentSet& set, int agent);

AgentSet Union(const AgentSet& a, const AgentSet& b);
AgentSet Difference(const AgentSet& a, const AgentSet& b);
bool IsSubset(const AgentSet& sub, const AgentSet& super);

// Sorts and removes duplicates.
AgentSet Normalize(std::vector<int> agents);

// {0, 1, ..., n-1}.
AgentSet Range(int n);

// Bit i of `mask` selects ground[i].
AgentSet FromMask(std::span<const int> ground, std::uint64_t mask);

double TotalCost(const AgentSet& set, std::span<const double> costs);

}  // namespace bfm

#endif  // BFM_AGENT_SET_H_
