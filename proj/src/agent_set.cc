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

#include <algorithm>
#include <iterator>

namespace bfm {

bool Contains(const AgentSet& set, int agent) {
  return std::binary_search(set.begin(), set.end(), agent);
}

AgentSet With(const AgentSet& set, int agent) {
  AgentSet out = set;
  Insert(out, agent);
  return out;
}

AgentSet Without(const AgentSet& set, int agent) {
  AgentSet out = set;
  auto it = std::lower_bound(out.begin(), out.end(), agent);
  if (it != out.end() && *it == agent) out.erase(it);
  return out;
}

void Insert(AgentSet& set, int agent) {
  auto it = std::lower_bound(set.begin(), set.end(), agent);
  if (it == set.end() || *it != agent) set.insert(it, agent);
}

AgentSet Union(const AgentSet& a, const AgentSet& b) {
  AgentSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

AgentSet Difference(const AgentSet& a, const AgentSet& b) {
  AgentSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool IsSubset(const AgentSet& sub, const AgentSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

AgentSet Normalize(std::vector<int> agents) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  return agents;
}

AgentSet Range(int n) {
  AgentSet out(n > 0 ? n : 0);
  for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i] = i;
  return out;
}

AgentSet FromMask(std::span<const int> ground, std::uint64_t mask) {
  AgentSet out;
  for (std::size_t b = 0; b < ground.size(); ++b) {
    if (mask >> b & 1u) out.push_back(ground[b]);
  }
  return Normalize(std::move(out));
}

double TotalCost(const AgentSet& set, std::span<const double> costs) {
  double total = 0.0;
  for (int i : set) total += costs[i];
  return total;
}

}  // namespace bfm
