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

#ifndef BFM_INDEPENDENCE_H_
#define BFM_INDEPENDENCE_H_

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bfm/agent_set.h"

namespace bfm {

struct NoConstraint {};

// Uniform matroid: |S| <= k.
struct CardinalityConstraint {
  int k = 0;
};

// Partition matroid: |S ∩ parts[j]| <= caps[j]. Agents outside every part
// are unconstrained.
struct PartitionConstraint {
  std::vector<std::vector<int>> parts;
  std::vector<int> caps;
};

// Each agent is an edge of a graph; S is independent iff its edges form a
// matching.
struct MatchingConstraint {
  int vertices = 0;
  std::vector<std::pair<int, int>> agent_edge;
};

// Independent sets of a conflict graph over the agents: S is independent iff
// no edge has both endpoints in S.
struct ConflictGraphConstraint {
  std::vector<std::pair<int, int>> edges;
};

using ConstraintSpec =
    std::variant<NoConstraint, CardinalityConstraint, PartitionConstraint,
                 MatchingConstraint, ConflictGraphConstraint>;

std::string ConstraintType(const ConstraintSpec& spec);
void ValidateConstraint(const ConstraintSpec& spec, int n);

// Membership oracle over agents {0..n-1}. Immutable once built.
class IndependenceSystem {
 public:
  IndependenceSystem() : IndependenceSystem(NoConstraint{}, 0) {}
  IndependenceSystem(ConstraintSpec spec, int n);

  bool IsIndependent(const AgentSet& set) const;
  // Whether set ∪ {agent} is independent.
  bool CanAdd(const AgentSet& set, int agent) const;

  bool unconstrained() const {
    return std::holds_alternative<NoConstraint>(spec_);
  }
  const ConstraintSpec& spec() const { return spec_; }
  int agent_count() const { return n_; }

 private:
  ConstraintSpec spec_;
  int n_ = 0;
  std::vector<int> part_of_;  // partition: agent -> part index or -1
};

// Exact rank quotient max_S ur(S)/lr(S) over the ground set {0..n-1}
// (subsets whose only basis is empty are skipped). Brute force; throws
// std::invalid_argument for n > 16.
double RankQuotient(const IndependenceSystem& system, int n);

}  // namespace bfm

#endif  // BFM_INDEPENDENCE_H_
