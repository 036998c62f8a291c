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

#ifndef BFM_GENERATORS_H_
#define BFM_GENERATORS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "bfm/agent_set.h"
#include "bfm/instance.h"

namespace bfm {

enum class Family { kAdditive, kCut, kCoverage };

std::string FamilyName(Family family);
// Throws std::invalid_argument for unknown names.
Family ParseFamily(const std::string& name);

struct GeneratorParams {
  int n = 10;
  double edge_probability = 0.4;  // cut: G(n, p)
  double cost_min = 0.1;
  double cost_max = 1.0;
  // B = budget_fraction * Σ costs unless an absolute budget is given.
  double budget_fraction = 0.3;
  std::optional<double> budget;
};

// Random instance of the family with no constraint. Throws
// std::invalid_argument on invalid parameters.
Instance GenerateInstance(Family family, const GeneratorParams& params,
                          std::uint64_t seed);

enum class ConstraintKind { kNone, kCardinality, kPartition, kMatching };

ConstraintKind ParseConstraintKind(const std::string& name);

// A random constraint over n agents: cardinality k = max(1, n/3); partition
// into 3 parts with caps 1..2; matching on a random graph with one edge per
// agent.
ConstraintSpec RandomConstraint(ConstraintKind kind, int n,
                                std::uint64_t seed);

// The pair of XOS valuations that value queries cannot tell apart:
// v1(S) = min(|S|, tau), v2 = max(v1, beta_R) with beta_R = +1 on R and
// -rho off R, |R| = rho = n/4, tau = floor(n^(eps/2) / 4). Both instances
// have unit costs and budget n.
struct XosHardPair {
  Instance low;   // v1
  Instance high;  // v2
  AgentSet r;
  int tau = 0;
  int rho = 0;
};

// Throws std::invalid_argument unless n % 4 == 0 and n^(eps/2)/4 >= 1.
XosHardPair GenerateXosHardPair(int n, double epsilon, std::uint64_t seed);

}  // namespace bfm

#endif  // BFM_GENERATORS_H_
