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

#include "bfm/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bfm/random_tape.h"

namespace bfm {

std::string FamilyName(Family family) {
  switch (family) {
    case Family::kAdditive:
      return "additive";
    case Family::kCut:
      return "cut";
    case Family::kCoverage:
      return "coverage";
  }
  return "unknown";
}

Family ParseFamily(const std::string& name) {
  if (name == "additive") return Family::kAdditive;
  if (name == "cut") return Family::kCut;
  if (name == "coverage") return Family::kCoverage;
  throw std::invalid_argument("unknown instance family '" + name + "'");
}

Instance GenerateInstance(Family family, const GeneratorParams& params,
                          std::uint64_t seed) {
  const int n = params.n;
  if (n < 0) throw std::invalid_argument("--n must be >= 0");
  if (params.edge_probability < 0 || params.edge_probability > 1) {
    throw std::invalid_argument("--p must lie in [0, 1]");
  }
  if (params.cost_min < 0 || params.cost_max < params.cost_min) {
    throw std::invalid_argument("cost range must satisfy 0 <= min <= max");
  }
  if (params.budget && *params.budget <= 0) {
    throw std::invalid_argument("--budget must be positive");
  }
  if (!params.budget && params.budget_fraction <= 0) {
    throw std::invalid_argument("--budget-frac must be positive");
  }

  Rng rng(seed);
  Instance instance;
  switch (family) {
    case Family::kAdditive: {
      AdditiveValuation a;
      for (int i = 0; i < n; ++i) a.weights.push_back(rng.Uniform(0.1, 1.0));
      instance.valuation = std::move(a);
      break;
    }
    case Family::kCut: {
      CutValuation c;
      c.vertices = n;
      c.agent_vertex.resize(n);
      std::iota(c.agent_vertex.begin(), c.agent_vertex.end(), 0);
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (rng.Coin(params.edge_probability)) {
            c.edges.push_back({u, v, rng.Uniform(0.1, 1.0)});
          }
        }
      }
      instance.valuation = std::move(c);
      break;
    }
    case Family::kCoverage: {
      CoverageValuation c;
      const int elements = std::max(1, 2 * n);
      for (int e = 0; e < elements; ++e) {
        c.element_weights.push_back(rng.Uniform(0.1, 1.0));
      }
      for (int i = 0; i < n; ++i) {
        const int size = 1 + static_cast<int>(rng.Below(4));
        std::vector<int> set;
        for (int k = 0; k < size; ++k) {
          set.push_back(static_cast<int>(rng.Below(elements)));
        }
        c.agent_sets.push_back(Normalize(std::move(set)));
      }
      instance.valuation = std::move(c);
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    instance.costs.push_back(rng.Uniform(params.cost_min, params.cost_max));
  }
  const double total =
      std::accumulate(instance.costs.begin(), instance.costs.end(), 0.0);
  if (params.budget) {
    instance.budget = *params.budget;
  } else {
    instance.budget = params.budget_fraction * total;
    // All-zero or empty cost vectors still need a positive budget.
    if (instance.budget <= 0) instance.budget = 1.0;
  }
  return instance;
}

ConstraintKind ParseConstraintKind(const std::string& name) {
  if (name == "none") return ConstraintKind::kNone;
  if (name == "cardinality") return ConstraintKind::kCardinality;
  if (name == "partition") return ConstraintKind::kPartition;
  if (name == "matching") return ConstraintKind::kMatching;
  throw std::invalid_argument("unknown constraint kind '" + name + "'");
}

ConstraintSpec RandomConstraint(ConstraintKind kind, int n,
                                std::uint64_t seed) {
  Rng rng(seed);
  switch (kind) {
    case ConstraintKind::kNone:
      return NoConstraint{};
    case ConstraintKind::kCardinality:
      return CardinalityConstraint{std::max(1, n / 3)};
    case ConstraintKind::kPartition: {
      PartitionConstraint p;
      p.parts.resize(3);
      for (int i = 0; i < n; ++i) p.parts[rng.Below(3)].push_back(i);
      for (int j = 0; j < 3; ++j) {
        p.caps.push_back(1 + static_cast<int>(rng.Below(2)));
      }
      return p;
    }
    case ConstraintKind::kMatching: {
      MatchingConstraint m;
      m.vertices = std::max(2, (n + 1) / 2 + 1);
      for (int i = 0; i < n; ++i) {
        const int u = static_cast<int>(rng.Below(m.vertices));
        int v = static_cast<int>(rng.Below(m.vertices - 1));
        if (v >= u) ++v;
        m.agent_edge.emplace_back(u, v);
      }
      return m;
    }
  }
  return NoConstraint{};
}

XosHardPair GenerateXosHardPair(int n, double epsilon, std::uint64_t seed) {
  if (n <= 0 || n % 4 != 0) {
    throw std::invalid_argument("hard pair needs n > 0 divisible by 4");
  }
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  const double tau_exact = std::pow(static_cast<double>(n), epsilon / 2) / 4;
  // A small slack guards against pow() landing just under an integer.
  if (tau_exact + 1e-12 < 1) {
    throw std::invalid_argument("n^(eps/2)/4 must be at least 1");
  }
  XosHardPair pair;
  // Fractional sizes round down.
  pair.tau = static_cast<int>(std::floor(tau_exact + 1e-12));
  pair.rho = n / 4;

  std::vector<int> order = RandomPermutation(n, seed);
  order.resize(pair.rho);
  pair.r = Normalize(order);

  std::vector<double> beta(n, -static_cast<double>(pair.rho));
  for (int i : pair.r) beta[i] = 1.0;

  Instance base;
  base.costs.assign(n, 1.0);
  base.budget = static_cast<double>(n);

  pair.low = base;
  pair.low.valuation = XosValuation{{}, pair.tau};
  pair.high = base;
  pair.high.valuation = XosValuation{{beta}, pair.tau};
  return pair;
}

}  // namespace bfm
