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

#include "bfm/independence.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bfm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw std::invalid_argument("constraint." + field + ": " + what);
}

void RequireAgent(int agent, int n, const std::string& field) {
  if (agent < 0 || agent >= n) Invalid(field, "agent id out of range");
}

}  // namespace

std::string ConstraintType(const ConstraintSpec& spec) {
  return std::visit(
      Overloaded{
          [](const NoConstraint&) { return "none"; },
          [](const CardinalityConstraint&) { return "cardinality"; },
          [](const PartitionConstraint&) { return "partition"; },
          [](const MatchingConstraint&) { return "matching"; },
          [](const ConflictGraphConstraint&) { return "conflict_graph"; },
      },
      spec);
}

void ValidateConstraint(const ConstraintSpec& spec, int n) {
  std::visit(
      Overloaded{
          [](const NoConstraint&) {},
          [](const CardinalityConstraint& c) {
            if (c.k < 0) Invalid("k", "must be >= 0");
          },
          [n](const PartitionConstraint& p) {
            if (p.parts.size() != p.caps.size()) {
              Invalid("caps", "needs one cap per part");
            }
            std::vector<char> seen(n > 0 ? n : 0, 0);
            for (const auto& part : p.parts) {
              for (int a : part) {
                RequireAgent(a, n, "parts");
                if (seen[a]) Invalid("parts", "agent listed in two parts");
                seen[a] = 1;
              }
            }
            for (int cap : p.caps) {
              if (cap < 0) Invalid("caps", "must be >= 0");
            }
          },
          [n](const MatchingConstraint& m) {
            if (m.vertices < 0) Invalid("vertices", "must be >= 0");
            if (static_cast<int>(m.agent_edge.size()) != n) {
              Invalid("agent_edge",
                      "expected " + std::to_string(n) + " entries");
            }
            for (const auto& [u, v] : m.agent_edge) {
              if (u < 0 || u >= m.vertices || v < 0 || v >= m.vertices) {
                Invalid("agent_edge", "vertex out of range");
              }
              if (u == v) Invalid("agent_edge", "self loops are not edges");
            }
          },
          [n](const ConflictGraphConstraint& g) {
            for (const auto& [a, b] : g.edges) {
              RequireAgent(a, n, "edges");
              RequireAgent(b, n, "edges");
            }
          },
      },
      spec);
}

IndependenceSystem::IndependenceSystem(ConstraintSpec spec, int n)
    : spec_(std::move(spec)), n_(n) {
  ValidateConstraint(spec_, n_);
  if (const auto* p = std::get_if<PartitionConstraint>(&spec_)) {
    part_of_.assign(n_, -1);
    for (std::size_t j = 0; j < p->parts.size(); ++j) {
      for (int a : p->parts[j]) part_of_[a] = static_cast<int>(j);
    }
  }
}

bool IndependenceSystem::IsIndependent(const AgentSet& set) const {
  return std::visit(
      Overloaded{
          [](const NoConstraint&) { return true; },
          [&](const CardinalityConstraint& c) {
            return static_cast<int>(set.size()) <= c.k;
          },
          [&](const PartitionConstraint& p) {
            std::vector<int> used(p.parts.size(), 0);
            for (int a : set) {
              const int j = part_of_[a];
              if (j >= 0 && ++used[j] > p.caps[j]) return false;
            }
            return true;
          },
          [&](const MatchingConstraint& m) {
            std::vector<char> covered(m.vertices, 0);
            for (int a : set) {
              const auto [u, v] = m.agent_edge[a];
              if (covered[u] || covered[v]) return false;
              covered[u] = covered[v] = 1;
            }
            return true;
          },
          [&](const ConflictGraphConstraint& g) {
            for (const auto& [a, b] : g.edges) {
              if (Contains(set, a) && Contains(set, b)) return false;
            }
            return true;
          },
      },
      spec_);
}

bool IndependenceSystem::CanAdd(const AgentSet& set, int agent) const {
  return IsIndependent(With(set, agent));
}

double RankQuotient(const IndependenceSystem& system, int n) {
  if (n > 16) {
    throw std::invalid_argument(
        "rank quotient is exhaustive and limited to n <= 16; estimate by "
        "sampling subsets instead");
  }
  const AgentSet ground = Range(n);
  const std::uint32_t full = (std::uint32_t{1} << n);
  std::vector<char> independent(full);
  for (std::uint32_t m = 0; m < full; ++m) {
    independent[m] = system.IsIndependent(FromMask(ground, m));
  }

  std::vector<int> upper(full, 0);
  std::vector<int> lower(full, std::numeric_limits<int>::max());
  const std::uint32_t all = full - 1;
  for (std::uint32_t basis = 0; basis < full; ++basis) {
    if (!independent[basis]) continue;
    std::uint32_t extendable = 0;
    for (int e = 0; e < n; ++e) {
      const std::uint32_t bit = std::uint32_t{1} << e;
      if (!(basis & bit) && independent[basis | bit]) extendable |= bit;
    }
    // `basis` is a maximal independent subset of exactly those S with
    // basis ⊆ S ⊆ all \ extendable.
    const std::uint32_t free = all & ~extendable & ~basis;
    const int size = std::popcount(basis);
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      const std::uint32_t s = basis | sub;
      upper[s] = std::max(upper[s], size);
      lower[s] = std::min(lower[s], size);
      if (sub == 0) break;
    }
  }

  double quotient = 1.0;
  for (std::uint32_t s = 1; s < full; ++s) {
    if (upper[s] == 0) continue;
    quotient = std::max(quotient, static_cast<double>(upper[s]) / lower[s]);
  }
  return quotient;
}

}  // namespace bfm
