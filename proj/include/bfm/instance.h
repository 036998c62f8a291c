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

#ifndef BFM_INSTANCE_H_
#define BFM_INSTANCE_H_

#include <string>
#include <vector>

#include "bfm/independence.h"
#include "bfm/valuation.h"
#include "json.hpp"

namespace bfm {

// A procurement instance: agents 0..n-1 with (declared) costs, a budget, the
// buyer's valuation and an optional feasibility constraint.
struct Instance {
  std::vector<double> costs;
  double budget = 1.0;
  ValuationSpec valuation = AdditiveValuation{};
  ConstraintSpec constraint = NoConstraint{};

  int n() const { return static_cast<int>(costs.size()); }

  // The returned oracle borrows `valuation`; it must not outlive *this.
  ValueOracle MakeOracle() const;
  IndependenceSystem MakeSystem() const { return {constraint, n()}; }
};

// Throws std::invalid_argument on a negative/non-finite cost, a non-positive
// budget, or a valuation/constraint that does not fit n.
void Validate(const Instance& instance);

struct PreprocessedInstance {
  Instance instance;
  // kept[k] is the original id of the k-th retained agent.
  std::vector<int> kept;
};

// Drops every agent whose cost exceeds the budget and renumbers the rest
// (valuation and constraint are restricted accordingly).
PreprocessedInstance Preprocess(const Instance& instance);

// Restriction of `instance` to the agents listed in `kept` (ascending).
Instance Restrict(const Instance& instance, const std::vector<int>& kept);

nlohmann::json ToJson(const Instance& instance);
// Throws std::invalid_argument naming the missing or malformed field.
Instance InstanceFromJson(const nlohmann::json& j);

Instance LoadInstance(const std::string& path);
void SaveInstance(const Instance& instance, const std::string& path);

bool SameContent(const Instance& a, const Instance& b);

}  // namespace bfm

#endif  // BFM_INSTANCE_H_
