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

// Pieces shared by the offline and online mechanisms.

#ifndef BFM_SRC_MECHANISM_INTERNAL_H_
#define BFM_SRC_MECHANISM_INTERNAL_H_

#include <span>

#include "bfm/mechanisms.h"

namespace bfm::internal {

// Throws std::invalid_argument unless there is one finite, non-negative bid
// per agent and the tape covers every agent.
void CheckInputs(const Instance& instance, std::span<const double> bids,
                 const RandomTape& tape);

// Throws std::invalid_argument if `instance` carries a constraint.
void RequireUnconstrained(const Instance& instance, const char* mechanism);

// Agents whose bid is at most the budget; the others are recorded as
// kOverBudgetCost in `outcome`.
AgentSet ActiveAgents(const Instance& instance, std::span<const double> bids,
                      MechanismOutcome& outcome);

// Highest-value agent of `agents` that is independent on its own (ties:
// lowest id), or -1 when no agent has positive value.
int BestSingleton(const ValueOracle& oracle, const AgentSet& agents,
                  const IndependenceSystem& system);

MechanismOutcome EmptyOutcome(const Instance& instance);

// Winner set {agent} paid the full budget.
void AwardBudget(MechanismOutcome& outcome, int agent, double budget);

// Fills value and query count from the oracle.
void Finish(MechanismOutcome& outcome, const ValueOracle& oracle);

}  // namespace bfm::internal

#endif  // BFM_SRC_MECHANISM_INTERNAL_H_
