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

// Truthful budget-feasible procurement mechanisms for (possibly
// non-monotone) submodular valuations.
//
// Every mechanism is a deterministic function of (instance, bids, tape): the
// instance supplies the valuation, budget and constraint; `bids` are the
// declared costs (instance.costs is never read by a mechanism); the tape
// fixes every random choice. Agents keep their original ids throughout.
// Agents bidding above the budget are dropped up front.
//
// Winners are paid the take-it-or-leave-it price they accepted, which is
// their threshold bid; a winner of the singleton/secretary branch is paid
// the budget.

#ifndef BFM_MECHANISMS_H_
#define BFM_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bfm/agent_set.h"
#include "bfm/independence.h"
#include "bfm/instance.h"
#include "bfm/random_tape.h"
#include "bfm/subroutines.h"
#include "bfm/valuation.h"

namespace bfm {

inline constexpr double kMainSingletonProbability = 0.201;
inline constexpr double kMainBeta = 9.185;
inline constexpr double kOnlineDynkinProbability = 0.4;
inline constexpr double kOnlineBeta = 8.725;
inline constexpr double kMonotoneSingletonProbability = 0.2;
inline constexpr double kMonotoneBeta = 13.0 / 3.0;
inline constexpr double kConstrainedSingletonProbability = 1.0 / 3.0;
inline constexpr double kConstrainedBeta = 8.5;

enum class RejectReason {
  kCost,                 // declared cost above the offered price
  kBudget,               // price above the residual budget
  kIndependence,         // adding the agent breaks independence
  kNonpositiveMarginal,  // never examined: no positive marginal left
  kSampleHalf,           // in the sample half used to estimate opt
  kOverBudgetCost,       // declared cost above B, dropped up front
};

std::string ReasonName(RejectReason reason);

struct Rejection {
  int agent = -1;
  RejectReason reason = RejectReason::kCost;
  bool operator==(const Rejection&) const = default;
};

struct OutcomeTrace {
  // "singleton", "dynkin", "greedy" or "empty".
  std::string branch;
  // Which candidate set was returned: "S1", "S2", "T1", "T2" or "S".
  std::string chosen;
  AgentSet s1, s2, t1, t2;
  double x = 0.0;
  double residual1 = 0.0;  // B_1 (B_R for the single-set greedy)
  double residual2 = 0.0;
  std::vector<Rejection> rejections;
  // Sequence of examined (agent, set index) pairs in the greedy loop.
  std::vector<int> examined;
  std::vector<int> examined_slot;
  bool operator==(const OutcomeTrace&) const = default;
};

struct MechanismOutcome {
  AgentSet winners;
  std::vector<double> payments;  // one per agent, 0 for losers
  double value = 0.0;
  std::int64_t queries = 0;
  OutcomeTrace trace;

  double TotalPayment() const;
  bool operator==(const MechanismOutcome&) const = default;
};

// Result of the two-set threshold greedy.
struct GreedyRun {
  AgentSet s1, s2, t1, t2;
  AgentSet best;
  std::string chosen;
  // prices[i] is the price agent i accepted (0 if never accepted).
  std::vector<double> prices;
  double residual1 = 0.0;
  double residual2 = 0.0;
  std::vector<Rejection> rejections;
  std::vector<int> examined;
  std::vector<int> examined_slot;
};

// Builds S1 and S2 simultaneously over `ground`. Each round picks the
// (agent, set) pair with the largest marginal v(i|S_j) among pairs that keep
// S_j independent (ties: set 1 first, then lowest id) and stops once that
// marginal is <= 0. The agent is offered price (beta*B/x)*v(i|S_j) and
// joins S_j iff bid <= price <= B_j; either way it leaves the pool. Then
// T_j = double greedy on S_j and the best of S1, S2, T1, T2 is returned.
// Requires x > 0 and beta > 0.
GreedyRun SimultaneousGreedy(const ValueOracle& oracle, const AgentSet& ground,
                             std::span<const double> bids, double budget,
                             double x, double beta, std::uint64_t seed,
                             const IndependenceSystem& system = {});

// Offline mechanism: with probability 0.201 the best singleton (paid B);
// otherwise random halves A1/A2, x from the knapsack heuristic on A1, and
// SimultaneousGreedy on A2 with beta = 9.185.
MechanismOutcome GenSmMain(const Instance& instance,
                           std::span<const double> bids,
                           const RandomTape& tape);

// The greedy branch of GenSmMain on its own, ignoring the branch coin.
MechanismOutcome SampleThenGreedy(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape);

// Secretary-model mechanism. With probability 0.4 Dynkin's rule over single
// values (paid B). Otherwise the returned set among S1, S2, T1, T2 is fixed
// up front, the first xi arrivals (xi ~ Bin(n, 1/2)) only estimate x, and
// each later arrival is offered (beta*B/x)*v(i|S_j) for its better set
// (beta = 8.725) and, if accepted, joins T_j on its tape coin.
MechanismOutcome GenSmOnline(const Instance& instance,
                             std::span<const double> bids,
                             std::span<const int> arrival_order,
                             const RandomTape& tape);

// Non-strategic secretary knapsack: GenSmOnline with the true costs.
SolverResult SksRun(const Instance& instance,
                    std::span<const int> arrival_order,
                    const RandomTape& tape);

// Monotone valuations under an independence system: with probability 0.2
// the best independent singleton, else a single threshold greedy with
// beta = 13/3. Throws std::invalid_argument for non-monotone valuations.
MechanismOutcome MonSmConstrained(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape);

// Non-monotone valuations under an independence system: with probability
// 1/3 the best independent singleton, else the constrained two-set greedy
// with beta = 8.5.
MechanismOutcome GenSmConstrained(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape);

enum class MechanismId {
  kGenSmMain,
  kSampleThenGreedy,
  kGenSmOnline,
  kSks,
  kMonSmConstrained,
  kGenSmConstrained,
};

std::string MechanismName(MechanismId id);
// Accepts the names produced by MechanismName; throws std::invalid_argument.
MechanismId ParseMechanism(const std::string& name);

// The truthful mechanisms (everything except kSks).
std::vector<MechanismId> TruthfulMechanisms();

// Whether `id` can run on `instance` (MonSm needs a monotone valuation).
bool Supports(MechanismId id, const Instance& instance);

// Uniform entry point. `arrival_order` is used by the online mechanisms only
// (empty = identity order). kSks ignores `bids` and uses the true costs.
MechanismOutcome RunMechanism(MechanismId id, const Instance& instance,
                              std::span<const double> bids,
                              const RandomTape& tape,
                              std::span<const int> arrival_order = {});

// A mechanism with everything but the bid vector fixed.
using BidMechanism =
    std::function<MechanismOutcome(std::span<const double> bids)>;

// Supremum winning bid of `winner` by bisection over [bids[winner], budget],
// to budget * 1e-9 precision. Throws std::invalid_argument if `winner` does
// not win at `bids`.
double PaymentByBidSearch(const BidMechanism& mechanism,
                          std::span<const double> bids, int winner,
                          double budget);

double PaymentByBidSearch(MechanismId id, const Instance& instance,
                          std::span<const double> bids,
                          const RandomTape& tape, int winner,
                          std::span<const int> arrival_order = {});

}  // namespace bfm

#endif  // BFM_MECHANISMS_H_
