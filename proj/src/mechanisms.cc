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

#include "bfm/mechanisms.h"

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mechanism_internal.h"

namespace bfm {

namespace internal {

void CheckInputs(const Instance& instance, std::span<const double> bids,
                 const RandomTape& tape) {
  if (static_cast<int>(bids.size()) != instance.n()) {
    throw std::invalid_argument("expected one bid per agent");
  }
  for (double b : bids) {
    if (!std::isfinite(b) || b < 0) {
      throw std::invalid_argument("bids must be finite and non-negative");
    }
  }
  if (tape.agent_count() < instance.n() ||
      static_cast<int>(tape.xi_draws.size()) < instance.n() ||
      static_cast<int>(tape.t_coins.size()) < instance.n()) {
    throw std::invalid_argument("random tape drawn for fewer agents");
  }
}

AgentSet ActiveAgents(const Instance& instance, std::span<const double> bids,
                      MechanismOutcome& outcome) {
  AgentSet active;
  for (int i = 0; i < instance.n(); ++i) {
    if (bids[i] <= instance.budget) {
      active.push_back(i);
    } else {
      outcome.trace.rejections.push_back({i, RejectReason::kOverBudgetCost});
    }
  }
  return active;
}

int BestSingleton(const ValueOracle& oracle, const AgentSet& agents,
                  const IndependenceSystem& system) {
  int best = -1;
  double best_value = 0.0;
  for (int i : agents) {
    if (!system.IsIndependent({i})) continue;
    const double value = oracle.Singleton(i);
    if (value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

void RequireUnconstrained(const Instance& instance, const char* mechanism) {
  if (!std::holds_alternative<NoConstraint>(instance.constraint)) {
    throw std::invalid_argument(std::string(mechanism) +
                                " does not take a constraint, got '" +
                                ConstraintType(instance.constraint) + "'");
  }
}

MechanismOutcome EmptyOutcome(const Instance& instance) {
  MechanismOutcome outcome;
  outcome.payments.assign(instance.n(), 0.0);
  return outcome;
}

void AwardBudget(MechanismOutcome& outcome, int agent, double budget) {
  outcome.winners = {agent};
  outcome.payments[agent] = budget;
}

void Finish(MechanismOutcome& outcome, const ValueOracle& oracle) {
  outcome.value = oracle.Value(outcome.winners);
  outcome.queries = oracle.queries();
}

}  // namespace internal

namespace {

using internal::ActiveAgents;
using internal::AwardBudget;
using internal::BestSingleton;
using internal::CheckInputs;
using internal::EmptyOutcome;
using internal::Finish;
using internal::RequireUnconstrained;

struct Split {
  AgentSet sample;  // A1
  AgentSet rest;    // A2
};

Split SplitByCoins(const AgentSet& active, const RandomTape& tape,
                   MechanismOutcome& outcome) {
  Split split;
  for (int i : active) {
    if (tape.partition_coins[i] < 0.5) {
      split.sample.push_back(i);
      outcome.trace.rejections.push_back({i, RejectReason::kSampleHalf});
    } else {
      split.rest.push_back(i);
    }
  }
  return split;
}

void CopyGreedy(const GreedyRun& run, MechanismOutcome& outcome) {
  auto& trace = outcome.trace;
  trace.branch = "greedy";
  trace.chosen = run.chosen;
  trace.s1 = run.s1;
  trace.s2 = run.s2;
  trace.t1 = run.t1;
  trace.t2 = run.t2;
  trace.residual1 = run.residual1;
  trace.residual2 = run.residual2;
  trace.examined = run.examined;
  trace.examined_slot = run.examined_slot;
  trace.rejections.insert(trace.rejections.end(), run.rejections.begin(),
                          run.rejections.end());
  outcome.winners = run.best;
  for (int i : run.best) outcome.payments[i] = run.prices[i];
}

MechanismOutcome SingletonBranch(const Instance& instance,
                                 const ValueOracle& oracle,
                                 const AgentSet& active,
                                 const IndependenceSystem& system,
                                 MechanismOutcome outcome) {
  outcome.trace.branch = "singleton";
  const int best = BestSingleton(oracle, active, system);
  if (best >= 0) AwardBudget(outcome, best, instance.budget);
  Finish(outcome, oracle);
  return outcome;
}

// Shared tail of the offline mechanisms: estimate x on the sample half with
// `estimate`, then run the two-set greedy on the other half.
template <class Estimate>
MechanismOutcome TwoSetBranch(const Instance& instance,
                              std::span<const double> bids,
                              const RandomTape& tape, const ValueOracle& oracle,
                              const AgentSet& active,
                              const IndependenceSystem& system, double beta,
                              Estimate&& estimate, MechanismOutcome outcome) {
  const Split split = SplitByCoins(active, tape, outcome);
  const double x = estimate(split.sample);
  outcome.trace.x = x;
  if (!(x > 0)) {
    outcome.trace.branch = "empty";
    Finish(outcome, oracle);
    return outcome;
  }
  const GreedyRun run =
      SimultaneousGreedy(oracle, split.rest, bids, instance.budget, x, beta,
                         DeriveSeed(tape.sub_seed, 2), system);
  CopyGreedy(run, outcome);
  Finish(outcome, oracle);
  return outcome;
}

MechanismOutcome SampleThenGreedyImpl(const Instance& instance,
                                      std::span<const double> bids,
                                      const RandomTape& tape,
                                      const ValueOracle& oracle,
                                      const AgentSet& active,
                                      MechanismOutcome outcome) {
  const IndependenceSystem none;
  auto estimate = [&](const AgentSet& sample) {
    return TwoPassKnapsack(oracle, sample, bids, instance.budget,
                           DeriveSeed(tape.sub_seed, 1))
        .value;
  };
  return TwoSetBranch(instance, bids, tape, oracle, active, none, kMainBeta,
                      estimate, std::move(outcome));
}

}  // namespace

std::string ReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kCost:
      return "COST";
    case RejectReason::kBudget:
      return "BUDGET";
    case RejectReason::kIndependence:
      return "INDEPENDENCE";
    case RejectReason::kNonpositiveMarginal:
      return "NONPOSITIVE_MARGINAL";
    case RejectReason::kSampleHalf:
      return "SAMPLE_HALF";
    case RejectReason::kOverBudgetCost:
      return "OVER_BUDGET_COST";
  }
  return "UNKNOWN";
}

double MechanismOutcome::TotalPayment() const {
  double total = 0.0;
  for (double p : payments) total += p;
  return total;
}

GreedyRun SimultaneousGreedy(const ValueOracle& oracle, const AgentSet& ground,
                             std::span<const double> bids, double budget,
                             double x, double beta, std::uint64_t seed,
                             const IndependenceSystem& system) {
  if (!(x > 0) || !(beta > 0)) {
    throw std::invalid_argument("simultaneous greedy needs x > 0, beta > 0");
  }
  GreedyRun run;
  run.prices.assign(oracle.agent_count(), 0.0);
  std::array<AgentSet, 2> sets;
  std::array<double, 2> residual{budget, budget};
  std::array<double, 2> set_value{oracle.Value(sets[0]),
                                  oracle.Value(sets[1])};
  const double rate = beta * budget / x;
  AgentSet pool = ground;

  while (true) {
    int best_agent = -1;
    int best_slot = 0;
    double best_marginal = 0.0;
    double best_grown = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int i : pool) {
        if (!system.CanAdd(sets[j], i)) continue;
        const double grown = oracle.Value(With(sets[j], i));
        const double marginal = grown - set_value[j];
        if (best_agent < 0 || marginal > best_marginal) {
          best_agent = i;
          best_slot = j;
          best_marginal = marginal;
          best_grown = grown;
        }
      }
    }
    if (best_agent < 0 || !(best_marginal > 0)) break;

    run.examined.push_back(best_agent);
    run.examined_slot.push_back(best_slot + 1);
    const double price = rate * best_marginal;
    if (bids[best_agent] <= price && price <= residual[best_slot]) {
      Insert(sets[best_slot], best_agent);
      residual[best_slot] -= price;
      set_value[best_slot] = best_grown;
      run.prices[best_agent] = price;
    } else {
      run.rejections.push_back({best_agent, bids[best_agent] > price
                                                ? RejectReason::kCost
                                                : RejectReason::kBudget});
    }
    pool = Without(pool, best_agent);
  }

  for (int i : pool) {
    const bool fits = system.CanAdd(sets[0], i) || system.CanAdd(sets[1], i);
    run.rejections.push_back({i, fits ? RejectReason::kNonpositiveMarginal
                                      : RejectReason::kIndependence});
  }

  run.s1 = sets[0];
  run.s2 = sets[1];
  run.t1 = PruneToIndependent(
      DoubleGreedy(oracle, run.s1, DeriveSeed(seed, 11)).chosen, system);
  run.t2 = PruneToIndependent(
      DoubleGreedy(oracle, run.s2, DeriveSeed(seed, 12)).chosen, system);
  run.residual1 = residual[0];
  run.residual2 = residual[1];

  const std::array<std::pair<const AgentSet*, const char*>, 4> candidates{{
      {&run.s1, "S1"},
      {&run.s2, "S2"},
      {&run.t1, "T1"},
      {&run.t2, "T2"},
  }};
  double best_value = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double value = oracle.Value(*candidates[k].first);
    if (k == 0 || value > best_value) {
      best_value = value;
      run.best = *candidates[k].first;
      run.chosen = candidates[k].second;
    }
  }
  return run;
}

MechanismOutcome GenSmMain(const Instance& instance,
                           std::span<const double> bids,
                           const RandomTape& tape) {
  CheckInputs(instance, bids, tape);
  RequireUnconstrained(instance, "gensm-main");
  const ValueOracle oracle = instance.MakeOracle();
  MechanismOutcome outcome = EmptyOutcome(instance);
  const AgentSet active = ActiveAgents(instance, bids, outcome);
  if (tape.branch_coin < kMainSingletonProbability) {
    return SingletonBranch(instance, oracle, active, IndependenceSystem(),
                           std::move(outcome));
  }
  return SampleThenGreedyImpl(instance, bids, tape, oracle, active,
                              std::move(outcome));
}

MechanismOutcome SampleThenGreedy(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape) {
  CheckInputs(instance, bids, tape);
  RequireUnconstrained(instance, "sample-then-greedy");
  const ValueOracle oracle = instance.MakeOracle();
  MechanismOutcome outcome = EmptyOutcome(instance);
  const AgentSet active = ActiveAgents(instance, bids, outcome);
  return SampleThenGreedyImpl(instance, bids, tape, oracle, active,
                              std::move(outcome));
}

MechanismOutcome MonSmConstrained(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape) {
  if (!IsMonotone(instance.valuation)) {
    throw std::invalid_argument(
        "monsm-constrained requires a monotone valuation, got '" +
        ValuationType(instance.valuation) + "'");
  }
  CheckInputs(instance, bids, tape);
  const ValueOracle oracle = instance.MakeOracle();
  const IndependenceSystem system = instance.MakeSystem();
  MechanismOutcome outcome = EmptyOutcome(instance);
  const AgentSet active = ActiveAgents(instance, bids, outcome);
  if (tape.branch_coin < kMonotoneSingletonProbability) {
    return SingletonBranch(instance, oracle, active, system,
                           std::move(outcome));
  }

  const Split split = SplitByCoins(active, tape, outcome);
  const double x =
      ConstrainedGreedy(oracle, split.sample, bids, instance.budget, system,
                        /*monotone=*/true, DeriveSeed(tape.sub_seed, 1))
          .value;
  outcome.trace.x = x;
  if (!(x > 0)) {
    outcome.trace.branch = "empty";
    Finish(outcome, oracle);
    return outcome;
  }

  const double rate = kMonotoneBeta * instance.budget / x;
  AgentSet chosen;
  double chosen_value = oracle.Value(chosen);
  double residual = instance.budget;
  AgentSet pool = split.rest;
  while (!pool.empty()) {
    int best = -1;
    double best_marginal = 0.0;
    double best_grown = 0.0;
    for (int i : pool) {
      const double grown = oracle.Value(With(chosen, i));
      const double marginal = grown - chosen_value;
      if (best < 0 || marginal > best_marginal) {
        best = i;
        best_marginal = marginal;
        best_grown = grown;
      }
    }
    outcome.trace.examined.push_back(best);
    outcome.trace.examined_slot.push_back(1);
    const double price = rate * best_marginal;
    const bool cost_ok = bids[best] <= price;
    const bool budget_ok = price <= residual;
    const bool independent = system.CanAdd(chosen, best);
    if (cost_ok && budget_ok && independent) {
      Insert(chosen, best);
      chosen_value = best_grown;
      residual -= price;
      outcome.payments[best] = price;
    } else {
      const RejectReason reason = !cost_ok     ? RejectReason::kCost
                                  : !budget_ok ? RejectReason::kBudget
                                               : RejectReason::kIndependence;
      outcome.trace.rejections.push_back({best, reason});
    }
    pool = Without(pool, best);
  }

  outcome.trace.branch = "greedy";
  outcome.trace.chosen = "S";
  outcome.trace.s1 = chosen;
  outcome.trace.residual1 = residual;
  outcome.trace.residual2 = instance.budget;
  outcome.winners = std::move(chosen);
  Finish(outcome, oracle);
  return outcome;
}

MechanismOutcome GenSmConstrained(const Instance& instance,
                                  std::span<const double> bids,
                                  const RandomTape& tape) {
  CheckInputs(instance, bids, tape);
  const ValueOracle oracle = instance.MakeOracle();
  const IndependenceSystem system = instance.MakeSystem();
  MechanismOutcome outcome = EmptyOutcome(instance);
  const AgentSet active = ActiveAgents(instance, bids, outcome);
  if (tape.branch_coin < kConstrainedSingletonProbability) {
    return SingletonBranch(instance, oracle, active, system,
                           std::move(outcome));
  }
  auto estimate = [&](const AgentSet& sample) {
    return ConstrainedGreedy(oracle, sample, bids, instance.budget, system,
                             /*monotone=*/false, DeriveSeed(tape.sub_seed, 1))
        .value;
  };
  return TwoSetBranch(instance, bids, tape, oracle, active, system,
                      kConstrainedBeta, estimate, std::move(outcome));
}

std::string MechanismName(MechanismId id) {
  switch (id) {
    case MechanismId::kGenSmMain:
      return "gensm-main";
    case MechanismId::kSampleThenGreedy:
      return "sample-then-greedy";
    case MechanismId::kGenSmOnline:
      return "gensm-online";
    case MechanismId::kSks:
      return "sks";
    case MechanismId::kMonSmConstrained:
      return "monsm-constrained";
    case MechanismId::kGenSmConstrained:
      return "gensm-constrained";
  }
  return "unknown";
}

MechanismId ParseMechanism(const std::string& name) {
  for (MechanismId id :
       {MechanismId::kGenSmMain, MechanismId::kSampleThenGreedy,
        MechanismId::kGenSmOnline, MechanismId::kSks,
        MechanismId::kMonSmConstrained, MechanismId::kGenSmConstrained}) {
    if (MechanismName(id) == name) return id;
  }
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

std::vector<MechanismId> TruthfulMechanisms() {
  return {MechanismId::kGenSmMain, MechanismId::kSampleThenGreedy,
          MechanismId::kGenSmOnline, MechanismId::kMonSmConstrained,
          MechanismId::kGenSmConstrained};
}

bool Supports(MechanismId id, const Instance& instance) {
  switch (id) {
    case MechanismId::kGenSmMain:
    case MechanismId::kSampleThenGreedy:
    case MechanismId::kGenSmOnline:
    case MechanismId::kSks:
      return std::holds_alternative<NoConstraint>(instance.constraint);
    case MechanismId::kMonSmConstrained:
      return IsMonotone(instance.valuation);
    case MechanismId::kGenSmConstrained:
      return true;
  }
  return false;
}

MechanismOutcome RunMechanism(MechanismId id, const Instance& instance,
                              std::span<const double> bids,
                              const RandomTape& tape,
                              std::span<const int> arrival_order) {
  std::vector<int> identity;
  if (arrival_order.empty() && instance.n() > 0) {
    identity.resize(instance.n());
    std::iota(identity.begin(), identity.end(), 0);
    arrival_order = identity;
  }
  switch (id) {
    case MechanismId::kGenSmMain:
      return GenSmMain(instance, bids, tape);
    case MechanismId::kSampleThenGreedy:
      return SampleThenGreedy(instance, bids, tape);
    case MechanismId::kGenSmOnline:
      return GenSmOnline(instance, bids, arrival_order, tape);
    case MechanismId::kSks:
      return GenSmOnline(instance, instance.costs, arrival_order, tape);
    case MechanismId::kMonSmConstrained:
      return MonSmConstrained(instance, bids, tape);
    case MechanismId::kGenSmConstrained:
      return GenSmConstrained(instance, bids, tape);
  }
  throw std::invalid_argument("unknown mechanism id");
}

double PaymentByBidSearch(const BidMechanism& mechanism,
                          std::span<const double> bids, int winner,
                          double budget) {
  auto wins = [&](double bid) {
    std::vector<double> deviated(bids.begin(), bids.end());
    deviated[winner] = bid;
    return Contains(mechanism(deviated).winners, winner);
  };
  if (winner < 0 || winner >= static_cast<int>(bids.size()) ||
      !Contains(mechanism(bids).winners, winner)) {
    throw std::invalid_argument("agent " + std::to_string(winner) +
                                " does not win at the given bids");
  }
  double lo = bids[winner];
  double hi = budget;
  if (wins(hi)) return hi;
  const double precision = 1e-9 * budget;
  while (hi - lo > precision) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (wins(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double PaymentByBidSearch(MechanismId id, const Instance& instance,
                          std::span<const double> bids,
                          const RandomTape& tape, int winner,
                          std::span<const int> arrival_order) {
  const std::vector<int> order(arrival_order.begin(), arrival_order.end());
  return PaymentByBidSearch(
      [&](std::span<const double> b) {
        return RunMechanism(id, instance, b, tape, order);
      },
      bids, winner, instance.budget);
}

}  // namespace bfm
