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

// Executable checks for the incentive and approximation properties of the
// mechanisms: truthfulness on bid grids, budget/IR/feasibility, threshold
// payments, and Monte-Carlo checks of the probabilistic lemmas the analysis
// rests on. Every check is reproducible from its inputs and seeds.

#ifndef BFM_VERIFY_H_
#define BFM_VERIFY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfm/generators.h"
#include "bfm/instance.h"
#include "bfm/mechanisms.h"
#include "json.hpp"

namespace bfm {

struct Violation {
  std::string instance_id;
  std::uint64_t seed = 0;
  int agent = -1;
  double deviation_bid = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::string property;
  std::string subject;  // mechanism or valuation under test
  std::int64_t trials = 0;
  std::vector<Violation> violations;
  std::map<std::string, double> statistics;
  std::vector<std::string> notices;
  bool skipped = false;

  bool passed() const { return violations.empty(); }
};

nlohmann::json ToJson(const VerificationReport& report);

struct TestCase {
  std::string id;
  Instance instance;
};

// Runs a mechanism on (instance, bids) with all randomness derived from
// `seed` (tape and, for online mechanisms, the arrival order).
using MechanismRunner = std::function<MechanismOutcome(
    const Instance&, std::span<const double> bids, std::uint64_t seed)>;

struct NamedRunner {
  std::string name;
  MechanismRunner run;
};

NamedRunner MakeRunner(MechanismId id);

// Arrival order used by the runners for `seed`.
std::vector<int> ArrivalOrderForSeed(int n, std::uint64_t seed);

// Deliberately non-truthful control: density greedy on declared costs that
// pays each winner its bid.
NamedRunner BrokenFirstPriceRunner();

// Deviation bids tried for one agent: {0, c/2, c, π-δ, π, π+δ, 2π, B} with
// δ = 1e-6 B when the agent wins at price π, and {0, c/2, c, 2c, B} when
// it loses. Values outside [0, ∞) are dropped.
std::vector<double> BidGrid(double true_cost, std::optional<double> payment,
                            double budget);

// Checks the outcome invariants for one run: losers paid 0, winners paid at
// least their bid, Σ payments <= B (1 + 1e-9), winners independent and
// affordable. Returns a description of the first violation.
std::optional<std::string> CheckOutcome(const Instance& instance,
                                        std::span<const double> bids,
                                        const MechanismOutcome& outcome);

// For every (case, seed, agent, grid bid): utility at the true cost >=
// utility at the deviation - 1e-9 max(1, B).
VerificationReport CheckTruthfulness(const NamedRunner& runner,
                                     const std::vector<TestCase>& cases,
                                     std::span<const std::uint64_t> seeds);

VerificationReport CheckBudgetIrFeasibility(
    const NamedRunner& runner, const std::vector<TestCase>& cases,
    std::span<const std::uint64_t> seeds);

// Explicit prices vs. bisection on the winning bid, for up to `max_winners`
// winners; a winner disagrees if |π - search| > tolerance * B.
VerificationReport CheckPaymentCrossValidation(
    MechanismId id, const std::vector<TestCase>& cases,
    std::span<const std::uint64_t> seeds, int max_winners,
    double tolerance = 1e-8);

// Every strictly lower grid bid of a winner must reproduce the winner set
// exactly; checks up to `max_winners` winners.
VerificationReport CheckOutputInvariance(MechanismId id,
                                         const std::vector<TestCase>& cases,
                                         std::span<const std::uint64_t> seeds,
                                         int max_winners);

// P[v(T1) >= (k-1)/(4k) v(T) and v(T2) >= (k-1)/(4k) v(T)] over uniform
// splits of T; passes iff the estimate is >= 0.5 - 3σ. Skipped (with a
// notice) unless v(T) >= k max_{i∈T} v(i).
VerificationReport CheckSamplingLemma(const ValueOracle& oracle,
                                      const AgentSet& t, int k, int trials,
                                      std::uint64_t seed);

// Mean of v(random half of D) >= opt(D, ∞)/4 - 3σ. Requires |D| <= 16.
VerificationReport CheckFeigeBound(const ValueOracle& oracle,
                                   const AgentSet& ground, int trials,
                                   std::uint64_t seed);

// Worst-case approximation ceiling for `id` on a p-system; infinity when no
// ceiling applies.
double RatioCeiling(MechanismId id, double p);

// ratio = opt(B, constraint) / mean value over `seeds_per_instance` seeds,
// per instance; passes iff every ratio is within RatioCeiling. Instances
// with opt = 0 are skipped with a notice.
VerificationReport MeasureRatio(MechanismId id,
                                const std::vector<TestCase>& cases,
                                int seeds_per_instance,
                                std::uint64_t master_seed);

VerificationReport CheckSubmodularityReport(const std::string& subject,
                                            const ValueOracle& oracle, int n);

// Hard XOS pair: opt(v2,∞)/opt(v1,∞) by brute force and v2(S) = v1(S) on
// `samples` random S ⊄ R.
VerificationReport CheckXosHardPair(int n, double epsilon, int samples,
                                    std::uint64_t seed);

// Random test cases of a family; `constraint` is attached to every case.
std::vector<TestCase> MakeCases(Family family, int count, int n_min,
                                int n_max, std::uint64_t seed,
                                ConstraintKind constraint =
                                    ConstraintKind::kNone);

// `count` distinct per-trial seeds derived from `master`.
std::vector<std::uint64_t> MakeSeeds(std::uint64_t master, int count);

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index must
// write only to its own slot.
void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& body);

// Named suites: truthfulness, feasibility, payments, invariance,
// sampling-lemma, feige, ratios, submodularity, xos-hard, all.
struct SuiteOptions {
  std::uint64_t master_seed = 42;
  bool include_broken = false;  // add the non-truthful control mechanism
  int submodularity_n = 8;
  int jobs = 1;
};

std::vector<std::string> SuiteNames();
// Throws std::invalid_argument for unknown suites.
std::vector<VerificationReport> RunSuite(const std::string& suite,
                                         const SuiteOptions& options);

nlohmann::json SuiteToJson(const std::string& suite,
                           const SuiteOptions& options,
                           const std::vector<VerificationReport>& reports);
std::string SummaryCsv(const std::vector<VerificationReport>& reports);

}  // namespace bfm

#endif  // BFM_VERIFY_H_
