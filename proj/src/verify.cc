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

#include "bfm/verify.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bfm/random_tape.h"
#include "bfm/subroutines.h"

namespace bfm {

using nlohmann::json;

namespace {

constexpr std::uint64_t kOrderStream = 77;

double Utility(const MechanismOutcome& outcome, int agent, double true_cost) {
  return Contains(outcome.winners, agent)
             ? outcome.payments[agent] - true_cost
             : 0.0;
}

std::string Describe(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

// Binomial coefficient as a double; exact for the small arguments used here.
double Choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

}  // namespace

json ToJson(const VerificationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"instance", v.instance_id},
                          {"seed", v.seed},
                          {"agent", v.agent},
                          {"deviation_bid", v.deviation_bid},
                          {"detail", v.detail}});
  }
  return json{{"property", report.property},
              {"subject", report.subject},
              {"trials", report.trials},
              {"passed", report.passed()},
              {"skipped", report.skipped},
              {"statistics", report.statistics},
              {"notices", report.notices},
              {"violations", violations}};
}

std::vector<int> ArrivalOrderForSeed(int n, std::uint64_t seed) {
  return RandomPermutation(n, DeriveSeed(seed, kOrderStream));
}

NamedRunner MakeRunner(MechanismId id) {
  return {MechanismName(id),
          [id](const Instance& instance, std::span<const double> bids,
               std::uint64_t seed) {
            const RandomTape tape = DrawTape(seed, instance.n());
            if (id == MechanismId::kGenSmOnline || id == MechanismId::kSks) {
              const std::vector<int> order =
                  ArrivalOrderForSeed(instance.n(), seed);
              return RunMechanism(id, instance, bids, tape, order);
            }
            return RunMechanism(id, instance, bids, tape);
          }};
}

NamedRunner BrokenFirstPriceRunner() {
  return {"broken-first-price",
          [](const Instance& instance, std::span<const double> bids,
             std::uint64_t) {
            const ValueOracle oracle = instance.MakeOracle();
            MechanismOutcome outcome;
            outcome.payments.assign(instance.n(), 0.0);
            AgentSet active;
            for (int i = 0; i < instance.n(); ++i) {
              if (bids[i] <= instance.budget) active.push_back(i);
            }
            outcome.winners =
                DensityGreedy(oracle, active, bids, instance.budget,
                              instance.MakeSystem());
            for (int i : outcome.winners) outcome.payments[i] = bids[i];
            outcome.value = oracle.Value(outcome.winners);
            outcome.queries = oracle.queries();
            return outcome;
          }};
}

std::vector<double> BidGrid(double true_cost, std::optional<double> payment,
                            double budget) {
  std::vector<double> grid{0.0, true_cost / 2, true_cost};
  if (payment) {
    const double delta = 1e-6 * budget;
    const double pi = *payment;
    grid.insert(grid.end(), {pi - delta, pi, pi + delta, 2 * pi});
  } else {
    grid.push_back(2 * true_cost);
  }
  grid.push_back(budget);
  std::vector<double> out;
  for (double b : grid) {
    if (b >= 0 && std::isfinite(b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::string> CheckOutcome(const Instance& instance,
                                        std::span<const double> bids,
                                        const MechanismOutcome& outcome) {
  const double slack = 1e-9 * instance.budget;
  if (static_cast<int>(outcome.payments.size()) != instance.n()) {
    return "payment vector has the wrong length";
  }
  for (int i = 0; i < instance.n(); ++i) {
    const bool wins = Contains(outcome.winners, i);
    if (!wins && outcome.payments[i] != 0.0) {
      return "loser " + std::to_string(i) + " paid " +
             Describe(outcome.payments[i]);
    }
    if (wins && outcome.payments[i] < bids[i] - slack) {
      return "winner " + std::to_string(i) + " paid " +
             Describe(outcome.payments[i]) + " below bid " +
             Describe(bids[i]);
    }
  }
  const double total = outcome.TotalPayment();
  if (total > instance.budget + slack) {
    return "total payment " + Describe(total) + " exceeds budget " +
           Describe(instance.budget);
  }
  if (!instance.MakeSystem().IsIndependent(outcome.winners)) {
    return "winner set is not independent";
  }
  if (TotalCost(outcome.winners, bids) > instance.budget + slack) {
    return "winners' declared cost exceeds the budget";
  }
  return std::nullopt;
}

VerificationReport CheckTruthfulness(const NamedRunner& runner,
                                     const std::vector<TestCase>& cases,
                                     std::span<const std::uint64_t> seeds) {
  VerificationReport report;
  report.property = "truthfulness";
  report.subject = runner.name;
  std::int64_t deviations = 0;
  for (const auto& test : cases) {
    const Instance& instance = test.instance;
    const std::vector<double>& costs = instance.costs;
    const double tol = 1e-9 * std::max(1.0, instance.budget);
    for (std::uint64_t seed : seeds) {
      ++report.trials;
      const MechanismOutcome truth = runner.run(instance, costs, seed);
      std::vector<double> bids = costs;
      for (int i = 0; i < instance.n(); ++i) {
        const double honest = Utility(truth, i, costs[i]);
        const std::optional<double> payment =
            Contains(truth.winners, i)
                ? std::optional<double>(truth.payments[i])
                : std::nullopt;
        for (double b : BidGrid(costs[i], payment, instance.budget)) {
          if (b == costs[i]) continue;
          ++deviations;
          bids[i] = b;
          const MechanismOutcome lie = runner.run(instance, bids, seed);
          const double gain = Utility(lie, i, costs[i]);
          if (gain > honest + tol) {
            report.violations.push_back(
                {test.id, seed, i, b,
                 "utility " + Describe(gain) + " when lying vs " +
                     Describe(honest) + " when truthful"});
          }
        }
        bids[i] = costs[i];
      }
    }
  }
  report.statistics["deviations"] = static_cast<double>(deviations);
  report.statistics["instances"] = static_cast<double>(cases.size());
  return report;
}

VerificationReport CheckBudgetIrFeasibility(
    const NamedRunner& runner, const std::vector<TestCase>& cases,
    std::span<const std::uint64_t> seeds) {
  VerificationReport report;
  report.property = "budget-ir-feasibility";
  report.subject = runner.name;
  double max_total_over_budget = 0.0;
  std::int64_t runs = 0;
  std::int64_t nonempty = 0;
  for (const auto& test : cases) {
    const Instance& instance = test.instance;
    for (std::uint64_t seed : seeds) {
      ++report.trials;
      // Truthful bids, plus one random misreport vector per pair.
      Rng rng(DeriveSeed(seed, 91));
      std::vector<double> misreport = instance.costs;
      for (double& b : misreport) b *= rng.Uniform(0.5, 1.5);
      const std::array<const std::vector<double>*, 2> bid_vectors{
          &instance.costs, &misreport};
      for (const std::vector<double>* bids : bid_vectors) {
        ++runs;
        const MechanismOutcome outcome = runner.run(instance, *bids, seed);
        if (!outcome.winners.empty()) ++nonempty;
        max_total_over_budget = std::max(
            max_total_over_budget, outcome.TotalPayment() / instance.budget);
        if (const auto problem = CheckOutcome(instance, *bids, outcome)) {
          report.violations.push_back({test.id, seed, -1, 0.0, *problem});
        }
      }
    }
  }
  report.statistics["runs"] = static_cast<double>(runs);
  report.statistics["nonempty_runs"] = static_cast<double>(nonempty);
  report.statistics["max_total_payment_over_budget"] = max_total_over_budget;
  return report;
}

VerificationReport CheckPaymentCrossValidation(
    MechanismId id, const std::vector<TestCase>& cases,
    std::span<const std::uint64_t> seeds, int max_winners, double tolerance) {
  VerificationReport report;
  report.property = "payment-cross-validation";
  report.subject = MechanismName(id);
  const NamedRunner runner = MakeRunner(id);
  int checked = 0;
  double worst = 0.0;
  for (const auto& test : cases) {
    const Instance& instance = test.instance;
    if (!Supports(id, instance)) continue;
    for (std::uint64_t seed : seeds) {
      if (checked >= max_winners) break;
      ++report.trials;
      const MechanismOutcome truth = runner.run(instance, instance.costs, seed);
      for (int w : truth.winners) {
        if (checked >= max_winners) break;
        ++checked;
        const double searched = PaymentByBidSearch(
            [&](std::span<const double> b) {
              return runner.run(instance, b, seed);
            },
            instance.costs, w, instance.budget);
        const double diff =
            std::abs(searched - truth.payments[w]) / instance.budget;
        worst = std::max(worst, diff);
        if (diff > tolerance) {
          report.violations.push_back(
              {test.id, seed, w, searched,
               "explicit price " + Describe(truth.payments[w]) +
                   " vs bid search " + Describe(searched)});
        }
      }
    }
  }
  report.statistics["winners_checked"] = checked;
  report.statistics["max_abs_diff_over_budget"] = worst;
  return report;
}

VerificationReport CheckOutputInvariance(MechanismId id,
                                         const std::vector<TestCase>& cases,
                                         std::span<const std::uint64_t> seeds,
                                         int max_winners) {
  VerificationReport report;
  report.property = "output-invariance";
  report.subject = MechanismName(id);
  const NamedRunner runner = MakeRunner(id);
  int checked = 0;
  std::int64_t reruns = 0;
  for (const auto& test : cases) {
    const Instance& instance = test.instance;
    if (!Supports(id, instance)) continue;
    for (std::uint64_t seed : seeds) {
      if (checked >= max_winners) break;
      ++report.trials;
      const MechanismOutcome truth = runner.run(instance, instance.costs, seed);
      for (int w : truth.winners) {
        if (checked >= max_winners) break;
        ++checked;
        const double c = instance.costs[w];
        std::vector<double> lower{0.0, c / 4, c / 2, 3 * c / 4,
                                  c - 1e-6 * instance.budget};
        for (double b :
             BidGrid(c, truth.payments[w], instance.budget)) {
          lower.push_back(b);
        }
        std::vector<double> bids = instance.costs;
        for (double b : lower) {
          if (!(b >= 0 && b < c)) continue;
          ++reruns;
          bids[w] = b;
          const MechanismOutcome lie = runner.run(instance, bids, seed);
          if (lie.winners != truth.winners || lie.payments != truth.payments) {
            report.violations.push_back(
                {test.id, seed, w, b,
                 lie.winners != truth.winners ? "winner set changed"
                                              : "payments changed"});
          }
        }
      }
    }
  }
  report.statistics["winners_checked"] = checked;
  report.statistics["reruns"] = static_cast<double>(reruns);
  return report;
}

VerificationReport CheckSamplingLemma(const ValueOracle& oracle,
                                      const AgentSet& t, int k, int trials,
                                      std::uint64_t seed) {
  VerificationReport report;
  report.property = "sampling-lemma";
  report.subject = ValuationType(oracle.spec());
  const double total = oracle.Value(t);
  double best_single = 0.0;
  for (int i : t) best_single = std::max(best_single, oracle.Singleton(i));
  report.statistics["k"] = k;
  report.statistics["v_T"] = total;
  if (k < 1 || total < k * best_single) {
    report.skipped = true;
    report.notices.push_back(
        "precondition v(T) >= k * max singleton fails; check skipped");
    return report;
  }
  const double threshold = (k - 1.0) / (4.0 * k) * total;
  Rng rng(seed);
  std::int64_t successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    AgentSet first, second;
    for (int i : t) (rng.Coin() ? first : second).push_back(i);
    if (oracle.Value(first) >= threshold && oracle.Value(second) >= threshold) {
      ++successes;
    }
  }
  report.trials = trials;
  const double p = trials > 0 ? static_cast<double>(successes) / trials : 0.0;
  const double sigma = trials > 0 ? std::sqrt(0.25 / trials) : 0.0;
  const double floor = 0.5 - 3 * sigma;
  report.statistics["probability"] = p;
  report.statistics["sigma"] = sigma;
  report.statistics["lower_limit"] = floor;
  report.statistics["threshold"] = threshold;
  if (p < floor) {
    report.violations.push_back({"", seed, -1, 0.0,
                                 "empirical probability " + Describe(p) +
                                     " below " + Describe(floor)});
  }
  return report;
}

VerificationReport CheckFeigeBound(const ValueOracle& oracle,
                                   const AgentSet& ground, int trials,
                                   std::uint64_t seed) {
  VerificationReport report;
  report.property = "random-half-bound";
  report.subject = ValuationType(oracle.spec());
  if (ground.size() > 16) {
    throw std::invalid_argument("random-half bound check needs |D| <= 16");
  }
  const double opt = BruteForceUnconstrained(oracle, ground).value;
  Rng rng(seed);
  std::vector<bool> coins(oracle.agent_count());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    for (int i : ground) coins[i] = rng.Coin();
    const double value = oracle.Value(RandomHalf(ground, coins));
    sum += value;
    sum_sq += value * value;
  }
  report.trials = trials;
  const double mean = trials > 0 ? sum / trials : 0.0;
  const double var =
      trials > 1 ? std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1))
                 : 0.0;
  const double sigma = trials > 0 ? std::sqrt(var / trials) : 0.0;
  const double limit = 0.25 * opt - 3 * sigma;
  report.statistics["opt_unconstrained"] = opt;
  report.statistics["mean"] = mean;
  report.statistics["sigma_of_mean"] = sigma;
  report.statistics["lower_limit"] = limit;
  report.statistics["mean_over_opt"] = opt > 0 ? mean / opt : 1.0;
  if (mean < limit) {
    report.violations.push_back({"", seed, -1, 0.0,
                                 "mean " + Describe(mean) + " below " +
                                     Describe(limit)});
  }
  return report;
}

double RatioCeiling(MechanismId id, double p) {
  switch (id) {
    case MechanismId::kGenSmMain:
      return 505.0;
    case MechanismId::kGenSmOnline:
    case MechanismId::kSks:
      return 1710.0;
    case MechanismId::kMonSmConstrained:
      return 138.0 * (p + 10.0);
    case MechanismId::kGenSmConstrained:
      return 410.0 * (p + 10.0);
    case MechanismId::kSampleThenGreedy:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

VerificationReport MeasureRatio(MechanismId id,
                                const std::vector<TestCase>& cases,
                                int seeds_per_instance,
                                std::uint64_t master_seed) {
  VerificationReport report;
  report.property = "approximation-ratio";
  report.subject = MechanismName(id);
  const NamedRunner runner = MakeRunner(id);
  double max_ratio = 0.0;
  double ratio_sum = 0.0;
  double max_p = 1.0;
  int used = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const Instance& instance = cases[c].instance;
    if (!Supports(id, instance)) {
      report.notices.push_back(cases[c].id + ": mechanism not applicable");
      continue;
    }
    const ValueOracle oracle = instance.MakeOracle();
    const IndependenceSystem system = instance.MakeSystem();
    const double opt = BruteForceOpt(oracle, Range(instance.n()),
                                     instance.costs, instance.budget, system)
                           .value;
    if (!(opt > 0)) {
      report.notices.push_back(cases[c].id + ": opt = 0, skipped");
      continue;
    }
    const double p =
        system.unconstrained() ? 1.0 : RankQuotient(system, instance.n());
    max_p = std::max(max_p, p);
    double sum = 0.0;
    for (int k = 0; k < seeds_per_instance; ++k) {
      const std::uint64_t seed = HashCombine(master_seed, c, k);
      sum += runner.run(instance, instance.costs, seed).value;
    }
    report.trials += seeds_per_instance;
    const double mean = sum / seeds_per_instance;
    const double ratio =
        mean > 0 ? opt / mean : std::numeric_limits<double>::infinity();
    ++used;
    max_ratio = std::max(max_ratio, ratio);
    ratio_sum += ratio;
    const double ceiling = RatioCeiling(id, p);
    if (!(ratio <= ceiling)) {
      report.violations.push_back({cases[c].id, master_seed, -1, 0.0,
                                   "ratio " + Describe(ratio) +
                                       " above ceiling " + Describe(ceiling)});
    }
  }
  report.statistics["instances"] = used;
  report.statistics["max_ratio"] = max_ratio;
  report.statistics["mean_ratio"] = used > 0 ? ratio_sum / used : 0.0;
  report.statistics["max_rank_quotient"] = max_p;
  report.statistics["ceiling_at_max_p"] = RatioCeiling(id, max_p);
  return report;
}

VerificationReport CheckSubmodularityReport(const std::string& subject,
                                            const ValueOracle& oracle, int n) {
  VerificationReport report;
  report.property = "submodularity";
  report.subject = subject;
  const bool exhaustive = n <= 14;
  const SubmodularityReport check = CheckSubmodular(
      oracle, n,
      exhaustive ? SubmodularCheckMode::kExhaustive
                 : SubmodularCheckMode::kSampled,
      20000);
  report.trials = check.checks;
  report.statistics["n"] = n;
  report.statistics["exhaustive"] = exhaustive ? 1.0 : 0.0;
  if (!check.passed) {
    std::ostringstream detail;
    detail << "form (" << check.failed_form << ") fails: " << check.lhs
           << " < " << check.rhs;
    report.violations.push_back({subject, 0, check.agent, 0.0, detail.str()});
  }
  return report;
}

VerificationReport CheckXosHardPair(int n, double epsilon, int samples,
                                    std::uint64_t seed) {
  VerificationReport report;
  report.property = "xos-hard-pair";
  report.subject = "n=" + std::to_string(n);
  const XosHardPair pair = GenerateXosHardPair(n, epsilon, seed);
  const ValueOracle low = pair.low.MakeOracle();
  const ValueOracle high = pair.high.MakeOracle();
  const AgentSet ground = Range(n);
  const double opt_low = BruteForceUnconstrained(low, ground).value;
  const double opt_high = BruteForceUnconstrained(high, ground).value;
  const double ratio = opt_high / opt_low;
  const double expected = std::pow(static_cast<double>(n), 1 - epsilon / 2);
  report.statistics["tau"] = pair.tau;
  report.statistics["rho"] = pair.rho;
  report.statistics["opt_v1"] = opt_low;
  report.statistics["opt_v2"] = opt_high;
  report.statistics["ratio"] = ratio;
  report.statistics["expected_ratio"] = expected;
  if (opt_low != pair.tau || opt_high != pair.rho) {
    report.violations.push_back(
        {report.subject, seed, -1, 0.0, "optima differ from (tau, rho)"});
  }
  if (std::abs(ratio - expected) > 1e-9 * expected) {
    report.notices.push_back("ratio " + Describe(ratio) +
                             " differs from n^(1-eps/2) (rounded sizes)");
  }

  Rng rng(DeriveSeed(seed, 5));
  const AgentSet outside = Difference(ground, pair.r);
  int checked = 0;
  while (checked < samples) {
    AgentSet s;
    for (int i = 0; i < n; ++i) {
      if (rng.Coin()) s.push_back(i);
    }
    if (IsSubset(s, pair.r)) continue;
    ++checked;
    if (high.Value(s) != low.Value(s)) {
      report.violations.push_back(
          {report.subject, seed, -1, 0.0, "v2(S) != v1(S) for some S ⊄ R"});
      break;
    }
  }
  report.trials = checked;

  // A query distinguishes the pair only if S ⊆ R and |S| > tau; over random
  // R that has probability C(rho,|S|)/C(n,|S|) <= (e/4)^|S|.
  const int draws = 20000;
  for (int size = pair.tau + 1; size <= pair.rho; ++size) {
    const double exact = Choose(pair.rho, size) / Choose(n, size);
    const double bound = std::pow(std::numbers::e / 4, size);
    AgentSet probe = Range(size);
    int hits = 0;
    for (int d = 0; d < draws; ++d) {
      std::vector<int> r = RandomPermutation(n, rng.Next());
      r.resize(pair.rho);
      if (IsSubset(probe, Normalize(r))) ++hits;
    }
    const double estimate = static_cast<double>(hits) / draws;
    const double sigma = std::sqrt(std::max(bound * (1 - bound), 1e-12) / draws);
    report.statistics["distinguish_exact_s" + std::to_string(size)] = exact;
    report.statistics["distinguish_mc_s" + std::to_string(size)] = estimate;
    if (exact > bound || estimate > bound + 3 * sigma) {
      report.violations.push_back(
          {report.subject, seed, -1, 0.0,
           "distinguishing probability exceeds (e/4)^|S| at |S| = " +
               std::to_string(size)});
    }
  }
  return report;
}

std::vector<TestCase> MakeCases(Family family, int count, int n_min,
                                int n_max, std::uint64_t seed,
                                ConstraintKind constraint) {
  std::vector<TestCase> cases;
  const int span = std::max(1, n_max - n_min + 1);
  for (int k = 0; k < count; ++k) {
    GeneratorParams params;
    params.n = n_min + k % span;
    const std::uint64_t case_seed =
        HashCombine(seed, static_cast<std::uint64_t>(family) + 1, k);
    TestCase test;
    test.id = FamilyName(family) + "-" + std::to_string(k);
    test.instance = GenerateInstance(family, params, case_seed);
    test.instance.constraint =
        RandomConstraint(constraint, params.n, DeriveSeed(case_seed, 3));
    cases.push_back(std::move(test));
  }
  return cases;
}

std::vector<std::uint64_t> MakeSeeds(std::uint64_t master, int count) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < count; ++k) seeds.push_back(HashCombine(master, 17, k));
  return seeds;
}

void ParallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const auto threads = std::min<std::size_t>(jobs, count);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace bfm
