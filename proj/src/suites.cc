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

// Desk-scale verification suites behind `bfm verify`.

#include <sstream>
#include <stdexcept>

#include "bfm/random_tape.h"
#include "bfm/verify.h"

namespace bfm {

using nlohmann::json;

namespace {

constexpr Family kFamilies[] = {Family::kAdditive, Family::kCut,
                                Family::kCoverage};
constexpr ConstraintKind kConstraints[] = {
    ConstraintKind::kNone, ConstraintKind::kCardinality,
    ConstraintKind::kPartition, ConstraintKind::kMatching};

// Small cases of every family and constraint kind.
std::vector<TestCase> CasePool(std::uint64_t seed, int per_kind, int n_min,
                               int n_max) {
  std::vector<TestCase> pool;
  for (Family family : kFamilies) {
    for (ConstraintKind kind : kConstraints) {
      const std::uint64_t s =
          HashCombine(seed, static_cast<std::uint64_t>(family),
                      static_cast<std::uint64_t>(kind));
      for (auto& test : MakeCases(family, per_kind, n_min, n_max, s, kind)) {
        test.id += "-c" + std::to_string(static_cast<int>(kind));
        pool.push_back(std::move(test));
      }
    }
  }
  return pool;
}

std::vector<TestCase> Applicable(MechanismId id,
                                 const std::vector<TestCase>& pool) {
  std::vector<TestCase> out;
  for (const auto& test : pool) {
    if (Supports(id, test.instance)) out.push_back(test);
  }
  return out;
}

using Job = std::function<VerificationReport()>;

std::vector<VerificationReport> RunJobs(const std::vector<Job>& jobs,
                                        int threads) {
  std::vector<VerificationReport> reports(jobs.size());
  ParallelFor(jobs.size(), threads,
              [&](std::size_t i) { reports[i] = jobs[i](); });
  return reports;
}

void AddMechanismJobs(
    std::vector<Job>& jobs,
    const std::function<VerificationReport(MechanismId)>& body) {
  for (MechanismId id : TruthfulMechanisms()) {
    jobs.push_back([id, body] { return body(id); });
  }
}

std::vector<Job> TruthfulnessJobs(const SuiteOptions& options) {
  const auto pool = CasePool(DeriveSeed(options.master_seed, 1), 1, 4, 6);
  const auto seeds = MakeSeeds(DeriveSeed(options.master_seed, 2), 3);
  std::vector<Job> jobs;
  AddMechanismJobs(jobs, [pool, seeds](MechanismId id) {
    return CheckTruthfulness(MakeRunner(id), Applicable(id, pool), seeds);
  });
  if (options.include_broken) {
    jobs.push_back([pool, seeds] {
      return CheckTruthfulness(BrokenFirstPriceRunner(), pool, seeds);
    });
  }
  return jobs;
}

std::vector<Job> FeasibilityJobs(const SuiteOptions& options) {
  const auto pool = CasePool(DeriveSeed(options.master_seed, 3), 3, 4, 9);
  const auto seeds = MakeSeeds(DeriveSeed(options.master_seed, 4), 10);
  std::vector<Job> jobs;
  AddMechanismJobs(jobs, [pool, seeds](MechanismId id) {
    return CheckBudgetIrFeasibility(MakeRunner(id), Applicable(id, pool),
                                    seeds);
  });
  if (options.include_broken) {
    jobs.push_back([pool, seeds] {
      return CheckBudgetIrFeasibility(BrokenFirstPriceRunner(), pool, seeds);
    });
  }
  return jobs;
}

std::vector<Job> PaymentJobs(const SuiteOptions& options) {
  const auto pool = CasePool(DeriveSeed(options.master_seed, 5), 2, 4, 8);
  const auto seeds = MakeSeeds(DeriveSeed(options.master_seed, 6), 10);
  std::vector<Job> jobs;
  AddMechanismJobs(jobs, [pool, seeds](MechanismId id) {
    return CheckPaymentCrossValidation(id, pool, seeds, 25);
  });
  return jobs;
}

std::vector<Job> InvarianceJobs(const SuiteOptions& options) {
  const auto pool = CasePool(DeriveSeed(options.master_seed, 7), 2, 4, 8);
  const auto seeds = MakeSeeds(DeriveSeed(options.master_seed, 8), 10);
  std::vector<Job> jobs;
  AddMechanismJobs(jobs, [pool, seeds](MechanismId id) {
    return CheckOutputInvariance(id, pool, seeds, 25);
  });
  return jobs;
}

std::vector<Job> SamplingJobs(const SuiteOptions& options) {
  std::vector<Job> jobs;
  const std::uint64_t seed = DeriveSeed(options.master_seed, 9);
  // Uniform additive weights on 12 agents, k = 2.
  jobs.push_back([seed] {
    Instance uniform;
    uniform.costs.assign(12, 1.0);
    uniform.budget = 12.0;
    uniform.valuation = AdditiveValuation{std::vector<double>(12, 1.0)};
    return CheckSamplingLemma(uniform.MakeOracle(), Range(12), 2, 2000,
                              DeriveSeed(seed, 0));
  });
  for (Family family : kFamilies) {
    jobs.push_back([seed, family] {
      GeneratorParams params;
      params.n = 12;
      const Instance instance = GenerateInstance(
          family, params, HashCombine(seed, static_cast<int>(family), 1));
      return CheckSamplingLemma(instance.MakeOracle(), Range(12), 2, 2000,
                                DeriveSeed(seed, 10 + static_cast<int>(family)));
    });
  }
  return jobs;
}

std::vector<Job> FeigeJobs(const SuiteOptions& options) {
  std::vector<Job> jobs;
  const std::uint64_t seed = DeriveSeed(options.master_seed, 10);
  for (Family family : kFamilies) {
    for (int k = 0; k < 2; ++k) {
      jobs.push_back([seed, family, k] {
        GeneratorParams params;
        params.n = 10;
        const Instance instance = GenerateInstance(
            family, params, HashCombine(seed, static_cast<int>(family), k));
        return CheckFeigeBound(instance.MakeOracle(), Range(10), 1000,
                               HashCombine(seed, 99, 3 * k + 1));
      });
    }
  }
  return jobs;
}

std::vector<Job> RatioJobs(const SuiteOptions& options) {
  const std::uint64_t seed = DeriveSeed(options.master_seed, 11);
  std::vector<Job> jobs;
  const auto cut = MakeCases(Family::kCut, 4, 6, 9, DeriveSeed(seed, 1));
  for (MechanismId id : {MechanismId::kGenSmMain, MechanismId::kGenSmOnline,
                         MechanismId::kSks}) {
    jobs.push_back([id, cut, seed] { return MeasureRatio(id, cut, 60, seed); });
  }
  std::vector<TestCase> monotone;
  for (ConstraintKind kind :
       {ConstraintKind::kCardinality, ConstraintKind::kPartition}) {
    for (auto& test : MakeCases(Family::kCoverage, 2, 6, 9,
                                HashCombine(seed, 2, static_cast<int>(kind)),
                                kind)) {
      monotone.push_back(std::move(test));
    }
  }
  jobs.push_back([monotone, seed] {
    return MeasureRatio(MechanismId::kMonSmConstrained, monotone, 60, seed);
  });
  std::vector<TestCase> general;
  for (ConstraintKind kind :
       {ConstraintKind::kPartition, ConstraintKind::kMatching}) {
    for (auto& test : MakeCases(Family::kCut, 2, 6, 9,
                                HashCombine(seed, 3, static_cast<int>(kind)),
                                kind)) {
      general.push_back(std::move(test));
    }
  }
  jobs.push_back([general, seed] {
    return MeasureRatio(MechanismId::kGenSmConstrained, general, 60, seed);
  });
  return jobs;
}

// The XOS fixture must be reported as non-submodular; the report passes
// when the checker finds the violation.
VerificationReport XosFixtureReport() {
  XosValuation xos;
  xos.tables = {{0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};
  const ValueOracle oracle(ValuationSpec{xos}, 3);
  const SubmodularityReport check =
      CheckSubmodular(oracle, 3, SubmodularCheckMode::kExhaustive, 0);
  VerificationReport report;
  report.property = "submodularity";
  report.subject = "xos-fixture (expected non-submodular)";
  report.trials = check.checks;
  report.statistics["detected"] = check.passed ? 0.0 : 1.0;
  if (check.passed) {
    report.violations.push_back(
        {report.subject, 0, -1, 0.0, "checker accepted a non-submodular XOS"});
  } else {
    report.notices.push_back("form (" + check.failed_form +
                             ") fails as expected");
  }
  return report;
}

std::vector<Job> SubmodularityJobs(const SuiteOptions& options) {
  std::vector<Job> jobs;
  const int n = options.submodularity_n;
  const std::uint64_t seed = DeriveSeed(options.master_seed, 12);
  for (Family family : kFamilies) {
    jobs.push_back([family, n, seed] {
      GeneratorParams params;
      params.n = n;
      const Instance instance = GenerateInstance(
          family, params, HashCombine(seed, static_cast<int>(family), 0));
      return CheckSubmodularityReport(FamilyName(family), instance.MakeOracle(),
                                      n);
    });
  }
  jobs.push_back(XosFixtureReport);
  return jobs;
}

std::vector<Job> XosHardJobs(const SuiteOptions& options) {
  const std::uint64_t seed = DeriveSeed(options.master_seed, 13);
  return {[seed] { return CheckXosHardPair(16, 1.0, 1000, seed); }};
}

std::vector<Job> JobsFor(const std::string& suite,
                         const SuiteOptions& options) {
  if (suite == "truthfulness") return TruthfulnessJobs(options);
  if (suite == "feasibility") return FeasibilityJobs(options);
  if (suite == "payments") return PaymentJobs(options);
  if (suite == "invariance") return InvarianceJobs(options);
  if (suite == "sampling-lemma") return SamplingJobs(options);
  if (suite == "feige") return FeigeJobs(options);
  if (suite == "ratios") return RatioJobs(options);
  if (suite == "submodularity") return SubmodularityJobs(options);
  if (suite == "xos-hard") return XosHardJobs(options);
  if (suite == "all") {
    std::vector<Job> all;
    for (const auto& name : SuiteNames()) {
      if (name == "all") continue;
      for (auto& job : JobsFor(name, options)) all.push_back(std::move(job));
    }
    return all;
  }
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace

std::vector<std::string> SuiteNames() {
  return {"truthfulness",  "feasibility", "payments",
          "invariance",    "sampling-lemma", "feige",
          "ratios",        "submodularity",  "xos-hard",
          "all"};
}

std::vector<VerificationReport> RunSuite(const std::string& suite,
                                         const SuiteOptions& options) {
  return RunJobs(JobsFor(suite, options), options.jobs);
}

json SuiteToJson(const std::string& suite, const SuiteOptions& options,
                 const std::vector<VerificationReport>& reports) {
  json out;
  out["suite"] = suite;
  out["master_seed"] = options.master_seed;
  out["include_broken"] = options.include_broken;
  bool passed = true;
  std::int64_t violations = 0;
  json list = json::array();
  for (const auto& report : reports) {
    passed = passed && report.passed();
    violations += static_cast<std::int64_t>(report.violations.size());
    list.push_back(ToJson(report));
  }
  out["passed"] = passed;
  out["violation_count"] = violations;
  out["reports"] = std::move(list);
  return out;
}

std::string SummaryCsv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "property,subject,trials,violations,passed,skipped\n";
  for (const auto& r : reports) {
    out << r.property << ',' << r.subject << ',' << r.trials << ','
        << r.violations.size() << ',' << (r.passed() ? 1 : 0) << ','
        << (r.skipped ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace bfm
