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

// bfm: generate instances, run mechanisms over seed ranges, and run the
// verification suites.
//
//   bfm gen cut --n 10 --p 0.4 --seed 1 --out cut.json
//   bfm run --mechanism gensm-main --instance cut.json --seeds 100 --opt
//   bfm verify all --seed 42 --out report.json

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfm/generators.h"
#include "bfm/instance.h"
#include "bfm/mechanisms.h"
#include "bfm/random_tape.h"
#include "bfm/subroutines.h"
#include "bfm/verify.h"
#include "json.hpp"

namespace {

using bfm::Instance;
using nlohmann::json;

constexpr int kUsageError = 2;

// Error raised for invalid command-line input; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string FormatNumber(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::optional<std::uint64_t> SeedFromEnvironment() {
  const char* text = std::getenv("BFM_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(text, &used);
    if (used != std::string(text).size()) throw std::invalid_argument(text);
    return seed;
  } catch (const std::exception&) {
    throw UsageError("BFM_SEED must be a non-negative integer");
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

struct GenOptions {
  std::string family;
  int n = 10;
  double p = 0.4;
  std::uint64_t seed = 1;
  std::optional<double> budget;
  double budget_fraction = 0.3;
  double epsilon = 1.0;
  std::string constraint = "none";
  std::string out;
};

Instance GenerateFromOptions(const GenOptions& o) {
  bfm::GeneratorParams params;
  params.n = o.n;
  params.edge_probability = o.p;
  params.budget = o.budget;
  params.budget_fraction = o.budget_fraction;
  Instance instance;
  try {
    instance = bfm::GenerateInstance(bfm::ParseFamily(o.family), params,
                                     o.seed);
    instance.constraint = bfm::RandomConstraint(
        bfm::ParseConstraintKind(o.constraint), o.n,
        bfm::DeriveSeed(o.seed, 3));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return instance;
}

// xos-hard writes <base>_v1.json, <base>_v2.json and <base>_R.json.
int CmdGenXosHard(const GenOptions& o) {
  bfm::XosHardPair pair;
  try {
    pair = bfm::GenerateXosHardPair(o.n, o.epsilon, o.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::string base = o.out.empty() ? "xos_hard" : o.out;
  if (base.size() > 5 && base.ends_with(".json")) {
    base.resize(base.size() - 5);
  }
  bfm::SaveInstance(pair.low, base + "_v1.json");
  bfm::SaveInstance(pair.high, base + "_v2.json");
  const json r{{"n", o.n},     {"epsilon", o.epsilon}, {"tau", pair.tau},
               {"rho", pair.rho}, {"r", pair.r},       {"seed", o.seed}};
  WriteText(base + "_R.json", r.dump(1) + "\n");
  std::cerr << "wrote " << base << "_v1.json, " << base << "_v2.json, "
            << base << "_R.json\n";
  return 0;
}

int CmdGen(GenOptions o) {
  if (const auto env = SeedFromEnvironment()) o.seed = *env;
  if (o.family == "xos-hard") return CmdGenXosHard(o);
  const Instance instance = GenerateFromOptions(o);
  if (o.out.empty() || o.out == "-") {
    std::cout << bfm::ToJson(instance).dump(1) << "\n";
  } else {
    bfm::SaveInstance(instance, o.out);
  }
  return 0;
}

struct RunOptions {
  std::string mechanism;
  std::string instance_path;
  GenOptions generator;
  std::uint64_t seed_start = 0;
  int seeds = 1;
  std::optional<std::uint64_t> order_seed;
  bool opt = false;
  int jobs = 1;
  std::string out;
  std::string trace_out;
};

struct RunRow {
  std::uint64_t seed = 0;
  bfm::MechanismOutcome outcome;
  std::vector<int> order;
};

int CmdRun(const RunOptions& o) {
  const bool has_path = !o.instance_path.empty();
  const bool has_family = !o.generator.family.empty();
  if (has_path == has_family) {
    throw UsageError("give exactly one of --instance or --family");
  }
  if (o.seeds < 0) throw UsageError("--seeds must be >= 0");
  bfm::MechanismId id;
  try {
    id = bfm::ParseMechanism(o.mechanism);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Instance instance = has_path ? bfm::LoadInstance(o.instance_path)
                                     : GenerateFromOptions(o.generator);
  if (!bfm::Supports(id, instance)) {
    throw UsageError("mechanism '" + o.mechanism + "' refuses this instance (" +
                     bfm::ValuationType(instance.valuation) + " valuation, " +
                     bfm::ConstraintType(instance.constraint) +
                     " constraint)");
  }

  std::optional<double> opt;
  if (o.opt) {
    if (instance.n() > bfm::kMaxBruteForceAgents) {
      throw UsageError("--opt needs n <= " +
                       std::to_string(bfm::kMaxBruteForceAgents));
    }
    opt = bfm::BruteForceOpt(instance.MakeOracle(), bfm::Range(instance.n()),
                             instance.costs, instance.budget,
                             instance.MakeSystem())
              .value;
  }

  std::vector<RunRow> rows(o.seeds);
  bfm::ParallelFor(rows.size(), o.jobs, [&](std::size_t k) {
    RunRow& row = rows[k];
    row.seed = o.seed_start + k;
    if (o.order_seed) {
      row.order = bfm::RandomPermutation(
          instance.n(), bfm::HashCombine(*o.order_seed, 0x0DE5, row.seed));
    } else {
      row.order.resize(instance.n());
      std::iota(row.order.begin(), row.order.end(), 0);
    }
    row.outcome = bfm::RunMechanism(id, instance, instance.costs,
                                    bfm::DrawTape(row.seed, instance.n()),
                                    row.order);
  });

  std::ostringstream csv;
  csv << "mechanism,seed,n,value,opt,ratio,total_payment,budget,queries,"
         "winner_count\n";
  for (const RunRow& row : rows) {
    const double value = row.outcome.value;
    std::string ratio;
    if (opt) {
      ratio = value > 0 ? FormatNumber(*opt / value)
                        : (*opt > 0 ? "inf" : "1");
    }
    csv << o.mechanism << ',' << row.seed << ',' << instance.n() << ','
        << FormatNumber(value) << ',' << (opt ? FormatNumber(*opt) : "")
        << ',' << ratio << ',' << FormatNumber(row.outcome.TotalPayment())
        << ',' << FormatNumber(instance.budget) << ',' << row.outcome.queries
        << ',' << row.outcome.winners.size() << '\n';
  }
  WriteText(o.out, csv.str());

  if (!o.trace_out.empty()) {
    json runs = json::array();
    for (const RunRow& row : rows) {
      const auto& t = row.outcome.trace;
      json rejections = json::array();
      for (const auto& r : t.rejections) {
        rejections.push_back({{"agent", r.agent},
                              {"reason", bfm::ReasonName(r.reason)}});
      }
      runs.push_back({{"seed", row.seed},
                      {"arrival_order", row.order},
                      {"winners", row.outcome.winners},
                      {"payments", row.outcome.payments},
                      {"value", row.outcome.value},
                      {"queries", row.outcome.queries},
                      {"trace",
                       {{"branch", t.branch},
                        {"chosen", t.chosen},
                        {"s1", t.s1},
                        {"s2", t.s2},
                        {"t1", t.t1},
                        {"t2", t.t2},
                        {"x", t.x},
                        {"residual1", t.residual1},
                        {"residual2", t.residual2},
                        {"examined", t.examined},
                        {"examined_slot", t.examined_slot},
                        {"rejections", rejections}}}});
    }
    WriteText(o.trace_out,
              json{{"mechanism", o.mechanism}, {"runs", runs}}.dump(1) + "\n");
  }
  return 0;
}

struct VerifyOptions {
  std::string suite;
  std::uint64_t seed = 42;
  std::string out;
  std::string csv;
  bool broken = false;
  int n = 8;
  int jobs = 1;
};

int CmdVerify(const VerifyOptions& o) {
  bfm::SuiteOptions options;
  options.master_seed = o.seed;
  if (const auto env = SeedFromEnvironment()) options.master_seed = *env;
  options.include_broken = o.broken;
  options.submodularity_n = o.n;
  options.jobs = o.jobs;
  std::vector<bfm::VerificationReport> reports;
  try {
    reports = bfm::RunSuite(o.suite, options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const json report = bfm::SuiteToJson(o.suite, options, reports);
  if (!o.out.empty()) WriteText(o.out, report.dump(2) + "\n");
  const std::string summary = bfm::SummaryCsv(reports);
  if (!o.csv.empty()) WriteText(o.csv, summary);
  std::cout << summary;
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.violations.size() && k < 3; ++k) {
      const auto& v = r.violations[k];
      std::cerr << "violation [" << r.property << " / " << r.subject << "] "
                << v.instance_id << " seed=" << v.seed << " agent=" << v.agent
                << ": " << v.detail << "\n";
    }
  }
  return report["passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-feasible procurement mechanisms"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance file");
  gen_cmd->add_option("family", gen.family, "cut|coverage|additive|xos-hard")
      ->required();
  gen_cmd->add_option("--n", gen.n, "Number of agents");
  gen_cmd->add_option("--p", gen.p, "Edge probability (cut)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  auto* budget_opt =
      gen_cmd->add_option("--budget", gen.budget, "Absolute budget");
  gen_cmd->add_option("--budget-frac", gen.budget_fraction,
                      "B = f * total cost")
      ->excludes(budget_opt);
  gen_cmd->add_option("--eps", gen.epsilon, "xos-hard epsilon");
  gen_cmd->add_option("--constraint", gen.constraint,
                      "none|cardinality|partition|matching");
  gen_cmd->add_option("--out", gen.out, "Output path (default stdout)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a mechanism over seeds");
  run_cmd->add_option("--mechanism", run.mechanism)->required();
  auto* path_opt = run_cmd->add_option("--instance", run.instance_path,
                                       "Instance JSON file");
  run_cmd->add_option("--family", run.generator.family,
                      "Generate the instance instead")
      ->excludes(path_opt);
  run_cmd->add_option("--n", run.generator.n);
  run_cmd->add_option("--p", run.generator.p);
  run_cmd->add_option("--gen-seed", run.generator.seed);
  auto* run_budget = run_cmd->add_option("--budget", run.generator.budget);
  run_cmd->add_option("--budget-frac", run.generator.budget_fraction)
      ->excludes(run_budget);
  run_cmd->add_option("--constraint", run.generator.constraint);
  run_cmd->add_option("--seed-start", run.seed_start, "First seed");
  run_cmd->add_option("--seeds", run.seeds, "Number of seeds");
  run_cmd->add_option("--order-seed", run.order_seed,
                      "Draw a random arrival order per seed");
  run_cmd->add_flag("--opt", run.opt, "Compute the brute-force optimum");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads");
  run_cmd->add_option("--out", run.out, "CSV path (default stdout)");
  run_cmd->add_option("--trace-out", run.trace_out,
                      "JSON file with per-run outcomes and traces");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites");
  verify_cmd->add_option("suite", verify.suite)
      ->required()
      ->check(CLI::IsMember(bfm::SuiteNames()));
  verify_cmd->add_option("--seed", verify.seed, "Master seed");
  verify_cmd->add_option("--out", verify.out, "JSON report path");
  verify_cmd->add_option("--csv", verify.csv, "Summary CSV path");
  verify_cmd->add_flag("--broken", verify.broken,
                       "Include the non-truthful control mechanism");
  verify_cmd->add_option("--n", verify.n, "Agents for submodularity checks");
  verify_cmd->add_option("--jobs", verify.jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) return CmdGen(gen);
    if (*run_cmd) return CmdRun(run);
    return CmdVerify(verify);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
