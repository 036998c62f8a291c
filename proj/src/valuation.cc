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

#include "bfm/valuation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bfm/random_tape.h"

namespace bfm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw std::invalid_argument("valuation." + field + ": " + what);
}

void RequireFinite(double x, const std::string& field) {
  if (!std::isfinite(x)) Invalid(field, "must be finite");
}

}  // namespace

std::string ValuationType(const ValuationSpec& spec) {
  return std::visit(Overloaded{
                        [](const AdditiveValuation&) { return "additive"; },
                        [](const CutValuation&) { return "cut"; },
                        [](const CoverageValuation&) { return "coverage"; },
                        [](const XosValuation&) { return "xos"; },
                    },
                    spec);
}

void ValidateValuation(const ValuationSpec& spec, int n) {
  std::visit(
      Overloaded{
          [n](const AdditiveValuation& a) {
            if (static_cast<int>(a.weights.size()) != n) {
              Invalid("weights", "expected " + std::to_string(n) + " entries");
            }
            for (double w : a.weights) RequireFinite(w, "weights");
          },
          [n](const CutValuation& c) {
            if (c.vertices < 0) Invalid("vertices", "must be >= 0");
            if (static_cast<int>(c.agent_vertex.size()) != n) {
              Invalid("agent_vertex",
                      "expected " + std::to_string(n) + " entries");
            }
            for (int v : c.agent_vertex) {
              if (v < 0 || v >= c.vertices) {
                Invalid("agent_vertex", "vertex out of range");
              }
            }
            for (const auto& e : c.edges) {
              if (e.u < 0 || e.u >= c.vertices || e.v < 0 ||
                  e.v >= c.vertices) {
                Invalid("edges", "endpoint out of range");
              }
              RequireFinite(e.weight, "edges");
              if (e.weight < 0) Invalid("edges", "negative edge weight");
            }
          },
          [n](const CoverageValuation& c) {
            if (static_cast<int>(c.agent_sets.size()) != n) {
              Invalid("agent_sets",
                      "expected " + std::to_string(n) + " entries");
            }
            for (double w : c.element_weights) {
              RequireFinite(w, "element_weights");
              if (w < 0) Invalid("element_weights", "negative weight");
            }
            const int m = static_cast<int>(c.element_weights.size());
            for (const auto& set : c.agent_sets) {
              for (int e : set) {
                if (e < 0 || e >= m) {
                  Invalid("agent_sets", "element out of range");
                }
              }
            }
          },
          [n](const XosValuation& x) {
            for (const auto& table : x.tables) {
              if (static_cast<int>(table.size()) != n) {
                Invalid("tables",
                        "every table needs " + std::to_string(n) + " entries");
              }
              for (double w : table) RequireFinite(w, "tables");
            }
            if (x.cardinality_cap && *x.cardinality_cap < 0) {
              Invalid("cardinality_cap", "must be >= 0");
            }
          },
      },
      spec);
}

bool IsMonotone(const ValuationSpec& spec) {
  return std::visit(
      Overloaded{
          [](const AdditiveValuation& a) {
            return std::all_of(a.weights.begin(), a.weights.end(),
                               [](double w) { return w >= 0; });
          },
          [](const CutValuation&) { return false; },
          [](const CoverageValuation&) { return true; },
          [](const XosValuation& x) {
            for (const auto& t : x.tables) {
              for (double w : t) {
                if (w < 0) return false;
              }
            }
            return true;
          },
      },
      spec);
}

ValueOracle::ValueOracle(ValuationSpec spec, int n)
    : ValueOracle(std::make_shared<const ValuationSpec>(std::move(spec)), n) {}

ValueOracle::ValueOracle(std::shared_ptr<const ValuationSpec> spec, int n)
    : spec_(std::move(spec)), n_(n) {
  ValidateValuation(*spec_, n_);
}

double ValueOracle::Value(const AgentSet& set) const {
  for (int i : set) {
    if (i < 0 || i >= n_) {
      throw std::out_of_range("agent " + std::to_string(i) +
                              " outside [0, " + std::to_string(n_) + ")");
    }
  }
  ++queries_;
  return Evaluate(set);
}

double ValueOracle::Marginal(int agent, const AgentSet& set) const {
  if (Contains(set, agent)) {
    throw std::invalid_argument("marginal of agent " + std::to_string(agent) +
                                " already in the set");
  }
  return Value(With(set, agent)) - Value(set);
}

double ValueOracle::Evaluate(const AgentSet& set) const {
  return std::visit(
      Overloaded{
          [&](const AdditiveValuation& a) {
            double total = 0.0;
            for (int i : set) total += a.weights[i];
            return total;
          },
          [&](const CutValuation& c) {
            scratch_.assign(c.vertices, 0);
            for (int i : set) scratch_[c.agent_vertex[i]] = 1;
            double total = 0.0;
            for (const auto& e : c.edges) {
              if (scratch_[e.u] != scratch_[e.v]) total += e.weight;
            }
            return total;
          },
          [&](const CoverageValuation& c) {
            scratch_.assign(c.element_weights.size(), 0);
            double total = 0.0;
            for (int i : set) {
              for (int e : c.agent_sets[i]) {
                if (!scratch_[e]) {
                  scratch_[e] = 1;
                  total += c.element_weights[e];
                }
              }
            }
            return total;
          },
          [&](const XosValuation& x) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& table : x.tables) {
              double total = 0.0;
              for (int i : set) total += table[i];
              best = std::max(best, total);
            }
            if (x.cardinality_cap) {
              best = std::max(
                  best, static_cast<double>(std::min<std::size_t>(
                            set.size(), static_cast<std::size_t>(
                                            *x.cardinality_cap))));
            }
            // Empty maximum: the zero function.
            return std::isinf(best) ? 0.0 : best;
          },
      },
      *spec_);
}

namespace {

class SubmodularChecker {
 public:
  SubmodularChecker(SubmodularityReport& report, double tol)
      : report_(report), tol_(tol) {}

  // Records a failure of `lhs >= rhs`; returns false if the check failed.
  bool Check(const char* form, double lhs, double rhs, const AgentSet& s,
             const AgentSet& t, int agent) {
    ++report_.checks;
    if (lhs >= rhs - tol_) return true;
    report_.passed = false;
    report_.failed_form = form;
    report_.s = s;
    report_.t = t;
    report_.agent = agent;
    report_.lhs = lhs;
    report_.rhs = rhs;
    return false;
  }
  double tol() const { return tol_; }

 private:
  SubmodularityReport& report_;
  double tol_;
};

// Evaluates forms (ii) and (iii) for one pair through a value function.
template <class ValueFn>
bool CheckPair(SubmodularChecker& checker, const AgentSet& s,
               const AgentSet& t, ValueFn&& value) {
  const AgentSet uni = Union(s, t);
  AgentSet inter;
  std::set_intersection(s.begin(), s.end(), t.begin(), t.end(),
                        std::back_inserter(inter));
  const double vs = value(s);
  const double vt = value(t);
  if (!checker.Check("ii", vs + vt, value(uni) + value(inter), s, t, -1)) {
    return false;
  }
  double bound = vs;
  for (int i : Difference(t, s)) bound += value(With(s, i)) - vs;
  const double vu = value(uni);
  for (int i : Difference(s, t)) bound -= vu - value(Without(uni, i));
  return checker.Check("iii", bound, vt, s, t, -1);
}

}  // namespace

SubmodularityReport CheckSubmodular(const ValueOracle& oracle, int n,
                                    SubmodularCheckMode mode, int samples,
                                    std::uint64_t seed) {
  SubmodularityReport report;
  const AgentSet ground = Range(n);
  Rng rng(seed);

  if (mode == SubmodularCheckMode::kExhaustive) {
    if (n > 14) {
      throw std::invalid_argument(
          "exhaustive submodularity check needs n <= 14; use sampled mode");
    }
    const std::uint64_t full = (std::uint64_t{1} << n);
    std::vector<double> table(full);
    double scale = 1.0;
    for (std::uint64_t m = 0; m < full; ++m) {
      table[m] = oracle.Value(FromMask(ground, m));
      scale = std::max(scale, std::abs(table[m]));
    }
    SubmodularChecker checker(report, 1e-9 * scale);

    for (std::uint64_t t = 0; t < full; ++t) {
      for (int i = 0; i < n; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << i;
        if (t & bit) continue;
        const double mt = table[t | bit] - table[t];
        for (std::uint64_t s = t;; s = (s - 1) & t) {
          const double ms = table[s | bit] - table[s];
          if (std::abs(ms - mt) > checker.tol()) report.all_tight = false;
          if (!checker.Check("i", ms, mt, FromMask(ground, s),
                             FromMask(ground, t), i)) {
            return report;
          }
          if (s == 0) break;
        }
      }
    }

    auto lookup = [&](const AgentSet& set) {
      std::uint64_t m = 0;
      for (int i : set) m |= std::uint64_t{1} << i;
      return table[m];
    };
    if (n <= 10) {
      for (std::uint64_t s = 0; s < full; ++s) {
        for (std::uint64_t t = 0; t < full; ++t) {
          if (!CheckPair(checker, FromMask(ground, s), FromMask(ground, t),
                         lookup)) {
            return report;
          }
        }
      }
    } else {
      const int pairs = std::max(samples, 10000);
      for (int k = 0; k < pairs; ++k) {
        const std::uint64_t s = rng.Below(full);
        const std::uint64_t t = rng.Below(full);
        if (!CheckPair(checker, FromMask(ground, s), FromMask(ground, t),
                       lookup)) {
          return report;
        }
      }
    }
    return report;
  }

  // Sampled mode: values are queried on demand.
  if (n == 0) return report;
  double scale = 1.0;
  scale = std::max(scale, std::abs(oracle.Value(ground)));
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(oracle.Singleton(i)));
  }
  SubmodularChecker checker(report, 1e-9 * scale);
  auto value = [&](const AgentSet& set) { return oracle.Value(set); };
  for (int k = 0; k < samples; ++k) {
    const int agent = static_cast<int>(rng.Below(n));
    AgentSet s, t, x, y;
    for (int j = 0; j < n; ++j) {
      if (j != agent && rng.Coin()) {
        t.push_back(j);
        if (rng.Coin()) s.push_back(j);
      }
      if (rng.Coin()) x.push_back(j);
      if (rng.Coin()) y.push_back(j);
    }
    const double ms = oracle.Marginal(agent, s);
    const double mt = oracle.Marginal(agent, t);
    if (std::abs(ms - mt) > checker.tol()) report.all_tight = false;
    if (!checker.Check("i", ms, mt, s, t, agent)) return report;
    if (!CheckPair(checker, x, y, value)) return report;
  }
  return report;
}

}  // namespace bfm
