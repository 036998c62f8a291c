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

#ifndef BFM_VALUATION_H_
#define BFM_VALUATION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bfm/agent_set.h"

namespace bfm {

// v(S) = sum of weights in S.
struct AdditiveValuation {
  std::vector<double> weights;
};

// Each agent owns a vertex; v(S) is the total weight of edges with exactly
// one endpoint owned by S. Submodular, non-monotone.
struct CutValuation {
  struct Edge {
    int u = 0;
    int v = 0;
    double weight = 0.0;
  };
  int vertices = 0;
  std::vector<Edge> edges;
  std::vector<int> agent_vertex;
};

// v(S) is the weight of the union of the element sets covered by S.
struct CoverageValuation {
  std::vector<double> element_weights;
  std::vector<std::vector<int>> agent_sets;
};

// Pointwise maximum of additive tables (tables[t][i] is agent i's weight in
// table t). Entries may be negative. When `cardinality_cap` is set, the
// closed form min(|S|, cap) joins the maximum; it stands for the maximum
// over all 0/1 tables with exactly `cap` ones.
struct XosValuation {
  std::vector<std::vector<double>> tables;
  std::optional<int> cardinality_cap;
};

using ValuationSpec = std::variant<AdditiveValuation, CutValuation,
                                   CoverageValuation, XosValuation>;

std::string ValuationType(const ValuationSpec& spec);

// Throws std::invalid_argument naming the offending field when `spec` is not
// well formed for `n` agents.
void ValidateValuation(const ValuationSpec& spec, int n);

// Structural monotonicity: additive with non-negative weights, coverage, and
// XOS whose tables are all non-negative.
bool IsMonotone(const ValuationSpec& spec);

// Value-query oracle over agents {0..n-1}. Every call to Value() counts as
// one query, Marginal() as two. The counter is not synchronized: each trial
// owns its own copy (copies share the immutable spec).
class ValueOracle {
 public:
  ValueOracle(ValuationSpec spec, int n);
  ValueOracle(std::shared_ptr<const ValuationSpec> spec, int n);

  // Throws std::out_of_range for ids outside [0, n).
  double Value(const AgentSet& set) const;
  // v(set ∪ {agent}) - v(set). Throws std::invalid_argument if agent ∈ set.
  double Marginal(int agent, const AgentSet& set) const;
  double Singleton(int agent) const { return Value(AgentSet{agent}); }

  std::int64_t queries() const { return queries_; }
  void ResetQueries() { queries_ = 0; }
  int agent_count() const { return n_; }
  const ValuationSpec& spec() const { return *spec_; }

 private:
  double Evaluate(const AgentSet& set) const;

  std::shared_ptr<const ValuationSpec> spec_;
  int n_ = 0;
  mutable std::int64_t queries_ = 0;
  mutable std::vector<char> scratch_;
};

enum class SubmodularCheckMode { kExhaustive, kSampled };

struct SubmodularityReport {
  bool passed = true;
  // Which characterization failed first: "i", "ii" or "iii".
  std::string failed_form;
  AgentSet s;
  AgentSet t;
  int agent = -1;     // only for form (i)
  double lhs = 0.0;   // the side that should be >=
  double rhs = 0.0;
  std::int64_t checks = 0;
  // True when every form-(i) inequality held with equality (modular v).
  bool all_tight = true;
};

// Checks the three equivalent diminishing-returns characterizations:
//   (i)   v(i|S) >= v(i|T) for S ⊆ T, i ∉ T
//   (ii)  v(S) + v(T) >= v(S ∪ T) + v(S ∩ T)
//   (iii) v(T) <= v(S) + Σ_{i∈T\S} v(i|S) - Σ_{i∈S\T} v(i|S∪T\{i})
// Exhaustive mode requires n <= 14 and enumerates every triple for (i); forms
// (ii)/(iii) are enumerated over all pairs for n <= 10 and sampled beyond.
// Comparisons allow 1e-9 relative slack for summation order.
SubmodularityReport CheckSubmodular(const ValueOracle& oracle, int n,
                                    SubmodularCheckMode mode, int samples,
                                    std::uint64_t seed = 1);

}  // namespace bfm

#endif  // BFM_VALUATION_H_
