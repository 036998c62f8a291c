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

#include "bfm/instance.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace bfm {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& Field(const json& j, const char* name, const std::string& path) {
  if (!j.is_object() || !j.contains(name)) {
    throw std::invalid_argument("missing field '" + path + name + "'");
  }
  return j.at(name);
}

template <class T>
T Get(const json& j, const char* name, const std::string& path = "") {
  const json& value = Field(j, name, path);
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed field '" + path + name +
                                "': " + e.what());
  }
}

json ValuationToJson(const ValuationSpec& spec) {
  return std::visit(
      Overloaded{
          [](const AdditiveValuation& a) {
            return json{{"type", "additive"}, {"weights", a.weights}};
          },
          [](const CutValuation& c) {
            json edges = json::array();
            for (const auto& e : c.edges) edges.push_back({e.u, e.v, e.weight});
            return json{{"type", "cut"},
                        {"vertices", c.vertices},
                        {"edges", edges},
                        {"agent_vertex", c.agent_vertex}};
          },
          [](const CoverageValuation& c) {
            return json{{"type", "coverage"},
                        {"element_weights", c.element_weights},
                        {"agent_sets", c.agent_sets}};
          },
          [](const XosValuation& x) {
            json j{{"type", "xos"}, {"tables", x.tables}};
            if (x.cardinality_cap) j["cardinality_cap"] = *x.cardinality_cap;
            return j;
          },
      },
      spec);
}

ValuationSpec ValuationFromJson(const json& j) {
  const std::string p = "valuation.";
  const auto type = Get<std::string>(j, "type", p);
  if (type == "additive") {
    return AdditiveValuation{Get<std::vector<double>>(j, "weights", p)};
  }
  if (type == "cut") {
    CutValuation c;
    c.vertices = Get<int>(j, "vertices", p);
    c.agent_vertex = Get<std::vector<int>>(j, "agent_vertex", p);
    for (const auto& e : Field(j, "edges", p)) {
      if (!e.is_array() || e.size() != 3) {
        throw std::invalid_argument(
            "malformed field 'valuation.edges': expected [u, v, w]");
      }
      try {
        c.edges.push_back({e[0].get<int>(), e[1].get<int>(),
                           e[2].get<double>()});
      } catch (const json::exception& ex) {
        throw std::invalid_argument(
            std::string("malformed field 'valuation.edges': ") + ex.what());
      }
    }
    return c;
  }
  if (type == "coverage") {
    return CoverageValuation{
        Get<std::vector<double>>(j, "element_weights", p),
        Get<std::vector<std::vector<int>>>(j, "agent_sets", p)};
  }
  if (type == "xos") {
    XosValuation x;
    x.tables = Get<std::vector<std::vector<double>>>(j, "tables", p);
    if (j.contains("cardinality_cap")) {
      x.cardinality_cap = Get<int>(j, "cardinality_cap", p);
    }
    return x;
  }
  throw std::invalid_argument("malformed field 'valuation.type': unknown '" +
                              type + "'");
}

json ConstraintToJson(const ConstraintSpec& spec) {
  return std::visit(
      Overloaded{
          [](const NoConstraint&) { return json{{"type", "none"}}; },
          [](const CardinalityConstraint& c) {
            return json{{"type", "cardinality"}, {"k", c.k}};
          },
          [](const PartitionConstraint& p) {
            return json{
                {"type", "partition"}, {"parts", p.parts}, {"caps", p.caps}};
          },
          [](const MatchingConstraint& m) {
            json edges = json::array();
            for (const auto& [u, v] : m.agent_edge) edges.push_back({u, v});
            return json{{"type", "matching"},
                        {"vertices", m.vertices},
                        {"agent_edge", edges}};
          },
          [](const ConflictGraphConstraint& g) {
            json edges = json::array();
            for (const auto& [a, b] : g.edges) edges.push_back({a, b});
            return json{{"type", "conflict_graph"}, {"edges", edges}};
          },
      },
      spec);
}

std::vector<std::pair<int, int>> PairsFromJson(const json& j, const char* name,
                                               const std::string& p) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : Get<std::vector<std::vector<int>>>(j, name, p)) {
    if (e.size() != 2) {
      throw std::invalid_argument("malformed field '" + p + name +
                                  "': expected pairs");
    }
    out.emplace_back(e[0], e[1]);
  }
  return out;
}

ConstraintSpec ConstraintFromJson(const json& j) {
  const std::string p = "constraint.";
  const auto type = Get<std::string>(j, "type", p);
  if (type == "none") return NoConstraint{};
  if (type == "cardinality") return CardinalityConstraint{Get<int>(j, "k", p)};
  if (type == "partition") {
    return PartitionConstraint{
        Get<std::vector<std::vector<int>>>(j, "parts", p),
        Get<std::vector<int>>(j, "caps", p)};
  }
  if (type == "matching") {
    return MatchingConstraint{Get<int>(j, "vertices", p),
                              PairsFromJson(j, "agent_edge", p)};
  }
  if (type == "conflict_graph") {
    return ConflictGraphConstraint{PairsFromJson(j, "edges", p)};
  }
  throw std::invalid_argument("malformed field 'constraint.type': unknown '" +
                              type + "'");
}

std::vector<int> ReindexMap(const std::vector<int>& kept, int n) {
  std::vector<int> index(n, -1);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    index[kept[k]] = static_cast<int>(k);
  }
  return index;
}

template <class T>
std::vector<T> Pick(const std::vector<T>& values,
                    const std::vector<int>& kept) {
  std::vector<T> out;
  out.reserve(kept.size());
  for (int i : kept) out.push_back(values[i]);
  return out;
}

}  // namespace

ValueOracle Instance::MakeOracle() const {
  // Non-owning alias: no control block, the instance owns the valuation.
  return ValueOracle(std::shared_ptr<const ValuationSpec>(
                         std::shared_ptr<const ValuationSpec>(), &valuation),
                     n());
}

void Validate(const Instance& instance) {
  if (!std::isfinite(instance.budget) || instance.budget <= 0) {
    throw std::invalid_argument("budget must be positive and finite");
  }
  for (std::size_t i = 0; i < instance.costs.size(); ++i) {
    const double c = instance.costs[i];
    if (!std::isfinite(c) || c < 0) {
      throw std::invalid_argument("costs[" + std::to_string(i) +
                                  "] must be a non-negative number");
    }
  }
  ValidateValuation(instance.valuation, instance.n());
  ValidateConstraint(instance.constraint, instance.n());
}

Instance Restrict(const Instance& instance, const std::vector<int>& kept) {
  const std::vector<int> index = ReindexMap(kept, instance.n());
  Instance out;
  out.budget = instance.budget;
  out.costs = Pick(instance.costs, kept);
  out.valuation = std::visit(
      Overloaded{
          [&](const AdditiveValuation& a) -> ValuationSpec {
            return AdditiveValuation{Pick(a.weights, kept)};
          },
          [&](const CutValuation& c) -> ValuationSpec {
            CutValuation r = c;
            r.agent_vertex = Pick(c.agent_vertex, kept);
            return r;
          },
          [&](const CoverageValuation& c) -> ValuationSpec {
            return CoverageValuation{c.element_weights,
                                     Pick(c.agent_sets, kept)};
          },
          [&](const XosValuation& x) -> ValuationSpec {
            XosValuation r;
            r.cardinality_cap = x.cardinality_cap;
            for (const auto& t : x.tables) r.tables.push_back(Pick(t, kept));
            return r;
          },
      },
      instance.valuation);
  out.constraint = std::visit(
      Overloaded{
          [](const NoConstraint& c) -> ConstraintSpec { return c; },
          [](const CardinalityConstraint& c) -> ConstraintSpec { return c; },
          [&](const PartitionConstraint& p) -> ConstraintSpec {
            PartitionConstraint r;
            r.caps = p.caps;
            for (const auto& part : p.parts) {
              std::vector<int> mapped;
              for (int a : part) {
                if (index[a] >= 0) mapped.push_back(index[a]);
              }
              r.parts.push_back(std::move(mapped));
            }
            return r;
          },
          [&](const MatchingConstraint& m) -> ConstraintSpec {
            return MatchingConstraint{m.vertices, Pick(m.agent_edge, kept)};
          },
          [&](const ConflictGraphConstraint& g) -> ConstraintSpec {
            ConflictGraphConstraint r;
            for (const auto& [a, b] : g.edges) {
              if (index[a] >= 0 && index[b] >= 0) {
                r.edges.emplace_back(index[a], index[b]);
              }
            }
            return r;
          },
      },
      instance.constraint);
  return out;
}

PreprocessedInstance Preprocess(const Instance& instance) {
  std::vector<int> kept;
  for (int i = 0; i < instance.n(); ++i) {
    if (instance.costs[i] <= instance.budget) kept.push_back(i);
  }
  return {Restrict(instance, kept), kept};
}

json ToJson(const Instance& instance) {
  return json{{"n", instance.n()},
              {"budget", instance.budget},
              {"costs", instance.costs},
              {"valuation", ValuationToJson(instance.valuation)},
              {"constraint", ConstraintToJson(instance.constraint)}};
}

Instance InstanceFromJson(const json& j) {
  Instance instance;
  const int n = Get<int>(j, "n");
  instance.budget = Get<double>(j, "budget");
  instance.costs = Get<std::vector<double>>(j, "costs");
  if (static_cast<int>(instance.costs.size()) != n) {
    throw std::invalid_argument("malformed field 'costs': expected " +
                                std::to_string(n) + " entries");
  }
  instance.valuation = ValuationFromJson(Field(j, "valuation", ""));
  if (j.contains("constraint")) {
    instance.constraint = ConstraintFromJson(j.at("constraint"));
  }
  Validate(instance);
  return instance;
}

Instance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("instance file " + path +
                                " is not valid JSON: " + e.what());
  }
  return InstanceFromJson(j);
}

void SaveInstance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << ToJson(instance).dump(1) << "\n";
}

bool SameContent(const Instance& a, const Instance& b) {
  return ToJson(a) == ToJson(b);
}

}  // namespace bfm
