// Copyright 2026 The whatif Authors.
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

#include "test_util.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "whatif/status.h"

namespace whatif::testing {
namespace {

template <typename T>
T OrDie(absl::StatusOr<T> result, std::string_view what) {
  if (!result.ok()) {
    std::fprintf(stderr, "%.*s failed: %s\n", static_cast<int>(what.size()),
                 what.data(), std::string(result.status().message()).c_str());
    std::abort();
  }
  return *std::move(result);
}

bool SelectionHas(const Selection& sel, ValueId v) {
  if (sel.is_star()) return true;
  for (ValueId x : sel.values()) {
    if (x == v) return true;
  }
  return false;
}

bool CoordsIn(std::span<const ValueId> coords, const Query& q) {
  for (std::size_t d = 0; d < coords.size(); ++d) {
    if (!SelectionHas(q[d], coords[d])) return false;
  }
  return true;
}

}  // namespace

CubeManifest ExampleManifest() {
  return {{"Year", "Supplier", "Product"}, {"Volume", "Cost"}, "example.csv"};
}

std::shared_ptr<const DataCube> ExampleCube() {
  return std::make_shared<const DataCube>(
      OrDie(LoadCube(kExampleCsv, ExampleManifest()), "LoadCube"));
}

Query Q(const ScenarioStore& store, std::string_view text) {
  return OrDie(ParseQuery(text, store), text);
}

AggregationSpec Spec(const Schema& schema, std::string_view text) {
  return OrDie(ParseAggregation(text, schema), text);
}

std::vector<ScenarioEntry> Associate(
    ScenarioStore& store, std::string_view target, std::string_view query_text,
    std::initializer_list<std::string_view> factors) {
  std::vector<FactorAssignment> parsed;
  for (std::string_view f : factors) {
    parsed.push_back(OrDie(ParseFactor(f, store.schema()), f));
  }
  return OrDie(store.AssociateQuery(target, Q(store, query_text), parsed),
               query_text);
}

void BuildScenario2012(ScenarioStore& store) {
  OrDie(store.CreateScenario("2012", "Year"), "create 2012");
  Associate(store, "2012", "Year=2011;Supplier=SU1;Product=P1,P2",
            {"Volume=2", "Cost=1"});
  Associate(store, "2012", "Year=2011;Supplier=SU2;Product=P1,P2",
            {"Volume=3", "Cost=1"});
}

void BuildScenarioSu3(ScenarioStore& store) {
  OrDie(store.CreateScenario("SU3", "Supplier"), "create SU3");
  Associate(store, "SU3", "Year=2011;Supplier=SU2;Product=P1,P2",
            {"Volume=1", "Cost=0.9"});
}

void Redefine2012WithSu3(ScenarioStore& store) {
  Query key = Q(store, "Year=2011,2012;Supplier=SU2;Product=P1,P2");
  OrDie(store.RemoveEntry("2012", key), "remove 2012/SU2");
  Associate(store, "2012", "Year=2011;Supplier=SU3;Product=P1,P2",
            {"Volume=3", "Cost=1"});
}

ScenarioStore ExampleStore(std::shared_ptr<const DataCube> cube) {
  ScenarioStore store(cube->schema_ptr());
  BuildScenario2012(store);
  BuildScenarioSu3(store);
  Redefine2012WithSu3(store);
  return store;
}

double Amount(std::span<const MaterializedRow> rows) {
  double total = 0;
  for (const MaterializedRow& r : rows) total += r.measures[0] * r.measures[1];
  return total;
}

bool Near(double actual, double expected, double rel) {
  double scale = std::max(std::fabs(expected), 1.0);
  return std::fabs(actual - expected) <= rel * scale;
}

std::vector<MaterializedRow> EnumerateVirtualCube(const DataCube& cube,
                                                  const ScenarioStore& store) {
  const Schema& schema = cube.schema();
  std::vector<MaterializedRow> out;
  for (std::size_t r = 0; r < cube.row_count(); ++r) {
    auto c = cube.coords(r);
    auto m = cube.measures(r);
    out.push_back({{c.begin(), c.end()}, {m.begin(), m.end()}, std::nullopt});
  }
  for (const Scenario& s : store.scenarios()) {
    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      const ScenarioEntry& entry = s.entries[e];
      for (std::size_t r = 0; r < cube.row_count(); ++r) {
        auto c = cube.coords(r);
        auto m = cube.measures(r);
        for (std::size_t v = 0; v < entry.values.size(); ++v) {
          const FactoredQuery& fq = entry.values[v];
          if (!CoordsIn(c, fq.query)) continue;
          std::vector<ValueId> coords(c.begin(), c.end());
          for (std::size_t d = 0; d < coords.size(); ++d) {
            const Selection& sel = entry.key[d];
            if (d == s.dimension || sel.is_star()) continue;
            for (ValueId id : sel.values()) {
              if (!schema.IsReal(id)) coords[d] = id;
            }
          }
          coords[s.dimension] = s.id;
          if (!CoordsIn(coords, entry.key)) continue;
          std::vector<double> measures(m.begin(), m.end());
          for (std::size_t k = 0; k < measures.size(); ++k) {
            measures[k] *= fq.factors[k];
          }
          out.push_back({std::move(coords), std::move(measures),
                         Provenance{s.id, e, v, r}});
        }
      }
    }
  }
  return out;
}

std::vector<MaterializedRow> OracleMaterialize(const DataCube& cube,
                                               const ScenarioStore& store,
                                               const Query& query) {
  const Schema& schema = cube.schema();
  Query expanded = query;
  for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
    if (query[d].is_star()) {
      auto real = schema.real_values(d);
      expanded[d] = Selection::Of({real.begin(), real.end()});
    }
  }
  std::vector<MaterializedRow> out;
  for (MaterializedRow& row : EnumerateVirtualCube(cube, store)) {
    if (CoordsIn(row.coords, expanded)) out.push_back(std::move(row));
  }
  return out;
}

std::optional<double> OracleAggregate(std::span<const MaterializedRow> rows,
                                      const AggregationSpec& spec) {
  std::vector<double> values;
  for (const MaterializedRow& r : rows) {
    double v = 1;
    for (std::size_t i = 0; i < spec.measures.size(); ++i) {
      v = i == 0 ? r.measures[spec.measures[i]] : v * r.measures[spec.measures[i]];
    }
    values.push_back(v);
  }
  switch (spec.function) {
    case AggregateFunction::kCount:
      return static_cast<double>(values.size());
    case AggregateFunction::kSum: {
      double s = 0;
      for (double v : values) s += v;
      return s;
    }
    case AggregateFunction::kAvg: {
      if (values.empty()) return std::nullopt;
      double s = 0;
      for (double v : values) s += v;
      return s / static_cast<double>(values.size());
    }
    case AggregateFunction::kMin:
    case AggregateFunction::kMax: {
      if (values.empty()) return std::nullopt;
      double best = values.front();
      for (double v : values) {
        best = spec.function == AggregateFunction::kMin ? std::min(best, v)
                                                        : std::max(best, v);
      }
      return best;
    }
  }
  return std::nullopt;
}

Query RandomQuery(std::mt19937_64& rng, const ScenarioStore& store,
                  bool real_only, double star_probability) {
  const Schema& schema = store.schema();
  std::bernoulli_distribution star(star_probability);
  std::bernoulli_distribution coin(0.5);
  Query q(schema.dimension_count());
  for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
    if (star(rng)) continue;
    std::vector<ValueId> candidates(schema.real_values(d).begin(),
                                    schema.real_values(d).end());
    if (!real_only) {
      for (const Scenario& s : store.scenarios()) {
        if (s.dimension == d) candidates.push_back(s.id);
      }
    }
    std::vector<ValueId> chosen;
    for (ValueId v : candidates) {
      if (coin(rng)) chosen.push_back(v);
    }
    if (chosen.empty()) {
      chosen.push_back(candidates[std::uniform_int_distribution<std::size_t>(
          0, candidates.size() - 1)(rng)]);
    }
    q[d] = Selection::Of(std::move(chosen));
  }
  return q;
}

RandomInstance MakeRandomInstance(std::mt19937_64& rng,
                                  const RandomLimits& limits) {
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::vector<Schema::DimensionSpec> dims;
  int dim_count = uniform(1, limits.max_dimensions);
  for (int d = 0; d < dim_count; ++d) {
    Schema::DimensionSpec spec{"D" + std::to_string(d), {}};
    int values = uniform(1, limits.max_values);
    for (int v = 0; v < values; ++v) {
      spec.values.push_back("d" + std::to_string(d) + "v" + std::to_string(v));
    }
    dims.push_back(std::move(spec));
  }
  std::vector<std::string> measures = {"M0", "M1"};
  auto schema = std::make_shared<const Schema>(
      OrDie(Schema::Create(std::move(dims), measures), "schema"));
  std::vector<Row> rows;
  int row_count = uniform(0, limits.max_rows);
  for (int r = 0; r < row_count; ++r) {
    Row row;
    for (std::size_t d = 0; d < schema->dimension_count(); ++d) {
      auto real = schema->real_values(d);
      row.coords.push_back(real[uniform(0, static_cast<int>(real.size()) - 1)]);
    }
    for (std::size_t m = 0; m < measures.size(); ++m) {
      row.measures.push_back(0.25 * uniform(-20, 40));
    }
    rows.push_back(std::move(row));
  }
  RandomInstance out;
  out.cube = std::make_shared<const DataCube>(
      OrDie(DataCube::Create(schema, std::move(rows)), "cube"));
  out.store = std::make_unique<ScenarioStore>(schema);
  ScenarioStore& store = *out.store;

  int scenario_count = uniform(0, limits.max_scenarios);
  for (int s = 0; s < scenario_count; ++s) {
    std::size_t dim = uniform(0, dim_count - 1);
    OrDie(store.CreateScenario("w" + std::to_string(s),
                               schema->dimension_name(dim)),
          "create scenario");
  }
  static constexpr double kFactors[] = {0.5, 1.0, 2.0};
  for (int s = 0; s < scenario_count; ++s) {
    const std::string name = "w" + std::to_string(s);
    int queries = uniform(0, limits.max_queries);
    for (int k = 0; k < queries; ++k) {
      const Scenario* target = store.FindByName(name);
      Query q = RandomQuery(rng, store);
      Selection& own = q[target->dimension];
      if (!own.is_star()) {
        std::vector<ValueId> kept;
        for (ValueId v : own.values()) {
          if (v != target->id) kept.push_back(v);
        }
        if (kept.empty()) kept.push_back(schema->real_values(target->dimension)[0]);
        own = Selection::Of(std::move(kept));
      }
      std::vector<FactorAssignment> factors;
      for (std::size_t m = 0; m < measures.size(); ++m) {
        factors.push_back({m, kFactors[uniform(0, 2)]});
      }
      // Associations that resolve to nothing are rejected and skipped.
      (void)store.AssociateQuery(name, q, factors);
    }
  }
  return out;
}

}  // namespace whatif::testing
