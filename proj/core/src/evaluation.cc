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

#include "whatif/evaluation.h"

#include <algorithm>
#include <thread>
#include <utility>

#include "strings.h"
#include "whatif/query_algebra.h"
#include "whatif/status.h"

namespace whatif {
namespace {

// Membership bitmap over real value ids, one block per dimension. Source
// rows only ever carry real values, so scenario ids need no slot.
class RowFilter {
 public:
  RowFilter(const Schema& schema, const Query& query)
      : stride_(schema.value_count()),
        bits_(schema.dimension_count() * stride_, 0) {
    for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
      std::uint8_t* block = bits_.data() + d * stride_;
      if (query[d].is_star()) {
        for (ValueId v : schema.real_values(d)) block[v] = 1;
        continue;
      }
      for (ValueId v : query[d].values()) {
        if (v < stride_) block[v] = 1;
      }
    }
  }

  bool Matches(std::span<const ValueId> coords) const {
    const std::uint8_t* block = bits_.data();
    for (ValueId v : coords) {
      if (!block[v]) return false;
      block += stride_;
    }
    return true;
  }

 private:
  std::size_t stride_;
  std::vector<std::uint8_t> bits_;
};

struct ValuePlan {
  RowFilter filter;
  const std::vector<double>* factors;
};

struct KeyPlan {
  ValueId scenario;
  std::size_t entry;
  RowFilter source;
  // Dimension substitutions for simulated coords; the owner's comes last.
  std::vector<std::pair<std::size_t, ValueId>> substitutions;
  std::vector<ValuePlan> values;
};

struct Plan {
  Query query;  // STAR expanded
  RowFilter real;
  std::vector<KeyPlan> keys;
};

// Real values of each dimension; unlike rho, a dimension without real values
// stays empty and matches nothing.
Query RealPart(const Schema& schema, const Query& expanded) {
  Query out(expanded.dimension_count());
  for (std::size_t d = 0; d < expanded.dimension_count(); ++d) {
    std::vector<ValueId> real;
    for (ValueId v : expanded[d].values()) {
      if (schema.IsReal(v)) real.push_back(v);
    }
    out[d] = Selection::Of(std::move(real));
  }
  return out;
}

absl::StatusOr<Plan> BuildPlan(const DataCube& cube, const ScenarioStore& store,
                               const Query& query) {
  const Schema& schema = cube.schema();
  if (!(schema == store.schema())) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "scenario store belongs to a different cube");
  }
  WHATIF_RETURN_IF_ERROR(store.ValidateQuery(query));
  if (!CoversAllDimensions(query)) {
    return MakeError(ErrorCode::kInvalidQuery,
                     "query selects no values for some dimension");
  }
  Query expanded = schema.ExpandStars(query);
  Plan plan{expanded, RowFilter(schema, RealPart(schema, expanded)),
            {}};
  WHATIF_ASSIGN_OR_RETURN(std::vector<const Scenario*> scenarios,
                          ExtractScenarios(store, expanded));
  for (const Scenario* scenario : scenarios) {
    for (std::size_t e = 0; e < scenario->entries.size(); ++e) {
      const ScenarioEntry& entry = scenario->entries[e];
      if (!CoversAllDimensions(IntersectQuery(entry.key, expanded))) continue;
      Query source =
          SourceFilter(schema, entry.key, scenario->dimension, expanded);
      if (!CoversAllDimensions(source)) continue;
      std::vector<std::pair<std::size_t, ValueId>> subs;
      for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
        if (d == scenario->dimension) continue;
        for (ValueId v : entry.key[d].values()) {
          if (!schema.IsReal(v)) subs.emplace_back(d, v);
        }
      }
      subs.emplace_back(scenario->dimension, scenario->id);

      KeyPlan key{scenario->id, e, RowFilter(schema, source), std::move(subs),
                  {}};
      for (const FactoredQuery& fq : entry.values) {
        key.values.push_back({RowFilter(schema, fq.query), &fq.factors});
      }
      plan.keys.push_back(std::move(key));
    }
  }
  return plan;
}


void ScaleMeasures(std::span<const double> source,
                   const std::vector<double>& factors,
                   std::vector<double>& out) {
  out.resize(source.size());
  for (std::size_t m = 0; m < source.size(); ++m) {
    out[m] = source[m] * factors[m];
  }
}

struct Partial {
  std::vector<Accumulator> accumulators;
  std::uint64_t rows = 0;
};

Partial ScanRange(const DataCube& cube, const Plan& plan,
                  std::span<const AggregationSpec> specs, std::size_t begin,
                  std::size_t end) {
  Partial partial;
  for (const AggregationSpec& spec : specs) {
    partial.accumulators.emplace_back(spec.function);
  }
  std::vector<double> scaled;
  auto feed = [&](std::span<const double> measures) {
    ++partial.rows;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      partial.accumulators[i].Add(specs[i].Apply(measures));
    }
  };
  for (std::size_t r = begin; r < end; ++r) {
    auto coords = cube.coords(r);
    auto measures = cube.measures(r);
    if (plan.real.Matches(coords)) feed(measures);
    for (const KeyPlan& key : plan.keys) {
      if (!key.source.Matches(coords)) continue;
      for (const ValuePlan& value : key.values) {
        if (!value.filter.Matches(coords)) continue;
        ScaleMeasures(measures, *value.factors, scaled);
        feed(scaled);
      }
    }
  }
  return partial;
}

}  // namespace

std::string_view AggregateFunctionName(AggregateFunction fn) {
  switch (fn) {
    case AggregateFunction::kSum:
      return "sum";
    case AggregateFunction::kCount:
      return "count";
    case AggregateFunction::kAvg:
      return "avg";
    case AggregateFunction::kMin:
      return "min";
    case AggregateFunction::kMax:
      return "max";
  }
  return "sum";
}

absl::StatusOr<AggregationSpec> AggregationSpec::Create(
    const Schema& schema, AggregateFunction function,
    std::span<const std::string> measure_names) {
  if (measure_names.empty()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "aggregation needs at least one measure");
  }
  AggregationSpec spec;
  spec.function = function;
  for (const std::string& name : measure_names) {
    std::optional<std::size_t> m = schema.FindMeasure(name);
    if (!m) {
      return MakeError(ErrorCode::kUnknownMeasure,
                       strings::Cat("unknown measure '", name, "'"));
    }
    spec.measures.push_back(*m);
  }
  return spec;
}

double AggregationSpec::Apply(std::span<const double> row_measures) const {
  double value = row_measures[measures.front()];
  for (std::size_t i = 1; i < measures.size(); ++i) {
    value *= row_measures[measures[i]];
  }
  return value;
}

void Accumulator::Add(double value) {
  if (count_ == 0) {
    min_ = max_ = value;
  } else {
    min_ = std::min(min_, value);
    max_ = std::max(max_, value);
  }
  ++count_;
  sum_ += value;
}

void Accumulator::Merge(const Accumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    min_ = other.min_;
    max_ = other.max_;
  } else {
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
  }
  count_ += other.count_;
  sum_ += other.sum_;
}

std::optional<double> Accumulator::Result() const {
  switch (function_) {
    case AggregateFunction::kSum:
      return sum_;
    case AggregateFunction::kCount:
      return static_cast<double>(count_);
    case AggregateFunction::kAvg:
      if (count_ == 0) return std::nullopt;
      return sum_ / static_cast<double>(count_);
    case AggregateFunction::kMin:
      if (count_ == 0) return std::nullopt;
      return min_;
    case AggregateFunction::kMax:
      if (count_ == 0) return std::nullopt;
      return max_;
  }
  return std::nullopt;
}

absl::StatusOr<std::vector<MaterializedRow>> Materialize(
    const DataCube& cube, const ScenarioStore& store, const Query& query) {
  WHATIF_ASSIGN_OR_RETURN(Plan plan, BuildPlan(cube, store, query));
  std::vector<MaterializedRow> out;
  for (std::size_t r = 0; r < cube.row_count(); ++r) {
    if (!plan.real.Matches(cube.coords(r))) continue;
    Row row = cube.row(r);
    out.push_back({std::move(row.coords), std::move(row.measures), {}});
  }
  for (const KeyPlan& key : plan.keys) {
    for (std::size_t r = 0; r < cube.row_count(); ++r) {
      auto coords = cube.coords(r);
      if (!key.source.Matches(coords)) continue;
      for (std::size_t v = 0; v < key.values.size(); ++v) {
        const ValuePlan& value = key.values[v];
        if (!value.filter.Matches(coords)) continue;
        MaterializedRow row;
        row.coords.assign(coords.begin(), coords.end());
        for (const auto& [dim, id] : key.substitutions) row.coords[dim] = id;
        ScaleMeasures(cube.measures(r), *value.factors, row.measures);
        row.provenance = Provenance{key.scenario, key.entry, v, r};
        out.push_back(std::move(row));
      }
    }
  }
  return out;
}

absl::StatusOr<Evaluation> Evaluate(const DataCube& cube,
                                    const ScenarioStore& store,
                                    const Query& query,
                                    std::span<const AggregationSpec> specs,
                                    EvaluateOptions options) {
  for (const AggregationSpec& spec : specs) {
    if (spec.measures.empty()) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "aggregation needs at least one measure");
    }
    for (std::size_t m : spec.measures) {
      if (m >= cube.schema().measure_count()) {
        return MakeError(ErrorCode::kUnknownMeasure,
                         "aggregation names a measure outside the schema");
      }
    }
  }
  WHATIF_ASSIGN_OR_RETURN(Plan plan, BuildPlan(cube, store, query));

  const std::size_t rows = cube.row_count();
  const std::size_t parts =
      std::max<std::size_t>(1, std::min(options.partitions, rows));
  std::vector<Partial> partials(parts);
  if (parts == 1) {
    partials[0] = ScanRange(cube, plan, specs, 0, rows);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(parts);
    for (std::size_t p = 0; p < parts; ++p) {
      std::size_t begin = rows * p / parts;
      std::size_t end = rows * (p + 1) / parts;
      workers.emplace_back([&, p, begin, end] {
        partials[p] = ScanRange(cube, plan, specs, begin, end);
      });
    }
    for (std::thread& t : workers) t.join();
  }

  Partial total = std::move(partials[0]);
  for (std::size_t p = 1; p < parts; ++p) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      total.accumulators[i].Merge(partials[p].accumulators[i]);
    }
    total.rows += partials[p].rows;
  }
  Evaluation result;
  result.row_count = total.rows;
  for (const Accumulator& acc : total.accumulators) {
    result.values.push_back(acc.Result());
  }
  return result;
}

absl::StatusOr<Comparison> Compare(const DataCube& cube,
                                   const ScenarioStore& store,
                                   const Query& first, const Query& second,
                                   const AggregationSpec& spec) {
  std::span<const AggregationSpec> specs(&spec, 1);
  WHATIF_ASSIGN_OR_RETURN(Evaluation a, Evaluate(cube, store, first, specs));
  WHATIF_ASSIGN_OR_RETURN(Evaluation b, Evaluate(cube, store, second, specs));
  Comparison out{a.values[0], b.values[0], std::nullopt, std::nullopt};
  if (out.first && out.second) {
    out.difference = *out.second - *out.first;
    if (*out.first != 0.0) out.ratio = *out.second / *out.first;
  }
  return out;
}

}  // namespace whatif
