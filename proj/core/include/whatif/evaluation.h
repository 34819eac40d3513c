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

// Query answering over the virtual cube: the real rows of a DataCube plus the
// rows that stored scenarios simulate from them. Simulated rows exist only
// transiently, either as Materialize() output or as accumulator input inside
// Evaluate().

#ifndef WHATIF_EVALUATION_H_
#define WHATIF_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "whatif/cube.h"
#include "whatif/scenario_store.h"

namespace whatif {

enum class AggregateFunction { kSum, kCount, kAvg, kMin, kMax };

std::string_view AggregateFunctionName(AggregateFunction fn);

// An aggregate over a row expression. The expression is a single measure or
// the product of several, evaluated per row after factor scaling.
struct AggregationSpec {
  AggregateFunction function = AggregateFunction::kSum;
  std::vector<std::size_t> measures;  // indices into the schema's measures

  static absl::StatusOr<AggregationSpec> Create(
      const Schema& schema, AggregateFunction function,
      std::span<const std::string> measure_names);

  double Apply(std::span<const double> row_measures) const;

  friend bool operator==(const AggregationSpec&,
                         const AggregationSpec&) = default;
};

// Mergeable aggregation state. Partial accumulators built over disjoint row
// ranges combine with Merge(); avg carries (sum, count).
class Accumulator {
 public:
  explicit Accumulator(AggregateFunction function) : function_(function) {}

  void Add(double value);
  void Merge(const Accumulator& other);

  // Empty for avg/min/max over zero rows. sum and count are 0 then.
  std::optional<double> Result() const;
  std::uint64_t count() const { return count_; }

 private:
  AggregateFunction function_;
  std::uint64_t count_ = 0;
  double sum_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct Provenance {
  ValueId scenario = 0;         // owning scenario
  std::size_t entry = 0;        // key index within the scenario
  std::size_t value = 0;        // value-query index under the key
  std::size_t source_row = 0;   // cube row the simulated row derives from

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A row of the virtual cube: real when `provenance` is empty.
struct MaterializedRow {
  std::vector<ValueId> coords;
  std::vector<double> measures;
  std::optional<Provenance> provenance;

  bool simulated() const { return provenance.has_value(); }

  friend bool operator==(const MaterializedRow&,
                         const MaterializedRow&) = default;
};

// Real rows matching the query first (cube order), then simulated rows by
// scenario, key, source row and value query. STAR selects real values only;
// a scenario value takes part only when the query names it.
absl::StatusOr<std::vector<MaterializedRow>> Materialize(
    const DataCube& cube, const ScenarioStore& store, const Query& query);

struct EvaluateOptions {
  // Row-range partitions scanned concurrently and merged in order. The
  // result is deterministic for a fixed value.
  std::size_t partitions = 1;
};

struct Evaluation {
  std::vector<std::optional<double>> values;  // one per spec
  std::uint64_t row_count = 0;                // real plus simulated rows
};

// Single scan over the cube rows; equal to aggregating Materialize() output.
absl::StatusOr<Evaluation> Evaluate(const DataCube& cube,
                                    const ScenarioStore& store,
                                    const Query& query,
                                    std::span<const AggregationSpec> specs,
                                    EvaluateOptions options = {});

struct Comparison {
  std::optional<double> first;
  std::optional<double> second;
  std::optional<double> difference;  // second - first
  std::optional<double> ratio;       // second / first, absent when first == 0
};

absl::StatusOr<Comparison> Compare(const DataCube& cube,
                                   const ScenarioStore& store,
                                   const Query& first, const Query& second,
                                   const AggregationSpec& spec);

}  // namespace whatif

#endif  // WHATIF_EVALUATION_H_
