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

#include "whatif/cube.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "strings.h"
#include "whatif/status.h"

namespace whatif {

Selection Selection::Of(std::vector<ValueId> values) {
  Selection s;
  s.star_ = false;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  s.values_ = std::move(values);
  return s;
}

bool Selection::Contains(ValueId value) const {
  return star_ || std::binary_search(values_.begin(), values_.end(), value);
}

Selection Selection::Intersect(const Selection& other) const {
  if (star_) return other;
  if (other.star_) return *this;
  std::vector<ValueId> out;
  std::set_intersection(values_.begin(), values_.end(), other.values_.begin(),
                        other.values_.end(), std::back_inserter(out));
  Selection s;
  s.star_ = false;
  s.values_ = std::move(out);
  return s;
}

Selection Selection::With(ValueId value) const {
  if (star_ || Contains(value)) return *this;
  Selection s = *this;
  s.values_.insert(std::upper_bound(s.values_.begin(), s.values_.end(), value),
                   value);
  return s;
}

absl::StatusOr<Schema> Schema::Create(std::vector<DimensionSpec> dimensions,
                                      std::vector<std::string> measures) {
  if (dimensions.empty()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "a schema needs at least one dimension");
  }
  if (measures.empty()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "a schema needs at least one measure");
  }
  std::unordered_set<std::string> names;
  for (const DimensionSpec& dim : dimensions) {
    if (dim.name.empty() || !names.insert(dim.name).second) {
      return MakeError(ErrorCode::kNameCollision,
                       strings::Cat("duplicate or empty dimension name '",
                                    dim.name, "'"));
    }
  }
  for (const std::string& measure : measures) {
    if (measure.empty() || !names.insert(measure).second) {
      return MakeError(ErrorCode::kNameCollision,
                       strings::Cat("measure name '", measure,
                                    "' is empty or already used"));
    }
  }

  Schema schema;
  std::unordered_map<std::string, std::size_t> owner;
  for (std::size_t d = 0; d < dimensions.size(); ++d) {
    Dimension dim{std::move(dimensions[d].name), {}};
    for (std::string& value : dimensions[d].values) {
      auto [it, inserted] = owner.emplace(value, d);
      if (!inserted) {
        if (it->second == d) continue;
        return MakeError(
            ErrorCode::kDuplicateValue,
            strings::Cat("value '", value, "' appears in dimensions '",
                         schema.dimensions_[it->second].name, "' and '",
                         dim.name, "'"));
      }
      dim.values.push_back(static_cast<ValueId>(schema.values_.size()));
      schema.values_.push_back({std::move(value), d});
    }
    schema.dimensions_.push_back(std::move(dim));
  }
  schema.measures_ = std::move(measures);
  return schema;
}

std::optional<std::size_t> Schema::FindDimension(std::string_view name) const {
  for (std::size_t d = 0; d < dimensions_.size(); ++d) {
    if (dimensions_[d].name == name) return d;
  }
  return std::nullopt;
}

std::optional<std::size_t> Schema::FindMeasure(std::string_view name) const {
  for (std::size_t m = 0; m < measures_.size(); ++m) {
    if (measures_[m] == name) return m;
  }
  return std::nullopt;
}

std::optional<ValueId> Schema::FindValue(std::string_view name) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].name == name) return static_cast<ValueId>(i);
  }
  return std::nullopt;
}

Query Schema::ExpandStars(const Query& query) const {
  Query out = query;
  for (std::size_t d = 0; d < query.dimension_count(); ++d) {
    if (query[d].is_star()) {
      const std::vector<ValueId>& real = dimensions_[d].values;
      out[d] = Selection::Of({real.begin(), real.end()});
    }
  }
  return out;
}

bool operator==(const Schema& a, const Schema& b) {
  if (a.measures_ != b.measures_) return false;
  if (a.dimensions_.size() != b.dimensions_.size()) return false;
  for (std::size_t d = 0; d < a.dimensions_.size(); ++d) {
    if (a.dimensions_[d].name != b.dimensions_[d].name ||
        a.dimensions_[d].values != b.dimensions_[d].values) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    if (a.values_[i].name != b.values_[i].name) return false;
  }
  return true;
}

absl::StatusOr<DataCube> DataCube::Create(std::shared_ptr<const Schema> schema,
                                          std::vector<Row> rows) {
  if (schema == nullptr) {
    return MakeError(ErrorCode::kSchemaMismatch, "cube without a schema");
  }
  const std::size_t dims = schema->dimension_count();
  const std::size_t meas = schema->measure_count();
  DataCube cube;
  cube.coords_.reserve(rows.size() * dims);
  cube.measures_.reserve(rows.size() * meas);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.coords.size() != dims || row.measures.size() != meas) {
      return MakeError(ErrorCode::kSchemaMismatch,
                       strings::Cat("row ", r, " does not match the schema"));
    }
    for (std::size_t d = 0; d < dims; ++d) {
      ValueId v = row.coords[d];
      if (!schema->IsReal(v) || schema->dimension_of(v) != d) {
        return MakeError(
            ErrorCode::kSchemaMismatch,
            strings::Cat("row ", r, " has a foreign value in dimension '",
                         schema->dimension_name(d), "'"));
      }
    }
    for (double m : row.measures) {
      if (!std::isfinite(m)) {
        return MakeError(ErrorCode::kMeasureParse,
                         strings::Cat("row ", r, " has a non-finite measure"));
      }
    }
    cube.coords_.insert(cube.coords_.end(), row.coords.begin(),
                        row.coords.end());
    cube.measures_.insert(cube.measures_.end(), row.measures.begin(),
                          row.measures.end());
  }
  cube.row_count_ = rows.size();
  cube.schema_ = std::move(schema);
  return cube;
}

Row DataCube::row(std::size_t index) const {
  auto c = coords(index);
  auto m = measures(index);
  return Row{{c.begin(), c.end()}, {m.begin(), m.end()}};
}

bool MatchesCoords(std::span<const ValueId> coords, const Query& query) {
  for (std::size_t d = 0; d < coords.size(); ++d) {
    if (!query[d].Contains(coords[d])) return false;
  }
  return true;
}

absl::StatusOr<bool> RowMatches(const Row& row, const Query& query) {
  if (row.coords.size() != query.dimension_count()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "row and query have different dimension counts");
  }
  return MatchesCoords(row.coords, query);
}

absl::StatusOr<RowBag> Select(const DataCube& cube, const Query& query) {
  const Schema& schema = cube.schema();
  if (query.dimension_count() != schema.dimension_count()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "query and cube have different dimension counts");
  }
  for (const Selection& sel : query.selections()) {
    for (ValueId v : sel.values()) {
      if (!schema.IsReal(v)) {
        return MakeError(ErrorCode::kInvalidQuery,
                         "select is defined on real values only");
      }
    }
  }
  RowBag out{cube.schema_ptr(), {}};
  for (std::size_t r = 0; r < cube.row_count(); ++r) {
    if (MatchesCoords(cube.coords(r), query)) out.rows.push_back(cube.row(r));
  }
  return out;
}

absl::StatusOr<RowBag> SelectModify(const RowBag& input,
                                    std::span<const double> factors,
                                    std::optional<DimensionMapping> mapping) {
  for (double f : factors) {
    if (!std::isfinite(f)) {
      return MakeError(ErrorCode::kInvalidFactor, "factor is not finite");
    }
  }
  if (input.schema != nullptr) {
    if (!factors.empty() && factors.size() != input.schema->measure_count()) {
      return MakeError(ErrorCode::kSchemaMismatch,
                       "one factor per measure is required");
    }
    if (mapping && mapping->dimension >= input.schema->dimension_count()) {
      return MakeError(ErrorCode::kUnknownDimension,
                       "mapping names a dimension outside the schema");
    }
  }
  RowBag out{input.schema, input.rows};
  for (Row& row : out.rows) {
    if (!factors.empty()) {
      for (std::size_t m = 0; m < row.measures.size(); ++m) {
        row.measures[m] *= factors[m];
      }
    }
    if (mapping) row.coords[mapping->dimension] = mapping->value;
  }
  return out;
}

absl::StatusOr<RowBag> CubeUnion(const RowBag& a, const RowBag& b) {
  if (a.schema != b.schema &&
      (a.schema == nullptr || b.schema == nullptr || !(*a.schema == *b.schema))) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "union operands have different schemas");
  }
  RowBag out{a.schema, a.rows};
  out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
  return out;
}

Query IntersectQuery(const Query& a, const Query& b) {
  std::vector<Selection> out;
  out.reserve(a.dimension_count());
  for (std::size_t d = 0; d < a.dimension_count(); ++d) {
    out.push_back(a[d].Intersect(b[d]));
  }
  return Query(std::move(out));
}

}  // namespace whatif
