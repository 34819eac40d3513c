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

#include "whatif/query_text.h"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "strings.h"
#include "whatif/io.h"
#include "whatif/status.h"

namespace whatif {
namespace {

// A slice of the input together with its 1-based column.
struct Token {
  std::string_view text;
  std::size_t column;
};

bool IsSpace(char c) { return c == ' ' || c == '\t'; }

Token Trim(Token t) {
  while (!t.text.empty() && IsSpace(t.text.front())) {
    t.text.remove_prefix(1);
    ++t.column;
  }
  while (!t.text.empty() && IsSpace(t.text.back())) t.text.remove_suffix(1);
  return t;
}

std::vector<Token> Split(Token t, char sep) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.text.size(); ++i) {
    if (i == t.text.size() || t.text[i] == sep) {
      out.push_back({t.text.substr(start, i - start), t.column + start});
      start = i + 1;
    }
  }
  return out;
}

absl::Status ParseError(std::size_t column, std::string_view message) {
  return MakeError(ErrorCode::kQueryParse,
                   strings::Cat("column ", column, ": ", message));
}

}  // namespace

absl::StatusOr<Query> ParseQuery(std::string_view text,
                                 const ScenarioStore& store) {
  const Schema& schema = store.schema();
  Query query(schema.dimension_count());
  std::vector<bool> seen(schema.dimension_count(), false);
  for (Token clause : Split({text, 1}, ';')) {
    clause = Trim(clause);
    if (clause.text.empty()) continue;
    std::size_t eq = clause.text.find('=');
    if (eq == std::string_view::npos) {
      return ParseError(clause.column, "expected Dimension=values");
    }
    Token name = Trim({clause.text.substr(0, eq), clause.column});
    Token rhs = Trim({clause.text.substr(eq + 1), clause.column + eq + 1});
    if (name.text.empty()) return ParseError(name.column, "missing dimension");
    std::optional<std::size_t> dim = schema.FindDimension(name.text);
    if (!dim) {
      return MakeError(ErrorCode::kUnknownDimension,
                       strings::Cat("unknown dimension '", name.text, "'"));
    }
    if (seen[*dim]) {
      return ParseError(name.column,
                        strings::Cat("dimension '", name.text,
                                     "' appears more than once"));
    }
    seen[*dim] = true;
    if (rhs.text.empty()) return ParseError(rhs.column, "missing values");
    if (rhs.text == "*") continue;
    std::vector<ValueId> ids;
    for (Token item : Split(rhs, ',')) {
      item = Trim(item);
      if (item.text.empty()) return ParseError(item.column, "empty value");
      if (item.text == "*") {
        return ParseError(item.column, "'*' must stand alone");
      }
      std::optional<ValueId> id = store.LookupValue(item.text);
      if (!id) {
        return MakeError(ErrorCode::kUnknownValue,
                         strings::Cat("unknown value '", item.text, "'"));
      }
      if (store.DimensionOf(*id) != dim) {
        return MakeError(ErrorCode::kInvalidQuery,
                         strings::Cat("value '", item.text,
                                      "' does not belong to dimension '",
                                      name.text, "'"));
      }
      ids.push_back(*id);
    }
    query[*dim] = Selection::Of(std::move(ids));
  }
  return query;
}

std::string FormatQuery(const Query& query, const ScenarioStore& store) {
  const Schema& schema = store.schema();
  std::vector<std::string> clauses;
  for (std::size_t d = 0; d < query.dimension_count(); ++d) {
    std::string clause = strings::Cat(schema.dimension_name(d), "=");
    if (query[d].is_star()) {
      clause += "*";
    } else {
      std::vector<std::string_view> names;
      for (ValueId v : query[d].values()) {
        names.push_back(store.ValueName(v).value_or("?"));
      }
      clause += strings::Join(names, ",");
    }
    clauses.push_back(std::move(clause));
  }
  return strings::Join(clauses, ";");
}

absl::StatusOr<AggregationSpec> ParseAggregation(std::string_view text,
                                                 const Schema& schema) {
  Token all = Trim({text, 1});
  std::size_t colon = all.text.find(':');
  if (colon == std::string_view::npos) {
    return ParseError(all.column, "expected function:expression");
  }
  Token fn = Trim({all.text.substr(0, colon), all.column});
  Token expr = Trim({all.text.substr(colon + 1), all.column + colon + 1});
  static constexpr std::pair<std::string_view, AggregateFunction> kFunctions[] =
      {{"sum", AggregateFunction::kSum},
       {"count", AggregateFunction::kCount},
       {"avg", AggregateFunction::kAvg},
       {"min", AggregateFunction::kMin},
       {"max", AggregateFunction::kMax}};
  std::optional<AggregateFunction> function;
  for (const auto& [name, f] : kFunctions) {
    if (fn.text == name) function = f;
  }
  if (!function) {
    return ParseError(fn.column,
                      strings::Cat("unknown function '", fn.text,
                                   "', expected sum, count, avg, min or max"));
  }
  std::vector<std::string> measures;
  for (Token m : Split(expr, '*')) {
    m = Trim(m);
    if (m.text.empty()) return ParseError(m.column, "missing measure name");
    measures.emplace_back(m.text);
  }
  return AggregationSpec::Create(schema, *function, measures);
}

std::string FormatAggregation(const AggregationSpec& spec,
                              const Schema& schema) {
  std::vector<std::string_view> names;
  for (std::size_t m : spec.measures) names.push_back(schema.measure_name(m));
  return strings::Cat(AggregateFunctionName(spec.function), ":",
                      strings::Join(names, "*"));
}

absl::StatusOr<FactorAssignment> ParseFactor(std::string_view text,
                                             const Schema& schema) {
  Token all = Trim({text, 1});
  std::size_t eq = all.text.find('=');
  if (eq == std::string_view::npos) {
    return ParseError(all.column, "expected Measure=number");
  }
  Token name = Trim({all.text.substr(0, eq), all.column});
  Token num = Trim({all.text.substr(eq + 1), all.column + eq + 1});
  std::optional<std::size_t> m = schema.FindMeasure(name.text);
  if (!m) {
    return MakeError(ErrorCode::kUnknownMeasure,
                     strings::Cat("unknown measure '", name.text, "'"));
  }
  double value = 0;
  std::string_view digits = num.text;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size() || !std::isfinite(value)) {
    return MakeError(ErrorCode::kInvalidFactor,
                     strings::Cat("factor '", num.text,
                                  "' is not a finite number"));
  }
  return FactorAssignment{*m, value};
}

}  // namespace whatif
