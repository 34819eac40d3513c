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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <utility>

#include "strings.h"
#include "whatif/io.h"
#include "whatif/status.h"

namespace whatif {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool ParseDouble(std::string_view text, double& out) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

void AppendField(std::string& out, std::string_view field) {
  bool quote = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!quote) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

absl::StatusOr<std::vector<CsvRecord>> ParseCsv(std::string_view text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  bool in_quotes = false;
  bool field_started = false;  // anything seen for the current record
  current.line = line;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    bool blank = current.fields.size() == 1 && current.fields[0].empty() &&
                 !field_started;
    if (!blank) records.push_back(std::move(current));
    current = CsvRecord{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          return MakeError(ErrorCode::kMalformedDocument,
                           strings::Cat("line ", line,
                                        ": quote inside an unquoted field"));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        field_started = true;
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) {
    return MakeError(ErrorCode::kMalformedDocument,
                     strings::Cat("line ", current.line,
                                  ": unterminated quoted field"));
  }
  if (field_started || !field.empty()) end_record();
  return records;
}

absl::StatusOr<DataCube> LoadCube(std::string_view csv_text,
                                  const CubeManifest& manifest) {
  WHATIF_ASSIGN_OR_RETURN(std::vector<CsvRecord> records, ParseCsv(csv_text));
  if (records.empty()) {
    return MakeError(ErrorCode::kMissingColumn, "missing header row");
  }
  if (manifest.dimensions.empty() || manifest.measures.empty()) {
    return MakeError(ErrorCode::kSchemaMismatch,
                     "manifest needs at least one dimension and one measure");
  }
  const std::vector<std::string>& header = records.front().fields;
  auto column = [&](const std::string& name) -> absl::StatusOr<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (Trim(header[c]) == name) return c;
    }
    return MakeError(ErrorCode::kMissingColumn,
                     strings::Cat("column '", name, "' not found in header"));
  };
  std::vector<std::size_t> dim_cols;
  std::vector<std::size_t> measure_cols;
  for (const std::string& d : manifest.dimensions) {
    WHATIF_ASSIGN_OR_RETURN(std::size_t c, column(d));
    dim_cols.push_back(c);
  }
  for (const std::string& m : manifest.measures) {
    WHATIF_ASSIGN_OR_RETURN(std::size_t c, column(m));
    for (std::size_t d : dim_cols) {
      if (d == c) {
        return MakeError(ErrorCode::kSchemaMismatch,
                         strings::Cat("column '", m,
                                      "' is both a dimension and a measure"));
      }
    }
    measure_cols.push_back(c);
  }

  // First pass collects values per dimension in appearance order.
  std::vector<Schema::DimensionSpec> dims;
  std::vector<std::unordered_map<std::string, std::size_t>> seen(
      dim_cols.size());
  for (const std::string& d : manifest.dimensions) dims.push_back({d, {}});
  struct Parsed {
    std::vector<std::size_t> local;  // per-dimension value index
    std::vector<double> measures;
  };
  std::vector<Parsed> parsed;
  parsed.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != header.size()) {
      return MakeError(ErrorCode::kMalformedDocument,
                       strings::Cat("line ", rec.line, ": expected ",
                                    header.size(), " fields, found ",
                                    rec.fields.size()));
    }
    Parsed p;
    for (std::size_t d = 0; d < dim_cols.size(); ++d) {
      const std::string& value = rec.fields[dim_cols[d]];
      if (value.empty()) {
        return MakeError(ErrorCode::kInvalidArgument,
                         strings::Cat("line ", rec.line, ": empty value for '",
                                      manifest.dimensions[d], "'"));
      }
      auto [it, inserted] = seen[d].emplace(value, dims[d].values.size());
      if (inserted) dims[d].values.push_back(value);
      p.local.push_back(it->second);
    }
    for (std::size_t m = 0; m < measure_cols.size(); ++m) {
      double v = 0;
      const std::string& cell = rec.fields[measure_cols[m]];
      if (!ParseDouble(cell, v)) {
        return MakeError(ErrorCode::kMeasureParse,
                         strings::Cat("line ", rec.line, ": '", cell,
                                      "' in column '", manifest.measures[m],
                                      "' is not a finite number"));
      }
      p.measures.push_back(v);
    }
    parsed.push_back(std::move(p));
  }

  WHATIF_ASSIGN_OR_RETURN(Schema schema,
                          Schema::Create(std::move(dims), manifest.measures));
  auto shared = std::make_shared<const Schema>(std::move(schema));
  std::vector<Row> rows;
  rows.reserve(parsed.size());
  for (Parsed& p : parsed) {
    Row row;
    for (std::size_t d = 0; d < p.local.size(); ++d) {
      row.coords.push_back(shared->real_values(d)[p.local[d]]);
    }
    row.measures = std::move(p.measures);
    rows.push_back(std::move(row));
  }
  return DataCube::Create(shared, std::move(rows));
}

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  std::string out(buf);
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

std::string ExportRows(const ScenarioStore& names,
                       std::span<const MaterializedRow> rows) {
  const Schema& schema = names.schema();
  std::string out;
  for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
    if (d > 0) out.push_back(',');
    AppendField(out, schema.dimension_name(d));
  }
  for (std::size_t m = 0; m < schema.measure_count(); ++m) {
    out.push_back(',');
    AppendField(out, schema.measure_name(m));
  }
  out.push_back('\n');
  for (const MaterializedRow& row : rows) {
    for (std::size_t d = 0; d < row.coords.size(); ++d) {
      if (d > 0) out.push_back(',');
      AppendField(out, names.ValueName(row.coords[d]).value_or("?"));
    }
    for (double m : row.measures) {
      out.push_back(',');
      out.append(FormatNumber(m));
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace whatif
