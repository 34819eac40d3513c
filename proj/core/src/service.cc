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

#include "whatif/service.h"

#include <charconv>
#include <utility>
#include <vector>

#include "strings.h"
#include "json_codec.h"
#include "whatif/evaluation.h"
#include "whatif/io.h"
#include "whatif/query_text.h"
#include "whatif/status.h"

namespace whatif {
namespace {

using json_codec::Json;

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoCube:
    case ErrorCode::kNameCollision:
      return 409;
    case ErrorCode::kUnknownScenario:
    case ErrorCode::kMissingKey:
    case ErrorCode::kIndexOutOfRange:
      return 404;
    default:
      return 400;
  }
}

HttpResponse JsonResponse(int status, const Json& body) {
  return {status, body.dump()};
}

HttpResponse TransportError(int status, std::string_view code,
                            std::string_view message) {
  Json body = Json::object();
  body["error"] = code;
  body["message"] = message;
  body["detail"] = nullptr;
  return JsonResponse(status, body);
}

Json NumberOrNull(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

absl::StatusOr<std::size_t> ParseIndex(std::string_view text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     strings::Cat("'", text, "' is not an index"));
  }
  return value;
}

absl::StatusOr<Query> QueryMember(const ScenarioStore& store, const Json& body,
                                  const char* name) {
  auto it = body.find(name);
  if (it == body.end()) {
    return MakeError(ErrorCode::kMalformedDocument,
                     strings::Cat("request needs '", name, "'"));
  }
  if (it->is_string()) return ParseQuery(it->get<std::string>(), store);
  Query query;
  WHATIF_ASSIGN_OR_RETURN(query, json_codec::QueryFromJson(store, *it));
  WHATIF_RETURN_IF_ERROR(store.ValidateQuery(query));
  return query;
}

// "sum:Volume*Cost" or {"function": "sum", "expression": "Volume*Cost"}.
absl::StatusOr<AggregationSpec> SpecFromJson(const Schema& schema,
                                             const Json& json) {
  if (json.is_string()) return ParseAggregation(json.get<std::string>(), schema);
  if (json.is_object() && json.contains("function") &&
      json.contains("expression") && json["function"].is_string() &&
      json["expression"].is_string()) {
    return ParseAggregation(
        strings::Cat(json["function"].get<std::string>(), ":",
                     json["expression"].get<std::string>()),
        schema);
  }
  return MakeError(ErrorCode::kMalformedDocument,
                   "an aggregation is \"fn:expr\" or {function, expression}");
}

Json SchemaToJson(const ScenarioStore& store) {
  const Schema& schema = store.schema();
  Json dims = Json::array();
  for (std::size_t d = 0; d < schema.dimension_count(); ++d) {
    Json values = Json::array();
    for (ValueId v : schema.real_values(d)) {
      values.push_back({{"value", schema.value_name(v)}, {"scenario", false}});
    }
    for (const Scenario& s : store.scenarios()) {
      if (s.dimension != d) continue;
      values.push_back({{"value", s.value}, {"scenario", true}});
    }
    dims.push_back({{"name", schema.dimension_name(d)},
                    {"values", std::move(values)}});
  }
  Json measures = Json::array();
  for (std::size_t m = 0; m < schema.measure_count(); ++m) {
    measures.push_back(schema.measure_name(m));
  }
  return {{"dimensions", std::move(dims)}, {"measures", std::move(measures)}};
}

Json RowToJson(const ScenarioStore& store, const MaterializedRow& row) {
  const Schema& schema = store.schema();
  Json coords = Json::object();
  for (std::size_t d = 0; d < row.coords.size(); ++d) {
    coords[schema.dimension_name(d)] =
        std::string(store.ValueName(row.coords[d]).value_or("?"));
  }
  Json out = Json::object();
  out["coords"] = std::move(coords);
  out["measures"] = json_codec::FactorsToJson(schema, row.measures);
  if (row.provenance) {
    out["provenance"] = {
        {"scenario",
         std::string(store.ValueName(row.provenance->scenario).value_or("?"))},
        {"entry", row.provenance->entry},
        {"value", row.provenance->value},
        {"sourceRow", row.provenance->source_row}};
  } else {
    out["provenance"] = nullptr;
  }
  return out;
}

}  // namespace

HttpResponse ErrorResponse(const absl::Status& status) {
  ErrorCode code = GetErrorCode(status);
  Json body = Json::object();
  body["error"] = ErrorCodeName(code);
  body["message"] = std::string(status.message());
  body["detail"] = nullptr;
  return JsonResponse(HttpStatusFor(code), body);
}

// Parsed request plus the snapshot it runs against.
class Service::Request {
 public:
  Request(std::shared_ptr<const State> state, Json body)
      : state_(std::move(state)), body_(std::move(body)) {}

  const State& state() const { return *state_; }
  const Json& body() const { return body_; }

  absl::Status RequireCube() const {
    if (state_->cube == nullptr) {
      return MakeError(ErrorCode::kNoCube, "no cube has been loaded");
    }
    return absl::OkStatus();
  }

 private:
  std::shared_ptr<const State> state_;
  Json body_;
};

Service::Service() : state_(std::make_shared<const State>()) {}

std::uint64_t Service::revision() const { return Snapshot()->revision; }

std::shared_ptr<const Service::State> Service::Snapshot() const {
  std::shared_lock lock(state_mu_);
  return state_;
}

void Service::Publish(std::shared_ptr<const State> next) {
  std::unique_lock lock(state_mu_);
  state_ = std::move(next);
}

HttpResponse Service::Handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  return Route(method, path, body);
}

HttpResponse Service::Route(std::string_view method, std::string_view path,
                            std::string_view body_text) {
  std::vector<std::string_view> parts = strings::SplitSkipEmpty(path, '/');
  if (parts.size() < 2 || parts[0] != "api") {
    return TransportError(404, "NOT_FOUND", strings::Cat("no route ", path));
  }
  Json body = Json::object();
  if (!body_text.empty()) {
    body = Json::parse(body_text, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded() || !body.is_object()) {
      return ErrorResponse(MakeError(ErrorCode::kMalformedDocument,
                                     "request body must be a JSON object"));
    }
  }
  const bool is_get = method == "GET";
  const bool mutates = !is_get && !(parts[1] == "evaluate" ||
                                    parts[1] == "materialize" ||
                                    parts[1] == "compare");

  std::unique_lock<std::mutex> write_lock(write_mu_, std::defer_lock);
  if (mutates) write_lock.lock();
  Request req(Snapshot(), std::move(body));
  const State& st = req.state();

  // Applies a store mutation to a copy and publishes it on success.
  auto mutate_store =
      [&](auto&& fn) -> absl::StatusOr<std::pair<Json, std::uint64_t>> {
    WHATIF_RETURN_IF_ERROR(req.RequireCube());
    auto store = std::make_shared<ScenarioStore>(*st.store);
    WHATIF_ASSIGN_OR_RETURN(Json result, fn(*store));
    auto next = std::make_shared<State>(State{st.cube, store, st.revision + 1});
    Publish(next);
    return std::make_pair(std::move(result), next->revision);
  };
  auto respond = [](int ok_status,
                    absl::StatusOr<std::pair<Json, std::uint64_t>> r) {
    if (!r.ok()) return ErrorResponse(r.status());
    r->first["revision"] = r->second;
    return JsonResponse(ok_status, r->first);
  };
  auto read = [&](auto&& fn) -> HttpResponse {
    absl::Status s = req.RequireCube();
    if (!s.ok()) return ErrorResponse(s);
    absl::StatusOr<Json> r = fn(*st.cube, *st.store);
    if (!r.ok()) return ErrorResponse(r.status());
    (*r)["revision"] = st.revision;
    return JsonResponse(200, *r);
  };
  auto method_not_allowed = [&] {
    return TransportError(405, "METHOD_NOT_ALLOWED",
                          strings::Cat(method, " not allowed on ", path));
  };

  const std::string_view resource = parts[1];
  if (resource == "cube" && parts.size() == 2) {
    if (method != "PUT") return method_not_allowed();
    const Json& b = req.body();
    if (!b.contains("manifest") || !b["manifest"].is_object() ||
        !b.contains("csv") || !b["csv"].is_string()) {
      return ErrorResponse(MakeError(ErrorCode::kMalformedDocument,
                                     "request needs 'manifest' and 'csv'"));
    }
    absl::StatusOr<CubeManifest> manifest =
        ManifestFromJson(b["manifest"].dump());
    if (!manifest.ok()) return ErrorResponse(manifest.status());
    absl::StatusOr<DataCube> cube =
        LoadCube(b["csv"].get<std::string>(), *manifest);
    if (!cube.ok()) return ErrorResponse(cube.status());
    auto shared_cube = std::make_shared<const DataCube>(*std::move(cube));
    auto store = std::make_shared<const ScenarioStore>(shared_cube->schema_ptr());
    auto next = std::make_shared<State>(
        State{shared_cube, store, st.revision + 1});
    Publish(next);
    Json out = Json::object();
    out["rowCount"] = shared_cube->row_count();
    out["schema"] = SchemaToJson(*store);
    out["revision"] = next->revision;
    return JsonResponse(200, out);
  }

  if (resource == "schema" && parts.size() == 2) {
    if (!is_get) return method_not_allowed();
    return read([&](const DataCube&, const ScenarioStore& store)
                    -> absl::StatusOr<Json> { return SchemaToJson(store); });
  }

  if (resource == "store" && parts.size() == 2) {
    if (is_get) {
      return read([&](const DataCube&, const ScenarioStore& store)
                      -> absl::StatusOr<Json> {
        return Json{{"store", json_codec::StoreToJson(store)}};
      });
    }
    if (method != "PUT") return method_not_allowed();
    absl::Status s = req.RequireCube();
    if (!s.ok()) return ErrorResponse(s);
    if (!req.body().contains("store")) {
      return ErrorResponse(
          MakeError(ErrorCode::kMalformedDocument, "request needs 'store'"));
    }
    absl::StatusOr<ScenarioStore> loaded =
        LoadStore(req.body()["store"].dump(), *st.cube);
    if (!loaded.ok()) return ErrorResponse(loaded.status());
    auto store = std::make_shared<const ScenarioStore>(*std::move(loaded));
    auto next = std::make_shared<State>(State{st.cube, store, st.revision + 1});
    Publish(next);
    Json out = {{"store", json_codec::StoreToJson(*store)},
                {"revision", next->revision}};
    return JsonResponse(200, out);
  }

  if (resource == "scenarios") {
    if (parts.size() == 2) {
      if (is_get) {
        return read([&](const DataCube&, const ScenarioStore& store)
                        -> absl::StatusOr<Json> {
          Json list = Json::array();
          for (const Scenario& s : store.scenarios()) {
            list.push_back(json_codec::ScenarioToJson(store, s));
          }
          return Json{{"scenarios", std::move(list)}};
        });
      }
      if (method != "POST") return method_not_allowed();
      return respond(201, mutate_store([&](ScenarioStore& store)
                                           -> absl::StatusOr<Json> {
        const Json& b = req.body();
        if (!b.contains("value") || !b["value"].is_string() ||
            !b.contains("dimension") || !b["dimension"].is_string()) {
          return MakeError(ErrorCode::kMalformedDocument,
                           "request needs 'value' and 'dimension'");
        }
        WHATIF_ASSIGN_OR_RETURN(
            Scenario created,
            store.CreateScenario(b["value"].get<std::string>(),
                                 b["dimension"].get<std::string>()));
        return Json{{"scenario", json_codec::ScenarioToJson(store, created)}};
      }));
    }
    const std::string target(parts[2]);
    if (parts.size() == 3) {
      if (is_get) {
        return read([&](const DataCube&, const ScenarioStore& store)
                        -> absl::StatusOr<Json> {
          const Scenario* s = store.FindByName(target);
          if (s == nullptr) {
            return MakeError(ErrorCode::kUnknownScenario,
                             strings::Cat("unknown scenario '", target, "'"));
          }
          return Json{{"scenario", json_codec::ScenarioToJson(store, *s)}};
        });
      }
      if (method != "DELETE") return method_not_allowed();
      return respond(200, mutate_store([&](ScenarioStore& store)
                                           -> absl::StatusOr<Json> {
        WHATIF_ASSIGN_OR_RETURN(Scenario removed, store.DeleteScenario(target));
        return Json{{"deleted", json_codec::ScenarioToJson(store, removed)}};
      }));
    }
    if (parts[3] == "queries") {
      if (parts.size() == 4) {
        if (method != "POST") return method_not_allowed();
        return respond(201, mutate_store([&](ScenarioStore& store)
                                             -> absl::StatusOr<Json> {
          WHATIF_ASSIGN_OR_RETURN(Query query,
                                  QueryMember(store, req.body(), "query"));
          std::vector<FactorAssignment> factors;
          if (req.body().contains("factors")) {
            WHATIF_ASSIGN_OR_RETURN(
                factors, json_codec::FactorsFromJson(store.schema(),
                                                     req.body()["factors"]));
          }
          WHATIF_ASSIGN_OR_RETURN(std::vector<ScenarioEntry> added,
                                  store.AssociateQuery(target, query, factors));
          Json entries = Json::array();
          for (const ScenarioEntry& e : added) {
            entries.push_back(json_codec::EntryToJson(store, e));
          }
          return Json{
              {"entries", std::move(entries)},
              {"scenario", json_codec::ScenarioToJson(
                               store, *store.FindByName(target))}};
        }));
      }
      absl::StatusOr<std::size_t> entry = ParseIndex(parts[4]);
      if (!entry.ok()) return ErrorResponse(entry.status());
      if (parts.size() == 5) {
        if (method != "DELETE") return method_not_allowed();
        return respond(200, mutate_store([&](ScenarioStore& store)
                                             -> absl::StatusOr<Json> {
          WHATIF_ASSIGN_OR_RETURN(ScenarioEntry removed,
                                  store.RemoveEntryAt(target, *entry));
          return Json{{"removed", json_codec::EntryToJson(store, removed)}};
        }));
      }
      if (parts.size() == 7 && parts[5] == "values") {
        if (method != "PATCH") return method_not_allowed();
        absl::StatusOr<std::size_t> value = ParseIndex(parts[6]);
        if (!value.ok()) return ErrorResponse(value.status());
        return respond(200, mutate_store([&](ScenarioStore& store)
                                             -> absl::StatusOr<Json> {
          if (!req.body().contains("factors")) {
            return MakeError(ErrorCode::kMalformedDocument,
                             "request needs 'factors'");
          }
          WHATIF_ASSIGN_OR_RETURN(
              std::vector<FactorAssignment> factors,
              json_codec::FactorsFromJson(store.schema(),
                                          req.body()["factors"]));
          WHATIF_ASSIGN_OR_RETURN(
              FactoredQuery updated,
              store.UpdateFactorsAt(target, *entry, *value, factors));
          return Json{
              {"value", json_codec::FactoredQueryToJson(store, updated)}};
        }));
      }
    }
  }

  if (resource == "evaluate" && parts.size() == 2) {
    if (method != "POST") return method_not_allowed();
    return read([&](const DataCube& cube, const ScenarioStore& store)
                    -> absl::StatusOr<Json> {
      WHATIF_ASSIGN_OR_RETURN(Query query,
                              QueryMember(store, req.body(), "query"));
      auto it = req.body().find("specs");
      if (it == req.body().end() || !it->is_array()) {
        return MakeError(ErrorCode::kMalformedDocument,
                         "request needs a 'specs' array");
      }
      std::vector<AggregationSpec> specs;
      for (const Json& s : *it) {
        WHATIF_ASSIGN_OR_RETURN(AggregationSpec spec,
                                SpecFromJson(store.schema(), s));
        specs.push_back(std::move(spec));
      }
      WHATIF_ASSIGN_OR_RETURN(Evaluation result,
                              Evaluate(cube, store, query, specs));
      Json values = Json::array();
      for (const auto& v : result.values) values.push_back(NumberOrNull(v));
      return Json{{"results", std::move(values)},
                  {"rowCount", result.row_count}};
    });
  }

  if (resource == "materialize" && parts.size() == 2) {
    if (method != "POST") return method_not_allowed();
    return read([&](const DataCube& cube, const ScenarioStore& store)
                    -> absl::StatusOr<Json> {
      WHATIF_ASSIGN_OR_RETURN(Query query,
                              QueryMember(store, req.body(), "query"));
      std::size_t limit = static_cast<std::size_t>(-1);
      if (auto it = req.body().find("limit");
          it != req.body().end() && !it->is_null()) {
        if (!it->is_number_unsigned()) {
          return MakeError(ErrorCode::kInvalidArgument,
                           "'limit' must be a non-negative integer");
        }
        limit = it->get<std::size_t>();
      }
      WHATIF_ASSIGN_OR_RETURN(std::vector<MaterializedRow> rows,
                              Materialize(cube, store, query));
      Json list = Json::array();
      for (std::size_t i = 0; i < rows.size() && i < limit; ++i) {
        list.push_back(RowToJson(store, rows[i]));
      }
      return Json{{"rows", std::move(list)}, {"total", rows.size()}};
    });
  }

  if (resource == "compare" && parts.size() == 2) {
    if (method != "POST") return method_not_allowed();
    return read([&](const DataCube& cube, const ScenarioStore& store)
                    -> absl::StatusOr<Json> {
      WHATIF_ASSIGN_OR_RETURN(Query first,
                              QueryMember(store, req.body(), "first"));
      WHATIF_ASSIGN_OR_RETURN(Query second,
                              QueryMember(store, req.body(), "second"));
      if (!req.body().contains("spec")) {
        return MakeError(ErrorCode::kMalformedDocument, "request needs 'spec'");
      }
      WHATIF_ASSIGN_OR_RETURN(AggregationSpec spec,
                              SpecFromJson(store.schema(), req.body()["spec"]));
      WHATIF_ASSIGN_OR_RETURN(Comparison c,
                              Compare(cube, store, first, second, spec));
      return Json{{"first", NumberOrNull(c.first)},
                  {"second", NumberOrNull(c.second)},
                  {"difference", NumberOrNull(c.difference)},
                  {"ratio", NumberOrNull(c.ratio)}};
    });
  }

  return TransportError(404, "NOT_FOUND", strings::Cat("no route ", path));
}

}  // namespace whatif
