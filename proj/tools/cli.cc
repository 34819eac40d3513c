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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "whatif/evaluation.h"
#include "whatif/io.h"
#include "whatif/query_text.h"
#include "whatif/scenario_store.h"
#include "whatif/status.h"

namespace whatif::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kManifestFile[] = "manifest.json";
constexpr char kCubeFile[] = "cube.csv";
constexpr char kStoreFile[] = "store.json";

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes through a temporary file so a failed write leaves the old file.
absl::Status WriteFile(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "cannot write " + path.string() + ": " + ec.message());
  }
  return absl::OkStatus();
}

class Workspace {
 public:
  explicit Workspace(fs::path dir) : dir_(std::move(dir)) {}

  absl::Status Open() {
    if (!fs::exists(dir_ / kManifestFile)) {
      return MakeError(ErrorCode::kNoCube,
                       "no cube in workspace " + dir_.string() +
                           "; run 'whatif load' first");
    }
    auto manifest_text = ReadFile(dir_ / kManifestFile);
    if (!manifest_text.ok()) return manifest_text.status();
    auto manifest = ManifestFromJson(*manifest_text);
    if (!manifest.ok()) return manifest.status();
    auto csv = ReadFile(dir_ / kCubeFile);
    if (!csv.ok()) return csv.status();
    auto cube = LoadCube(*csv, *manifest);
    if (!cube.ok()) return cube.status();
    cube_ = std::make_shared<const DataCube>(*std::move(cube));
    if (fs::exists(dir_ / kStoreFile)) {
      auto text = ReadFile(dir_ / kStoreFile);
      if (!text.ok()) return text.status();
      auto store = LoadStore(*text, *cube_);
      if (!store.ok()) return store.status();
      store_.emplace(*std::move(store));
    } else {
      store_.emplace(cube_->schema_ptr());
    }
    return absl::OkStatus();
  }

  absl::Status SaveStoreFile() const {
    return WriteFile(dir_ / kStoreFile, SaveStore(*store_));
  }

  const DataCube& cube() const { return *cube_; }
  ScenarioStore& store() { return *store_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::shared_ptr<const DataCube> cube_;
  std::optional<ScenarioStore> store_;
};

std::string FormatFactors(const FactoredQuery& fq, const Schema& schema) {
  std::string out;
  for (std::size_t m = 0; m < fq.factors.size(); ++m) {
    if (m > 0) out += " ";
    out += schema.measure_name(m) + "=" + FormatNumber(fq.factors[m]);
  }
  return out;
}

void PrintEntry(std::ostream& out, const ScenarioStore& store,
                const ScenarioEntry& entry, std::string_view indent) {
  out << indent << "key   " << FormatQuery(entry.key, store) << "\n";
  for (std::size_t v = 0; v < entry.values.size(); ++v) {
    out << indent << "value[" << v << "] "
        << FormatQuery(entry.values[v].query, store) << "  "
        << FormatFactors(entry.values[v], store.schema()) << "\n";
  }
}

void PrintScenario(std::ostream& out, const ScenarioStore& store,
                   const Scenario& scenario) {
  out << scenario.value << " ("
      << store.schema().dimension_name(scenario.dimension) << ")\n";
  for (std::size_t e = 0; e < scenario.entries.size(); ++e) {
    out << "  entry[" << e << "]\n";
    PrintEntry(out, store, scenario.entries[e], "    ");
  }
}

absl::StatusOr<std::vector<FactorAssignment>> ParseFactors(
    const std::vector<std::string>& texts, const Schema& schema) {
  std::vector<FactorAssignment> out;
  for (const std::string& t : texts) {
    auto f = ParseFactor(t, schema);
    if (!f.ok()) return f.status();
    out.push_back(*f);
  }
  return out;
}

std::string FormatOptional(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : "null";
}

struct Options {
  std::string workspace = ".whatif";
  // load
  std::string csv_path;
  std::string manifest_path;
  std::vector<std::string> dimensions;
  std::vector<std::string> measures;
  // scenario
  std::string target;
  std::string dimension;
  std::string query;
  std::vector<std::string> factors;
  std::optional<std::size_t> entry;
  std::size_t value_index = 0;
  // eval / materialize / compare
  std::vector<std::string> specs;
  std::string spec;
  std::string second_query;
  std::string out_path;
  std::optional<std::size_t> partitions;
  // store
  std::string store_path;
};

class Commands {
 public:
  Commands(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  absl::Status Load() {
    CubeManifest manifest;
    if (!o_.manifest_path.empty()) {
      auto text = ReadFile(o_.manifest_path);
      if (!text.ok()) return text.status();
      auto parsed = ManifestFromJson(*text);
      if (!parsed.ok()) return parsed.status();
      manifest = *std::move(parsed);
    } else {
      manifest.dimensions = o_.dimensions;
      manifest.measures = o_.measures;
    }
    manifest.source = o_.csv_path;
    auto csv = ReadFile(o_.csv_path);
    if (!csv.ok()) return csv.status();
    auto cube = LoadCube(*csv, manifest);
    if (!cube.ok()) return cube.status();
    fs::path dir = o_.workspace;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "cannot create " + dir.string() + ": " + ec.message());
    }
    WHATIF_RETURN_IF_ERROR(WriteFile(dir / kCubeFile, *csv));
    WHATIF_RETURN_IF_ERROR(
        WriteFile(dir / kStoreFile, SaveStore(ScenarioStore(cube->schema_ptr()))));
    WHATIF_RETURN_IF_ERROR(WriteFile(dir / kManifestFile, ManifestToJson(manifest)));
    out_ << "loaded " << cube->row_count() << " rows\n";
    return absl::OkStatus();
  }

  absl::Status ScenarioCreate() {
    WHATIF_RETURN_IF_ERROR(Open());
    auto created = ws_->store().CreateScenario(o_.target, o_.dimension);
    if (!created.ok()) return created.status();
    WHATIF_RETURN_IF_ERROR(ws_->SaveStoreFile());
    out_ << "created " << created->value << " ("
         << ws_->cube().schema().dimension_name(created->dimension) << ")\n";
    return absl::OkStatus();
  }

  absl::Status ScenarioAddQuery() {
    WHATIF_RETURN_IF_ERROR(Open());
    ScenarioStore& store = ws_->store();
    auto query = ParseQuery(o_.query, store);
    if (!query.ok()) return query.status();
    auto factors = ParseFactors(o_.factors, store.schema());
    if (!factors.ok()) return factors.status();
    auto entries = store.AssociateQuery(o_.target, *query, *factors);
    if (!entries.ok()) return entries.status();
    WHATIF_RETURN_IF_ERROR(ws_->SaveStoreFile());
    for (const ScenarioEntry& e : *entries) PrintEntry(out_, store, e, "");
    return absl::OkStatus();
  }

  absl::Status ScenarioRemove() {
    WHATIF_RETURN_IF_ERROR(Open());
    ScenarioStore& store = ws_->store();
    if (o_.entry) {
      auto removed = store.RemoveEntryAt(o_.target, *o_.entry);
      if (!removed.ok()) return removed.status();
      WHATIF_RETURN_IF_ERROR(ws_->SaveStoreFile());
      out_ << "removed entry " << *o_.entry << " of " << o_.target << "\n";
      PrintEntry(out_, store, *removed, "  ");
    } else {
      auto deleted = store.DeleteScenario(o_.target);
      if (!deleted.ok()) return deleted.status();
      WHATIF_RETURN_IF_ERROR(ws_->SaveStoreFile());
      out_ << "deleted " << deleted->value << "\n";
    }
    return absl::OkStatus();
  }

  absl::Status ScenarioSetFactors() {
    WHATIF_RETURN_IF_ERROR(Open());
    ScenarioStore& store = ws_->store();
    auto factors = ParseFactors(o_.factors, store.schema());
    if (!factors.ok()) return factors.status();
    auto updated =
        store.UpdateFactorsAt(o_.target, *o_.entry, o_.value_index, *factors);
    if (!updated.ok()) return updated.status();
    WHATIF_RETURN_IF_ERROR(ws_->SaveStoreFile());
    out_ << FormatQuery(updated->query, store) << "  "
         << FormatFactors(*updated, store.schema()) << "\n";
    return absl::OkStatus();
  }

  absl::Status ScenarioList() {
    WHATIF_RETURN_IF_ERROR(Open());
    const ScenarioStore& store = ws_->store();
    if (!o_.target.empty()) {
      const Scenario* s = store.FindByName(o_.target);
      if (s == nullptr) {
        return MakeError(ErrorCode::kUnknownScenario,
                         "unknown scenario '" + o_.target + "'");
      }
      PrintScenario(out_, store, *s);
      return absl::OkStatus();
    }
    for (const Scenario& s : store.scenarios()) PrintScenario(out_, store, s);
    return absl::OkStatus();
  }

  absl::Status Eval() {
    WHATIF_RETURN_IF_ERROR(Open());
    const ScenarioStore& store = ws_->store();
    auto query = ParseQuery(o_.query, store);
    if (!query.ok()) return query.status();
    std::vector<AggregationSpec> specs;
    for (const std::string& text : o_.specs) {
      auto spec = ParseAggregation(text, store.schema());
      if (!spec.ok()) return spec.status();
      specs.push_back(*std::move(spec));
    }
    EvaluateOptions options;
    if (o_.partitions) options.partitions = *o_.partitions;
    auto result = Evaluate(ws_->cube(), store, *query, specs, options);
    if (!result.ok()) return result.status();
    for (const std::optional<double>& v : result->values) {
      out_ << FormatOptional(v) << "\n";
    }
    return absl::OkStatus();
  }

  absl::Status Materialize() {
    WHATIF_RETURN_IF_ERROR(Open());
    const ScenarioStore& store = ws_->store();
    auto query = ParseQuery(o_.query, store);
    if (!query.ok()) return query.status();
    auto rows = whatif::Materialize(ws_->cube(), store, *query);
    if (!rows.ok()) return rows.status();
    std::string csv = ExportRows(store, *rows);
    if (o_.out_path.empty()) {
      out_ << csv;
      return absl::OkStatus();
    }
    return WriteFile(o_.out_path, csv);
  }

  absl::Status CompareQueries() {
    WHATIF_RETURN_IF_ERROR(Open());
    const ScenarioStore& store = ws_->store();
    auto first = ParseQuery(o_.query, store);
    if (!first.ok()) return first.status();
    auto second = ParseQuery(o_.second_query, store);
    if (!second.ok()) return second.status();
    auto spec = ParseAggregation(o_.spec, store.schema());
    if (!spec.ok()) return spec.status();
    auto cmp = Compare(ws_->cube(), store, *first, *second, *spec);
    if (!cmp.ok()) return cmp.status();
    out_ << "first " << FormatOptional(cmp->first) << "\n"
         << "second " << FormatOptional(cmp->second) << "\n"
         << "difference " << FormatOptional(cmp->difference) << "\n"
         << "ratio " << FormatOptional(cmp->ratio) << "\n";
    return absl::OkStatus();
  }

  absl::Status StoreSave() {
    WHATIF_RETURN_IF_ERROR(Open());
    std::string doc = SaveStore(ws_->store());
    if (o_.store_path.empty() || o_.store_path == "-") {
      out_ << doc;
      return absl::OkStatus();
    }
    return WriteFile(o_.store_path, doc);
  }

  absl::Status StoreLoad() {
    WHATIF_RETURN_IF_ERROR(Open());
    auto text = ReadFile(o_.store_path);
    if (!text.ok()) return text.status();
    auto store = LoadStore(*text, ws_->cube());
    if (!store.ok()) return store.status();
    WHATIF_RETURN_IF_ERROR(WriteFile(ws_->dir() / kStoreFile, SaveStore(*store)));
    out_ << "loaded " << store->scenarios().size() << " scenarios\n";
    return absl::OkStatus();
  }

 private:
  absl::Status Open() {
    ws_.emplace(o_.workspace);
    return ws_->Open();
  }

  const Options& o_;
  std::ostream& out_;
  std::optional<Workspace> ws_;
};

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"whatif: scenario analysis over an in-memory cube"};
  app.require_subcommand(1);
  app.add_option("-w,--workspace", o.workspace,
                 "Directory holding the cube and scenario store")
      ->envname("WHATIF_WORKSPACE")
      ->capture_default_str();

  CLI::App* load = app.add_subcommand("load", "Load a CSV file as the cube");
  load->add_option("csv", o.csv_path, "CSV file with a header row")->required();
  CLI::Option* manifest =
      load->add_option("-m,--manifest", o.manifest_path, "Manifest JSON file");
  CLI::Option* dims = load->add_option("-d,--dimensions", o.dimensions,
                                       "Dimension columns")
                          ->delimiter(',');
  CLI::Option* meas =
      load->add_option("-M,--measures", o.measures, "Measure columns")
          ->delimiter(',');
  manifest->excludes(dims)->excludes(meas);
  dims->needs(meas);
  meas->needs(dims);

  CLI::App* scenario = app.add_subcommand("scenario", "Manage scenarios");
  scenario->require_subcommand(1);
  CLI::App* create = scenario->add_subcommand("create", "Create a scenario value");
  create->add_option("value", o.target, "New value name")->required();
  create->add_option("-d,--dimension", o.dimension, "Owning dimension")
      ->required();
  CLI::App* add = scenario->add_subcommand(
      "add-query", "Associate a query with a scenario");
  add->add_option("target", o.target, "Scenario value")->required();
  add->add_option("-q,--query", o.query, "Query text")->required();
  add->add_option("-f,--factor", o.factors, "Measure=number (repeatable)");
  CLI::App* rm = scenario->add_subcommand(
      "rm", "Delete a scenario, or one stored entry with --entry");
  rm->add_option("target", o.target, "Scenario value")->required();
  rm->add_option("-e,--entry", o.entry, "Entry index");
  CLI::App* set = scenario->add_subcommand(
      "set-factors", "Replace factors of one stored value query");
  set->add_option("target", o.target, "Scenario value")->required();
  set->add_option("-e,--entry", o.entry, "Entry index")->required();
  set->add_option("-v,--value", o.value_index, "Value index")
      ->capture_default_str();
  set->add_option("-f,--factor", o.factors, "Measure=number (repeatable)")
      ->required();
  CLI::App* list = scenario->add_subcommand("list", "Print stored scenarios");
  list->add_option("target", o.target, "Only this scenario");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate aggregates");
  eval->add_option("-q,--query", o.query, "Query text")->required();
  eval->add_option("-a,--aggregate", o.specs, "fn:expr (repeatable)")
      ->required();
  eval->add_option("-p,--partitions", o.partitions, "Scan partitions");

  CLI::App* mat = app.add_subcommand("materialize", "Write matching rows as CSV");
  mat->add_option("-q,--query", o.query, "Query text")->required();
  mat->add_option("-o,--out", o.out_path, "Output file (default stdout)");

  CLI::App* cmp = app.add_subcommand("compare", "Compare two queries");
  cmp->add_option("--first", o.query, "First query")->required();
  cmp->add_option("--second", o.second_query, "Second query")->required();
  cmp->add_option("-a,--aggregate", o.spec, "fn:expr")->required();

  CLI::App* store = app.add_subcommand("store", "Save or load the scenario store");
  store->require_subcommand(1);
  CLI::App* save = store->add_subcommand("save", "Write the store document");
  save->add_option("file", o.store_path, "Output file (default stdout)");
  CLI::App* restore = store->add_subcommand("load", "Replace the store");
  restore->add_option("file", o.store_path, "Store document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (load->parsed() && o.manifest_path.empty() && o.dimensions.empty()) {
    err << "load: pass --manifest or --dimensions with --measures\n";
    return kExitUsage;
  }

  Commands commands(o, out);
  absl::Status status;
  if (load->parsed()) {
    status = commands.Load();
  } else if (create->parsed()) {
    status = commands.ScenarioCreate();
  } else if (add->parsed()) {
    status = commands.ScenarioAddQuery();
  } else if (rm->parsed()) {
    status = commands.ScenarioRemove();
  } else if (set->parsed()) {
    status = commands.ScenarioSetFactors();
  } else if (list->parsed()) {
    status = commands.ScenarioList();
  } else if (eval->parsed()) {
    status = commands.Eval();
  } else if (mat->parsed()) {
    status = commands.Materialize();
  } else if (cmp->parsed()) {
    status = commands.CompareQueries();
  } else if (save->parsed()) {
    status = commands.StoreSave();
  } else if (restore->parsed()) {
    status = commands.StoreLoad();
  }
  if (!status.ok()) {
    err << "error: " << ErrorCodeName(status) << ": " << status.message()
        << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace whatif::cli
