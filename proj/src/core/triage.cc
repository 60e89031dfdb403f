// Copyright 2026 The conffuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/triage.h"

#include <unistd.h>

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

#include "core/error.h"
#include "core/hash.h"
#include "json.hpp"

namespace conffuzz {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

using NodePath = std::vector<size_t>;

std::vector<NodePath> BreadthFirstPaths(const DerivationTree& tree) {
  std::vector<NodePath> out;
  std::deque<std::pair<const DerivationTree*, NodePath>> queue;
  queue.emplace_back(&tree, NodePath{});
  while (!queue.empty()) {
    auto [node, path] = std::move(queue.front());
    queue.pop_front();
    for (size_t i = 0; i < node->children.size(); ++i) {
      NodePath child = path;
      child.push_back(i);
      queue.emplace_back(&node->children[i], std::move(child));
    }
    out.push_back(std::move(path));
  }
  return out;
}

DerivationTree& NodeAt(DerivationTree& tree, const NodePath& path) {
  DerivationTree* node = &tree;
  for (size_t i : path) node = &node->children[i];
  return *node;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void WriteFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string CellText(const std::optional<Scalar>& value) {
  return value ? value->ToString() : std::string(kMissingCell);
}

OutcomeClass OutcomeClassFromName(std::string_view name) {
  for (OutcomeClass cls : {OutcomeClass::kOk, OutcomeClass::kReject,
                           OutcomeClass::kCrash, OutcomeClass::kTimeout}) {
    if (OutcomeClassName(cls) == name) return cls;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown outcome class '" + std::string(name) + "'");
}

std::string RowLabel(const ParamPath& path) {
  for (auto it = path.segments().rbegin(); it != path.segments().rend(); ++it) {
    if (const auto* name = std::get_if<std::string>(&*it)) return *name;
  }
  return path.ToString();
}

}  // namespace

std::string DedupKey(const ExecOutcome& outcome, const Feedback& feedback) {
  if (outcome.cls != OutcomeClass::kCrash) {
    throw Error(ErrorCode::kNotACrash,
                "dedup keys exist only for crashes, got " +
                    std::string(OutcomeClassName(outcome.cls)));
  }
  Fnv1a64 hash;
  hash.UpdateU64(static_cast<uint64_t>(static_cast<int64_t>(outcome.code)));
  hash.UpdateU64(feedback.digest());
  return Hex16(hash.digest());
}

MinimizeResult Minimize(const DerivationTree& tree, const Grammar& grammar,
                        const TargetSpec& target, std::string_view key) {
  MinimizeResult result{tree, 0};
  const std::string campaign_id = "minimize-" + std::to_string(::getpid());
  auto reproduces = [&](const DerivationTree& candidate) {
    const ExecResult r =
        Execute(target, Unparse(candidate, grammar),
                ExecContext{campaign_id, result.executions++});
    return r.outcome.cls == OutcomeClass::kCrash &&
           DedupKey(r.outcome, r.feedback) == key;
  };

  if (!reproduces(tree)) {
    throw Error(ErrorCode::kNonReproducible,
                "input does not reproduce crash " + std::string(key));
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<NodePath> paths = BreadthFirstPaths(result.tree);
    for (size_t i = 0; i < paths.size(); ++i) {
      const DerivationTree& node = NodeAt(result.tree, paths[i]);
      DerivationTree minimal = MinimalTree(grammar, node.token);
      if (node == minimal) continue;

      DerivationTree candidate = result.tree;
      NodeAt(candidate, paths[i]) = std::move(minimal);
      if (TreeSize(candidate) > TreeSize(result.tree)) continue;
      if (!reproduces(candidate)) continue;

      result.tree = std::move(candidate);
      changed = true;
      paths = BreadthFirstPaths(result.tree);
    }
  }
  return result;
}

bool CrashStore::Add(CrashReport report) {
  if (Contains(report.dedup_key)) return false;
  index_.emplace(report.dedup_key, reports_.size());
  reports_.push_back(std::move(report));
  return true;
}

void CrashStore::Persist(const fs::path& dir) const {
  for (const CrashReport& report : reports_) PersistReport(report, dir);
}

void CrashStore::PersistReport(const CrashReport& report,
                               const fs::path& dir) {
  const fs::path crash_dir = dir / report.dedup_key;
  std::error_code ec;
  fs::create_directories(crash_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create " + crash_dir.string());
  }
  WriteFile(crash_dir / "input.conf", report.input_text);
  WriteFile(crash_dir / "minimized.conf", report.minimized_text);

  Json diff = Json::array();
  for (const ParamDiff& d : report.param_diff) {
    diff.push_back({{"path", d.path.ToString()},
                    {"initial", CellText(d.before)},
                    {"crash", CellText(d.after)}});
  }
  Json doc = {
      {"dedup_key", report.dedup_key},
      {"outcome",
       {{"class", OutcomeClassName(report.outcome.cls)},
        {"code", report.outcome.code},
        {"stderr_excerpt", report.outcome.stderr_excerpt}}},
      {"first_seen_exec", report.first_seen_exec},
      {"tree_size", report.tree_size},
      {"minimized_tree_size", report.minimized_tree_size},
      {"param_diff", std::move(diff)},
  };
  WriteFile(crash_dir / "report.json", doc.dump(2) + "\n");
}

CrashStore CrashStore::Load(const fs::path& dir,
                            const ConfigDocument& baseline) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, "no crash directory " + dir.string());
  }
  std::vector<CrashReport> loaded;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    const fs::path report_path = entry.path() / "report.json";
    if (!fs::exists(report_path)) continue;

    Json doc;
    try {
      doc = Json::parse(ReadFile(report_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedJson,
                  report_path.string() + ": " + e.what());
    }
    CrashReport report;
    try {
      report.dedup_key = doc.at("dedup_key").get<std::string>();
      const Json& outcome = doc.at("outcome");
      report.outcome.cls =
          OutcomeClassFromName(outcome.at("class").get<std::string>());
      report.outcome.code = outcome.at("code").get<int>();
      report.outcome.stderr_excerpt =
          outcome.value("stderr_excerpt", std::string());
      report.first_seen_exec = doc.at("first_seen_exec").get<uint64_t>();
      report.tree_size = doc.value("tree_size", size_t{0});
      report.minimized_tree_size = doc.value("minimized_tree_size", size_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedJson,
                  report_path.string() + ": " + e.what());
    }
    report.input_text = ReadFile(entry.path() / "input.conf");
    if (fs::exists(entry.path() / "minimized.conf")) {
      report.minimized_text = ReadFile(entry.path() / "minimized.conf");
    }
    try {
      report.param_diff = DiffParams(baseline, ParseConfig(report.input_text));
    } catch (const Error&) {
      // Unparseable inputs have no parameter view.
    }
    loaded.push_back(std::move(report));
  }
  std::sort(loaded.begin(), loaded.end(),
            [](const CrashReport& a, const CrashReport& b) {
              return std::tie(a.first_seen_exec, a.dedup_key) <
                     std::tie(b.first_seen_exec, b.dedup_key);
            });
  CrashStore store;
  for (CrashReport& report : loaded) store.Add(std::move(report));
  return store;
}

ParamTable ExtractParamTable(const std::vector<CrashReport>& reports,
                             const std::vector<ParamPath>& watch,
                             const ConfigDocument& baseline) {
  ParamTable table;
  table.paths = watch;

  auto column_for = [&](std::string name, const ConfigDocument* doc) {
    ParamTable::Column column{std::move(name), {}};
    for (const ParamPath& path : watch) {
      column.values.push_back(doc ? CellText(FindParam(*doc, path))
                                  : std::string(kMissingCell));
    }
    return column;
  };

  table.columns.push_back(column_for("initial", &baseline));
  for (const CrashReport& report : reports) {
    std::optional<ConfigDocument> doc;
    try {
      doc = ParseConfig(report.input_text);
    } catch (const Error&) {
    }
    table.columns.push_back(
        column_for(report.label.empty() ? report.dedup_key : report.label,
                   doc ? &*doc : nullptr));
  }
  return table;
}

std::string RenderReport(const ParamTable& table, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    Json paths = Json::array();
    for (const ParamPath& p : table.paths) paths.push_back(p.ToString());
    Json columns = Json::array();
    for (const ParamTable::Column& c : table.columns) {
      columns.push_back({{"name", c.name}, {"values", c.values}});
    }
    Json doc = {{"paths", std::move(paths)}, {"columns", std::move(columns)}};
    return doc.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header = {"parameter"};
  for (const ParamTable::Column& c : table.columns) header.push_back(c.name);
  grid.push_back(std::move(header));
  for (size_t row = 0; row < table.paths.size(); ++row) {
    std::vector<std::string> line = {RowLabel(table.paths[row])};
    for (const ParamTable::Column& c : table.columns) {
      line.push_back(c.values[row]);
    }
    grid.push_back(std::move(line));
  }

  std::vector<size_t> widths(grid.front().size(), 0);
  for (const auto& line : grid) {
    for (size_t i = 0; i < line.size(); ++i) {
      widths[i] = std::max(widths[i], line[i].size());
    }
  }
  std::string out;
  for (const auto& line : grid) {
    std::string text;
    for (size_t i = 0; i < line.size(); ++i) {
      if (i > 0) text += "  ";
      text += line[i];
      if (i + 1 < line.size()) text.append(widths[i] - line[i].size(), ' ');
    }
    out += text;
    out += '\n';
  }
  return out;
}

}  // namespace conffuzz
