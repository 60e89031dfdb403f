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

// Crash deduplication, tree minimization, and parameter-table reports.
//
// On-disk layout of a crash store:
//
//   <dir>/<dedup_key>/input.conf
//   <dir>/<dedup_key>/minimized.conf
//   <dir>/<dedup_key>/report.json

#ifndef CONFFUZZ_CORE_TRIAGE_H_
#define CONFFUZZ_CORE_TRIAGE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/config.h"
#include "core/grammar.h"
#include "core/target.h"

namespace conffuzz {

struct CrashReport {
  std::string dedup_key;
  ExecOutcome outcome;
  std::string input_text;
  std::string minimized_text;
  // Against the baseline configuration.
  std::vector<ParamDiff> param_diff;
  uint64_t first_seen_exec = 0;
  size_t tree_size = 0;
  size_t minimized_tree_size = 0;
  // Column heading in parameter tables; the dedup key when empty.
  std::string label;
};

// 16 lowercase hex digits identifying (crash id, coverage digest). Throws
// kNotACrash for any other outcome class.
std::string DedupKey(const ExecOutcome& outcome, const Feedback& feedback);

struct MinimizeResult {
  DerivationTree tree;
  uint64_t executions = 0;
};

// Greedy fixpoint: visits nodes breadth-first and replaces each by its
// token's minimal derivation whenever the dedup key survives. Throws
// kNonReproducible if `tree` does not reproduce `key` to begin with.
MinimizeResult Minimize(const DerivationTree& tree, const Grammar& grammar,
                        const TargetSpec& target, std::string_view key);

// Deduplicated crash reports in first-seen order. Single writer.
class CrashStore {
 public:
  bool Contains(std::string_view key) const {
    return index_.contains(std::string(key));
  }
  // Returns false, leaving the store unchanged, if the key is already known.
  bool Add(CrashReport report);

  const std::vector<CrashReport>& reports() const { return reports_; }
  size_t size() const { return reports_.size(); }

  // Writes `<dir>/<key>/...` for every report.
  void Persist(const std::filesystem::path& dir) const;
  static void PersistReport(const CrashReport& report,
                            const std::filesystem::path& dir);
  // Reads a persisted store; param_diff is recomputed against `baseline`.
  static CrashStore Load(const std::filesystem::path& dir,
                         const ConfigDocument& baseline);

 private:
  std::vector<CrashReport> reports_;
  std::map<std::string, size_t> index_;
};

struct ParamTable {
  struct Column {
    std::string name;
    std::vector<std::string> values;  // one per path; "-" when absent
  };
  std::vector<ParamPath> paths;
  std::vector<Column> columns;
};

inline constexpr std::string_view kMissingCell = "-";

// Rows are `watch`; the first column is `baseline` ("initial"), then one
// column per report taken from its input text.
ParamTable ExtractParamTable(const std::vector<CrashReport>& reports,
                             const std::vector<ParamPath>& watch,
                             const ConfigDocument& baseline);

enum class ReportFormat { kText, kJson };

// Text: an aligned grid headed by the column names. JSON:
// {"paths": [...], "columns": [{"name": ..., "values": [...]}, ...]}.
std::string RenderReport(const ParamTable& table, ReportFormat format);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_TRIAGE_H_
