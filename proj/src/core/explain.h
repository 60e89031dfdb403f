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

// Parameter documentation from test logs.
//
// Test log lines look like
//
//   test: nr_pbchsim.def :: -s 2 -S 5 -n 10
//
// Every distinct flag is collected with its observed values, mapped to the
// variable its command-line switch arm assigns in a C-family source tree,
// and described by an ExplanationBackend. The report has one line per flag:
//
//   [tests] 7
//   - s (snr0) -> starting SNR in dB ; range = {2, 5}

#ifndef CONFFUZZ_CORE_EXPLAIN_H_
#define CONFFUZZ_CORE_EXPLAIN_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conffuzz {

struct TestCaseRecord {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;  // (flag, value)
};

// Throws kMalformedTestLine naming the 1-based line number.
std::vector<TestCaseRecord> ParseTestLog(std::string_view text);

// Values deduplicated in first-seen order.
std::vector<std::string> GetParamRange(const std::vector<std::string>& values);

struct ParamRange {
  std::string flag;
  std::vector<std::string> values;
};

// One entry per flag across all tests, in order of first appearance.
std::vector<ParamRange> ExtractUniqueParams(
    const std::vector<TestCaseRecord>& tests);

inline constexpr std::string_view kUnknownVar = "UNKNOWN";
inline constexpr std::string_view kNoSourceMatch = "(no source match)";
inline constexpr size_t kMaxContextSnippet = 500;

struct SourceMatch {
  std::string var_name;
  std::string context;  // the switch arm, at most kMaxContextSnippet bytes
};

// Finds `case '<flag>':` arms in .c/.h/.cc/.cpp files under a root, scanned
// in lexicographic path order. Files are read once.
class SourceIndex {
 public:
  // Throws kIoError if `root` is not a readable directory.
  explicit SourceIndex(const std::filesystem::path& root);

  // nullopt when no arm matches or the arm assigns nothing.
  std::optional<SourceMatch> Find(std::string_view flag) const;

 private:
  std::vector<std::string> contents_;
};

// Returns the variable name, or kUnknownVar.
std::string FindParamName(std::string_view flag,
                          const std::filesystem::path& source_root);

class ExplanationBackend {
 public:
  virtual ~ExplanationBackend() = default;
  // Throws kBackendError; never invents text on failure.
  virtual std::string Explain(std::string_view var_name,
                              std::string_view context) = 0;
};

inline constexpr std::string_view kNoGlossaryEntry = "(no glossary entry)";

// `key<TAB>meaning` per line; blank lines and lines starting with '#' are
// skipped. Unknown keys explain as kNoGlossaryEntry.
class GlossaryBackend : public ExplanationBackend {
 public:
  static GlossaryBackend FromText(std::string_view text);
  static GlossaryBackend Load(const std::filesystem::path& path);

  std::string Explain(std::string_view var_name,
                      std::string_view context) override;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

inline constexpr std::string_view kLlmTokenEnv = "CONFFUZZ_LLM_TOKEN";
inline constexpr int kLlmTimeoutSeconds = 30;

// POSTs {"prompt": ...} as JSON to `url` with a bearer token taken from
// CONFFUZZ_LLM_TOKEN (when set). Accepts {"text": ...} or an OpenAI-style
// {"choices": [{"message": {"content": ...}}]} response. No retries.
class HttpLlmBackend : public ExplanationBackend {
 public:
  explicit HttpLlmBackend(std::string url);

  static std::string Prompt(std::string_view var_name,
                            std::string_view context);

  std::string Explain(std::string_view var_name,
                      std::string_view context) override;

 private:
  std::string base_;
  std::string path_;
  std::string token_;
};

// "glossary:<file>" or "http:<url>" (a bare http:// or https:// URL also
// works). Throws kInvalidArgument.
std::unique_ptr<ExplanationBackend> MakeBackend(std::string_view spec);

struct ParamInfo {
  std::string flag;
  std::string var_name;
  std::vector<std::string> range;
  std::string meaning;
};

struct ExplainResult {
  std::vector<ParamInfo> infos;
  // Set when a backend error cut the run short; `infos` holds the params
  // explained before it.
  std::optional<std::string> backend_error;
  size_t backend_calls = 0;
};

// Calls the backend at most once per distinct resolved variable name.
ExplainResult ExplainParams(const std::vector<ParamRange>& params,
                            ExplanationBackend& backend,
                            const std::filesystem::path& source_root);

// `[tests] <n>` then one line per param; a partial result ends with a
// `[partial] <error>` line.
std::string WriteReport(const ExplainResult& result, size_t test_count);

// Whole pipeline over log text.
ExplainResult ExplainLog(std::string_view log_text,
                         ExplanationBackend& backend,
                         const std::filesystem::path& source_root,
                         size_t* test_count);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_EXPLAIN_H_
