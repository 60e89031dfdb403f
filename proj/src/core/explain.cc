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

#include "core/explain.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "core/error.h"
#include "httplib.h"
#include "json.hpp"

namespace conffuzz {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return lines;
}

std::vector<std::string> Tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string token; in >> token;) out.push_back(std::move(token));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// "-s" is a flag, "-11" and "-.5" are values.
bool IsFlag(std::string_view token) {
  return token.size() >= 2 && token[0] == '-' &&
         !std::isdigit(static_cast<unsigned char>(token[1])) && token[1] != '.';
}

bool HasTestPrefix(std::string_view line) {
  constexpr std::string_view kPrefix = "test:";
  if (line.size() < kPrefix.size()) return false;
  for (size_t i = 0; i < kPrefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) != kPrefix[i]) {
      return false;
    }
  }
  return true;
}

bool IsSourceFile(const fs::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".c" || ext == ".h" || ext == ".cc" || ext == ".cpp";
}

std::string RegexEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::strchr("\\^$.|?*+()[]{}", c) != nullptr) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::vector<TestCaseRecord> ParseTestLog(std::string_view text) {
  constexpr std::string_view kSeparator = " :: ";
  std::vector<TestCaseRecord> tests;
  const std::vector<std::string_view> lines = Lines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (!HasTestPrefix(line)) continue;
    const size_t sep = line.find(kSeparator);
    if (sep == std::string_view::npos) continue;

    TestCaseRecord record;
    record.name = std::string(Trim(line.substr(5, sep - 5)));
    const std::vector<std::string> tokens =
        Tokens(line.substr(sep + kSeparator.size()));
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (!IsFlag(tokens[i])) {
        throw Error(ErrorCode::kMalformedTestLine,
                    "line " + std::to_string(n + 1) + ": expected a flag, got '" +
                        tokens[i] + "'");
      }
      std::string flag = tokens[i].substr(1);
      if (i + 1 < tokens.size() && !IsFlag(tokens[i + 1])) {
        record.args.emplace_back(std::move(flag), tokens[++i]);
      } else {
        record.args.emplace_back(std::move(flag), "1");
      }
    }
    tests.push_back(std::move(record));
  }
  return tests;
}

std::vector<std::string> GetParamRange(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  std::set<std::string_view> seen;
  for (const std::string& v : values) {
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

std::vector<ParamRange> ExtractUniqueParams(
    const std::vector<TestCaseRecord>& tests) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> occurrences;
  for (const TestCaseRecord& test : tests) {
    for (const auto& [flag, value] : test.args) {
      auto [it, inserted] = occurrences.try_emplace(flag);
      if (inserted) order.push_back(flag);
      it->second.push_back(value);
    }
  }
  std::vector<ParamRange> out;
  for (const std::string& flag : order) {
    out.push_back({flag, GetParamRange(occurrences[flag])});
  }
  return out;
}

SourceIndex::SourceIndex(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIoError,
                "source root is not a directory: " + root.string());
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(root, ec), end;
  if (ec) throw Error(ErrorCode::kIoError, "cannot scan " + root.string());
  for (; it != end; it.increment(ec)) {
    if (ec) throw Error(ErrorCode::kIoError, "cannot scan " + root.string());
    if (it->is_regular_file() && IsSourceFile(it->path())) {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) contents_.push_back(ReadFile(file));
}

std::optional<SourceMatch> SourceIndex::Find(std::string_view flag) const {
  if (flag.empty()) return std::nullopt;
  const std::regex arm("case\\s*'" + RegexEscape(flag) + "'\\s*:");
  static const std::regex arm_end("\\bbreak\\b|\\bcase\\b|\\bdefault\\b");
  static const std::regex assignment(
      "([A-Za-z_][A-Za-z0-9_]*)\\s*(?:\\[[^\\]]*\\])?\\s*"
      "(?:<<|>>|[-+*/%&|^])?=(?!=)");

  for (const std::string& text : contents_) {
    for (auto m = std::sregex_iterator(text.begin(), text.end(), arm);
         m != std::sregex_iterator(); ++m) {
      const size_t body_begin = m->position(0) + m->length(0);
      std::smatch stop;
      size_t body_end = text.size();
      size_t arm_close = text.size();
      if (std::regex_search(text.begin() + body_begin, text.end(), stop,
                            arm_end)) {
        body_end = body_begin + stop.position(0);
        arm_close = body_end;
        if (stop.str(0) == "break") {
          arm_close = text.find(';', body_end);
          arm_close = arm_close == std::string::npos ? text.size()
                                                     : arm_close + 1;
        }
      }
      std::smatch target;
      if (!std::regex_search(text.begin() + body_begin,
                             text.begin() + body_end, target, assignment)) {
        continue;
      }
      std::string context =
          text.substr(m->position(0), arm_close - m->position(0));
      if (context.size() > kMaxContextSnippet) {
        context.resize(kMaxContextSnippet);
      }
      return SourceMatch{target.str(1), std::move(context)};
    }
  }
  return std::nullopt;
}

std::string FindParamName(std::string_view flag, const fs::path& source_root) {
  const std::optional<SourceMatch> match = SourceIndex(source_root).Find(flag);
  return match ? match->var_name : std::string(kUnknownVar);
}

GlossaryBackend GlossaryBackend::FromText(std::string_view text) {
  GlossaryBackend backend;
  for (std::string_view line : Lines(text)) {
    if (Trim(line).empty() || line.front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) continue;
    backend.entries_.emplace(std::string(Trim(line.substr(0, tab))),
                             std::string(Trim(line.substr(tab + 1))));
  }
  return backend;
}

GlossaryBackend GlossaryBackend::Load(const fs::path& path) {
  return FromText(ReadFile(path));
}

std::string GlossaryBackend::Explain(std::string_view var_name,
                                     std::string_view /*context*/) {
  auto it = entries_.find(var_name);
  return it == entries_.end() ? std::string(kNoGlossaryEntry) : it->second;
}

HttpLlmBackend::HttpLlmBackend(std::string url) {
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos ||
      (url.compare(0, scheme_end, "http") != 0 &&
       url.compare(0, scheme_end, "https") != 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "backend URL must be http:// or https://, got '" + url + "'");
  }
  const size_t path_begin = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : url.substr(path_begin);
  if (const char* token = std::getenv(std::string(kLlmTokenEnv).c_str())) {
    token_ = token;
  }
}

std::string HttpLlmBackend::Prompt(std::string_view var_name,
                                   std::string_view context) {
  std::string prompt = "Explain the variable ";
  prompt += var_name;
  prompt += " in the context of 5G gNB software: ";
  prompt += context;
  return prompt;
}

std::string HttpLlmBackend::Explain(std::string_view var_name,
                                    std::string_view context) {
  httplib::Client client(base_);
  client.set_connection_timeout(kLlmTimeoutSeconds, 0);
  client.set_read_timeout(kLlmTimeoutSeconds, 0);
  client.set_write_timeout(kLlmTimeoutSeconds, 0);
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  const nlohmann::json body = {{"prompt", Prompt(var_name, context)}};
  const httplib::Result res =
      client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendError,
                "request to " + base_ + path_ +
                    " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::kBackendError,
                "backend returned HTTP " + std::to_string(res->status));
  }
  try {
    const nlohmann::json reply = nlohmann::json::parse(res->body);
    std::string text;
    if (reply.contains("text")) {
      text = reply.at("text").get<std::string>();
    } else {
      text = reply.at("choices").at(0).at("message").at("content")
                 .get<std::string>();
    }
    // Report lines are single-line.
    std::replace(text.begin(), text.end(), '\n', ' ');
    return std::string(Trim(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendError,
                std::string("malformed backend response: ") + e.what());
  }
}

std::unique_ptr<ExplanationBackend> MakeBackend(std::string_view spec) {
  constexpr std::string_view kGlossary = "glossary:";
  if (spec.starts_with(kGlossary)) {
    return std::make_unique<GlossaryBackend>(
        GlossaryBackend::Load(fs::path(spec.substr(kGlossary.size()))));
  }
  if (spec.starts_with("http://") || spec.starts_with("https://")) {
    return std::make_unique<HttpLlmBackend>(std::string(spec));
  }
  if (spec.starts_with("http:")) {
    return std::make_unique<HttpLlmBackend>(std::string(spec.substr(5)));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "backend must be glossary:<file> or http:<url>, got '" +
                  std::string(spec) + "'");
}

ExplainResult ExplainParams(const std::vector<ParamRange>& params,
                            ExplanationBackend& backend,
                            const fs::path& source_root) {
  const SourceIndex index(source_root);
  ExplainResult result;
  std::map<std::string, std::string> memo;
  for (const ParamRange& param : params) {
    ParamInfo info{param.flag, std::string(kUnknownVar), param.values,
                   std::string(kNoSourceMatch)};
    if (const std::optional<SourceMatch> match = index.Find(param.flag)) {
      info.var_name = match->var_name;
      auto it = memo.find(match->var_name);
      if (it == memo.end()) {
        try {
          ++result.backend_calls;
          it = memo.emplace(match->var_name,
                            backend.Explain(match->var_name, match->context))
                   .first;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kBackendError) throw;
          result.backend_error = e.what();
          return result;
        }
      }
      info.meaning = it->second;
    }
    result.infos.push_back(std::move(info));
  }
  return result;
}

std::string WriteReport(const ExplainResult& result, size_t test_count) {
  std::string out = "[tests] " + std::to_string(test_count) + "\n";
  for (const ParamInfo& info : result.infos) {
    out += "- " + info.flag + " (" + info.var_name + ") -> " + info.meaning +
           " ; range = {";
    for (size_t i = 0; i < info.range.size(); ++i) {
      if (i > 0) out += ", ";
      out += info.range[i];
    }
    out += "}\n";
  }
  if (result.backend_error) out += "[partial] " + *result.backend_error + "\n";
  return out;
}

ExplainResult ExplainLog(std::string_view log_text,
                         ExplanationBackend& backend,
                         const fs::path& source_root, size_t* test_count) {
  const std::vector<TestCaseRecord> tests = ParseTestLog(log_text);
  if (test_count != nullptr) *test_count = tests.size();
  return ExplainParams(ExtractUniqueParams(tests), backend, source_root);
}

}  // namespace conffuzz
