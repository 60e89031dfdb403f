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

// Runs a fuzz target on one candidate configuration and classifies what
// happened. Builtin targets run in-process and report branch coverage
// directly; external targets are spawned as child processes under a
// wall-clock timeout and may report coverage by writing `##branch:<id>` lines
// to stderr.

#ifndef CONFFUZZ_CORE_TARGET_H_
#define CONFFUZZ_CORE_TARGET_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace conffuzz {

inline constexpr uint32_t kDefaultTimeoutMs = 10000;
inline constexpr size_t kMaxStderrExcerpt = 4096;
inline constexpr std::string_view kBranchLinePrefix = "##branch:";

enum class OutcomeClass { kOk, kReject, kCrash, kTimeout };

std::string_view OutcomeClassName(OutcomeClass cls);

struct ExecOutcome {
  OutcomeClass cls = OutcomeClass::kOk;
  // Exit code for kReject (never 0); signal number or abort id for kCrash.
  int code = 0;
  std::string stderr_excerpt;

  bool operator==(const ExecOutcome&) const = default;
};

struct Feedback {
  std::set<std::string> branches;

  // FNV-1a over the sorted branch identifiers.
  uint64_t digest() const;
  bool operator==(const Feedback&) const = default;
};

struct ExecResult {
  ExecOutcome outcome;
  Feedback feedback;
};

struct TargetSpec {
  enum class Kind { kBuiltin, kExternal };

  Kind kind = Kind::kBuiltin;
  // Builtin target name, or the external command template. The template is
  // split on whitespace (single and double quotes group words) and must
  // contain `{input}` exactly once.
  std::string command;
  uint32_t timeout_ms = kDefaultTimeoutMs;

  // `builtin:<name>` or `exec:<command template>`. Throws kInvalidArgument.
  static TargetSpec Parse(std::string_view spec,
                          uint32_t timeout_ms = kDefaultTimeoutMs);
  static TargetSpec Builtin(std::string name,
                            uint32_t timeout_ms = kDefaultTimeoutMs);
  static TargetSpec External(std::string command_template,
                             uint32_t timeout_ms = kDefaultTimeoutMs);

  // Throws kInvalidArgument when an invariant does not hold.
  void Validate() const;
  std::string ToString() const;
};

// Where external inputs are staged: `<tmpdir>/<campaign_id>/<exec_seq>.conf`.
struct ExecContext {
  std::string campaign_id;
  uint64_t exec_seq = 0;
};

struct RawStatus {
  enum class State { kExited, kSignaled, kRunning };
  State state = State::kExited;
  int value = 0;  // exit code or signal number
  int64_t elapsed_ms = 0;
};

// Exit 0 is Ok, a nonzero exit is Reject, a signal is Crash, and a process
// still running or finishing past `timeout_ms` is Timeout.
ExecOutcome ClassifyOutcome(const RawStatus& status, uint32_t timeout_ms);

// Names accepted by `builtin:<name>`.
std::vector<std::string> BuiltinTargetNames();

// Throws kSpawnFailure when an external command cannot be started, and
// kInvalidArgument for an unknown builtin.
ExecResult Execute(const TargetSpec& spec, std::string_view input);
ExecResult Execute(const TargetSpec& spec, std::string_view input,
                   const ExecContext& context);

// Splits a command template into words; exposed for tests.
std::vector<std::string> SplitCommand(std::string_view command);

// Root directory for staged inputs: $CONFFUZZ_TMPDIR, else
// <system temp>/conffuzz.
std::string StagingRoot();

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_TARGET_H_
