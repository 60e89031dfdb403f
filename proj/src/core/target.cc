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

#include "core/target.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "core/error.h"
#include "core/gnb_validator.h"
#include "core/hash.h"

extern char** environ;

namespace conffuzz {
namespace {

constexpr std::string_view kInputPlaceholder = "{input}";

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  size_t count = 0;
  for (size_t at = haystack.find(needle); at != std::string_view::npos;
       at = haystack.find(needle, at + needle.size())) {
    ++count;
  }
  return count;
}

// Owns a file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { Reset(); }

  int get() const { return fd_; }
  void Reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

// Removes the staged input file and its (possibly empty) campaign directory
// entry on scope exit.
class StagedInput {
 public:
  StagedInput(const ExecContext& context, std::string_view input) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(StagingRoot()) / context.campaign_id;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      throw Error(ErrorCode::kIoError,
                  "cannot create staging directory " + dir.string());
    }
    path_ = (dir / (std::to_string(context.exec_seq) + ".conf")).string();
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out.write(input.data(), static_cast<std::streamsize>(input.size()));
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path_);
  }
  ~StagedInput() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Splits child stderr into `##branch:` feedback and a bounded excerpt of
// everything else.
class StderrCollector {
 public:
  explicit StderrCollector(Feedback& feedback) : feedback_(feedback) {}

  void Consume(std::string_view chunk) {
    pending_.append(chunk);
    size_t newline;
    while ((newline = pending_.find('\n')) != std::string::npos) {
      Line(std::string_view(pending_).substr(0, newline));
      pending_.erase(0, newline + 1);
    }
  }
  void Finish() {
    if (!pending_.empty()) Line(pending_);
    pending_.clear();
  }
  std::string excerpt() const { return excerpt_; }

 private:
  void Line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.starts_with(kBranchLinePrefix)) {
      line.remove_prefix(kBranchLinePrefix.size());
      if (!line.empty()) feedback_.branches.emplace(line);
      return;
    }
    if (excerpt_.size() >= kMaxStderrExcerpt) return;
    excerpt_.append(line.substr(0, kMaxStderrExcerpt - excerpt_.size()));
    if (excerpt_.size() < kMaxStderrExcerpt) excerpt_ += '\n';
  }

  Feedback& feedback_;
  std::string pending_;
  std::string excerpt_;
};

ExecResult ExecuteExternal(const TargetSpec& spec, std::string_view input,
                           const ExecContext& context) {
  const StagedInput staged(context, input);

  std::vector<std::string> argv_storage = SplitCommand(spec.command);
  for (std::string& arg : argv_storage) {
    if (size_t at = arg.find(kInputPlaceholder); at != std::string::npos) {
      arg.replace(at, kInputPlaceholder.size(), staged.path());
    }
  }
  std::vector<char*> argv;
  for (std::string& arg : argv_storage) argv.push_back(arg.data());
  argv.push_back(nullptr);

  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kSpawnFailure,
                std::string("pipe: ") + std::strerror(errno));
  }
  Fd read_end(pipe_fds[0]);
  Fd write_end(pipe_fds[1]);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, write_end.get(), 2);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const auto started = std::chrono::steady_clock::now();
  const auto deadline = started + std::chrono::milliseconds(spec.timeout_ms);
  pid_t pid = -1;
  const int spawn_error =
      ::posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (spawn_error != 0) {
    throw Error(ErrorCode::kSpawnFailure,
                "cannot run '" + argv_storage[0] +
                    "': " + std::strerror(spawn_error));
  }
  write_end.Reset();

  ExecResult result;
  StderrCollector collector(result.feedback);
  auto remaining_ms = [&] {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    return std::max<int64_t>(0, left.count());
  };

  // Drain stderr until EOF or the deadline.
  char buf[4096];
  bool open = true;
  while (open && remaining_ms() > 0) {
    pollfd pfd{read_end.get(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining_ms()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) break;
    const ssize_t n = ::read(read_end.get(), buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      open = false;
      break;
    }
    collector.Consume(std::string_view(buf, static_cast<size_t>(n)));
  }

  RawStatus raw{RawStatus::State::kRunning, 0, 0};
  while (true) {
    int status = 0;
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      if (WIFEXITED(status)) {
        raw.state = RawStatus::State::kExited;
        raw.value = WEXITSTATUS(status);
      } else {
        raw.state = RawStatus::State::kSignaled;
        raw.value = WTERMSIG(status);
      }
      break;
    }
    if (done < 0 && errno != EINTR) break;
    if (remaining_ms() <= 0) {
      // Kill the whole process group so no grandchild outlives the timeout.
      ::kill(-pid, SIGKILL);
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      raw.state = RawStatus::State::kRunning;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  raw.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  if (raw.state != RawStatus::State::kRunning) {
    // Pick up anything written between the last poll and exit.
    ::fcntl(read_end.get(), F_SETFL, O_NONBLOCK);
    ssize_t n;
    while ((n = ::read(read_end.get(), buf, sizeof(buf))) > 0) {
      collector.Consume(std::string_view(buf, static_cast<size_t>(n)));
    }
  }
  collector.Finish();

  result.outcome = ClassifyOutcome(raw, spec.timeout_ms);
  if (result.outcome.cls == OutcomeClass::kTimeout) {
    // A grandchild may still hold the group alive after the child exited.
    ::kill(-pid, SIGKILL);
  }
  result.outcome.stderr_excerpt = collector.excerpt();
  return result;
}

}  // namespace

std::string_view OutcomeClassName(OutcomeClass cls) {
  switch (cls) {
    case OutcomeClass::kOk: return "ok";
    case OutcomeClass::kReject: return "reject";
    case OutcomeClass::kCrash: return "crash";
    case OutcomeClass::kTimeout: return "timeout";
  }
  return "unknown";
}

uint64_t Feedback::digest() const {
  Fnv1a64 hash;
  for (const std::string& branch : branches) {
    hash.Update(branch);
    hash.Update(std::string_view("\n", 1));
  }
  return hash.digest();
}

TargetSpec TargetSpec::Parse(std::string_view spec, uint32_t timeout_ms) {
  TargetSpec out;
  if (spec.starts_with("builtin:")) {
    out = Builtin(std::string(spec.substr(8)), timeout_ms);
  } else if (spec.starts_with("exec:")) {
    out = External(std::string(spec.substr(5)), timeout_ms);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "target must be builtin:<name> or exec:<command>, got '" +
                    std::string(spec) + "'");
  }
  out.Validate();
  return out;
}

TargetSpec TargetSpec::Builtin(std::string name, uint32_t timeout_ms) {
  return TargetSpec{Kind::kBuiltin, std::move(name), timeout_ms};
}

TargetSpec TargetSpec::External(std::string command_template,
                                uint32_t timeout_ms) {
  return TargetSpec{Kind::kExternal, std::move(command_template), timeout_ms};
}

void TargetSpec::Validate() const {
  if (timeout_ms < 1) {
    throw Error(ErrorCode::kInvalidArgument, "timeout_ms must be at least 1");
  }
  if (kind == Kind::kBuiltin) {
    const auto names = BuiltinTargetNames();
    if (std::find(names.begin(), names.end(), command) == names.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown builtin target '" + command + "'");
    }
    return;
  }
  if (CountOccurrences(command, kInputPlaceholder) != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "command template must contain {input} exactly once");
  }
  if (SplitCommand(command).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty command template");
  }
}

std::string TargetSpec::ToString() const {
  return (kind == Kind::kBuiltin ? "builtin:" : "exec:") + command;
}

ExecOutcome ClassifyOutcome(const RawStatus& status, uint32_t timeout_ms) {
  if (status.state == RawStatus::State::kRunning ||
      status.elapsed_ms > static_cast<int64_t>(timeout_ms)) {
    return {OutcomeClass::kTimeout, 0, {}};
  }
  if (status.state == RawStatus::State::kSignaled) {
    return {OutcomeClass::kCrash, status.value, {}};
  }
  if (status.value == 0) return {OutcomeClass::kOk, 0, {}};
  return {OutcomeClass::kReject, status.value, {}};
}

std::vector<std::string> BuiltinTargetNames() {
  return {std::string(kGnbValidatorName)};
}

ExecResult Execute(const TargetSpec& spec, std::string_view input) {
  static std::atomic<uint64_t> next_seq{0};
  return Execute(spec, input,
                 ExecContext{"adhoc-" + std::to_string(::getpid()),
                             next_seq.fetch_add(1)});
}

ExecResult Execute(const TargetSpec& spec, std::string_view input,
                   const ExecContext& context) {
  spec.Validate();
  if (spec.kind == TargetSpec::Kind::kBuiltin) {
    return ValidateGnbText(input);
  }
  return ExecuteExternal(spec, input, context);
}

std::vector<std::string> SplitCommand(std::string_view command) {
  std::vector<std::string> words;
  std::string current;
  bool in_word = false;
  char quote = 0;
  for (char c : command) {
    if (quote != 0) {
      if (c == quote) {
        quote = 0;
      } else {
        current += c;
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (c == ' ' || c == '\t' || c == '\n') {
      if (in_word) words.push_back(std::move(current));
      current.clear();
      in_word = false;
    } else {
      current += c;
      in_word = true;
    }
  }
  if (quote != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "unterminated quote in command template");
  }
  if (in_word) words.push_back(std::move(current));
  return words;
}

std::string StagingRoot() {
  if (const char* dir = std::getenv("CONFFUZZ_TMPDIR"); dir && *dir) {
    return dir;
  }
  return (std::filesystem::temp_directory_path() / "conffuzz").string();
}

}  // namespace conffuzz
