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

#include "core/config.h"

#include <charconv>
#include <cstdio>
#include <set>
#include <string>
#include <system_error>
#include <utility>

#include "core/error.h"

namespace conffuzz {
namespace {

bool IsIdentStart(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool IsIdentChar(char c) { return IsIdentStart(c) || (c >= '0' && c <= '9'); }

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

class ConfigParser {
 public:
  explicit ConfigParser(std::string_view text) : text_(text) {}

  ConfigDocument Parse() {
    ConfigDocument doc;
    SkipBlank();
    while (!AtEnd()) {
      ParseSettingInto(doc.root);
      SkipBlank();
    }
    return doc;
  }

 private:
  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSyntaxError,
                "syntax error at " + std::to_string(line_) + ":" +
                    std::to_string(pos_ - line_start_ + 1) + ": " + what);
  }

  void SkipBlank() {
    while (!AtEnd()) {
      const char c = Peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        Advance();
      } else if (c == '#' ||
                 (c == '/' && pos_ + 1 < text_.size() &&
                  text_[pos_ + 1] == '/')) {
        while (!AtEnd() && Peek() != '\n') Advance();
      } else if (c == '/' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '*') {
        Advance();
        Advance();
        while (!AtEnd() && !(Peek() == '*' && pos_ + 1 < text_.size() &&
                             text_[pos_ + 1] == '/')) {
          Advance();
        }
        if (AtEnd()) Fail("unterminated comment");
        Advance();
        Advance();
      } else {
        return;
      }
    }
  }

  void Expect(char c) {
    SkipBlank();
    if (Peek() != c) {
      Fail(std::string("expected '") + c + "'" +
           (AtEnd() ? " before end of input" : ""));
    }
    Advance();
  }

  std::string ParseIdent() {
    SkipBlank();
    if (!IsIdentStart(Peek())) Fail("expected setting name");
    const size_t begin = pos_;
    while (!AtEnd() && IsIdentChar(Peek())) Advance();
    return std::string(text_.substr(begin, pos_ - begin));
  }

  void ParseSettingInto(Group& group) {
    const size_t line = line_;
    const size_t column = pos_ - line_start_ + 1;
    std::string name = ParseIdent();
    Expect('=');
    Value value = ParseValue();
    Expect(';');
    if (group.Find(name) != nullptr) {
      throw Error(ErrorCode::kDuplicateName,
                  "duplicate setting '" + name + "' at " +
                      std::to_string(line) + ":" + std::to_string(column));
    }
    group.settings.push_back(Setting{std::move(name), std::move(value)});
  }

  Value ParseValue() {
    SkipBlank();
    const char c = Peek();
    if (c == '{') {
      Advance();
      Group group;
      SkipBlank();
      while (Peek() != '}') {
        if (AtEnd()) Fail("unterminated group");
        ParseSettingInto(group);
        SkipBlank();
      }
      Advance();
      return Value{std::move(group)};
    }
    if (c == '(') {
      Advance();
      List list;
      SkipBlank();
      if (Peek() == ')') {
        Advance();
        return Value{std::move(list)};
      }
      while (true) {
        list.items.push_back(ParseValue());
        SkipBlank();
        if (Peek() == ',') {
          Advance();
          continue;
        }
        if (Peek() == ')') {
          Advance();
          break;
        }
        Fail("expected ',' or ')' in list");
      }
      return Value{std::move(list)};
    }
    return Value{ParseScalar()};
  }

  Scalar ParseScalar() {
    const char c = Peek();
    if (c == '"') return Scalar::Str(ParseString());
    if (IsDigit(c) || c == '-' || c == '+' || c == '.') return ParseNumber();
    if (IsIdentStart(c)) {
      const size_t begin = pos_;
      while (!AtEnd() && IsIdentChar(Peek())) Advance();
      const std::string_view word = text_.substr(begin, pos_ - begin);
      if (EqualsIgnoreCase(word, "true")) return Scalar::Bool(true);
      if (EqualsIgnoreCase(word, "false")) return Scalar::Bool(false);
      pos_ = begin;
      Fail("unexpected word '" + std::string(word) + "'");
    }
    Fail(AtEnd() ? "expected value before end of input" : "expected value");
  }

  std::string ParseString() {
    Advance();  // opening quote
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail("unterminated string");
      char c = Peek();
      Advance();
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (AtEnd()) Fail("unterminated string");
      c = Peek();
      Advance();
      switch (c) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'f': out += '\f'; break;
        case 'x': {
          if (pos_ + 2 > text_.size()) Fail("bad \\x escape");
          unsigned value = 0;
          auto [end, ec] = std::from_chars(text_.data() + pos_,
                                           text_.data() + pos_ + 2, value, 16);
          if (ec != std::errc() || end != text_.data() + pos_ + 2) {
            Fail("bad \\x escape");
          }
          Advance();
          Advance();
          out += static_cast<char>(value);
          break;
        }
        default:
          Fail(std::string("unknown escape '\\") + c + "'");
      }
    }
    return out;
  }

  Scalar ParseNumber() {
    const size_t begin = pos_;
    if (Peek() == '-' || Peek() == '+') Advance();
    bool digits = false;
    bool real = false;
    while (IsDigit(Peek())) {
      Advance();
      digits = true;
    }
    if (Peek() == '.') {
      real = true;
      Advance();
      while (IsDigit(Peek())) {
        Advance();
        digits = true;
      }
    }
    if (!digits) {
      pos_ = begin;
      Fail("malformed number");
    }
    if (Peek() == 'e' || Peek() == 'E') {
      real = true;
      Advance();
      if (Peek() == '-' || Peek() == '+') Advance();
      if (!IsDigit(Peek())) Fail("malformed exponent");
      while (IsDigit(Peek())) Advance();
    }
    if (IsIdentChar(Peek())) Fail("malformed number");

    std::string_view token = text_.substr(begin, pos_ - begin);
    // from_chars rejects a leading '+'.
    if (token.front() == '+') token.remove_prefix(1);
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (real) {
      double value = 0;
      auto [end, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || end != last) Fail("real out of range");
      return Scalar::Real(value);
    }
    int64_t value = 0;
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || end != last) Fail("integer out of range");
    return Scalar::Int(value);
  }

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t line_start_ = 0;
};

void Indent(std::string& out, int level) { out.append(2 * level, ' '); }

void AppendValue(const Value& value, int level, std::string& out);

void AppendSetting(const Setting& setting, int level, std::string& out) {
  Indent(out, level);
  out += setting.name;
  out += " = ";
  if (const auto* scalar = std::get_if<Scalar>(&setting.value.node)) {
    out += scalar->ToString();
  } else if (const auto* group = std::get_if<Group>(&setting.value.node)) {
    if (group->settings.empty()) {
      out += "{}";
    } else {
      out += "{\n";
      for (const Setting& s : group->settings) AppendSetting(s, level + 1, out);
      Indent(out, level);
      out += "}";
    }
  } else {
    const List& list = std::get<List>(setting.value.node);
    if (list.items.empty()) {
      out += "()";
    } else {
      out += "(\n";
      for (size_t i = 0; i < list.items.size(); ++i) {
        if (i > 0) out += ",\n";
        AppendValue(list.items[i], level + 1, out);
      }
      out += "\n";
      Indent(out, level);
      out += ")";
    }
  }
  out += ";\n";
}

// A list element: rendered at `level` without a trailing newline.
void AppendValue(const Value& value, int level, std::string& out) {
  Indent(out, level);
  if (const auto* scalar = std::get_if<Scalar>(&value.node)) {
    out += scalar->ToString();
  } else if (const auto* group = std::get_if<Group>(&value.node)) {
    if (group->settings.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (const Setting& s : group->settings) AppendSetting(s, level + 1, out);
    Indent(out, level);
    out += "}";
  } else {
    const List& list = std::get<List>(value.node);
    if (list.items.empty()) {
      out += "()";
      return;
    }
    out += "(\n";
    for (size_t i = 0; i < list.items.size(); ++i) {
      if (i > 0) out += ",\n";
      AppendValue(list.items[i], level + 1, out);
    }
    out += "\n";
    Indent(out, level);
    out += ")";
  }
}

// Resolves `path` to a node, or nullptr.
const Value* Resolve(const ConfigDocument& doc, const ParamPath& path) {
  const Value* current = nullptr;
  const Group* group = &doc.root;
  for (const ParamPath::Segment& segment : path.segments()) {
    if (const auto* name = std::get_if<std::string>(&segment)) {
      if (group == nullptr) return nullptr;
      const Setting* s = group->Find(*name);
      if (s == nullptr) return nullptr;
      current = &s->value;
    } else {
      if (current == nullptr) return nullptr;
      const auto* list = std::get_if<List>(&current->node);
      const size_t index = std::get<size_t>(segment);
      if (list == nullptr || index >= list->items.size()) return nullptr;
      current = &list->items[index];
    }
    group = std::get_if<Group>(&current->node);
  }
  return current;
}

Value* ResolveMutable(ConfigDocument& doc, const ParamPath& path) {
  return const_cast<Value*>(Resolve(doc, path));
}

void CollectLeaves(const Value& value, const ParamPath& path,
                   std::vector<std::pair<ParamPath, Scalar>>& out);

void CollectGroup(const Group& group, const ParamPath& path,
                  std::vector<std::pair<ParamPath, Scalar>>& out) {
  for (const Setting& s : group.settings) {
    CollectLeaves(s.value, path.Child(s.name), out);
  }
}

void CollectLeaves(const Value& value, const ParamPath& path,
                   std::vector<std::pair<ParamPath, Scalar>>& out) {
  if (const auto* scalar = std::get_if<Scalar>(&value.node)) {
    out.emplace_back(path, *scalar);
  } else if (const auto* group = std::get_if<Group>(&value.node)) {
    CollectGroup(*group, path, out);
  } else {
    const List& list = std::get<List>(value.node);
    for (size_t i = 0; i < list.items.size(); ++i) {
      CollectLeaves(list.items[i], path.Index(i), out);
    }
  }
}

}  // namespace

std::string Scalar::ToString() const {
  if (is_int()) return std::to_string(as_int());
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_real()) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), as_real());
    std::string out(buf, end);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
  }
  std::string out = "\"";
  for (char c : as_str()) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char esc[5];
          std::snprintf(esc, sizeof(esc), "\\x%02x",
                        static_cast<unsigned char>(c));
          out += esc;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

const Setting* Group::Find(std::string_view name) const {
  for (const Setting& s : settings) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool Group::operator==(const Group& other) const {
  return settings == other.settings;
}

bool List::operator==(const List& other) const { return items == other.items; }

ParamPath ParamPath::Parse(std::string_view text) {
  auto fail = [&]() -> ParamPath {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed parameter path '" + std::string(text) + "'");
  };
  std::vector<Segment> segments;
  size_t i = 0;
  bool expect_name = true;
  while (i < text.size()) {
    if (text[i] == '[') {
      if (segments.empty()) return fail();
      const size_t close = text.find(']', i);
      if (close == std::string_view::npos || close == i + 1) return fail();
      size_t index = 0;
      auto [end, ec] =
          std::from_chars(text.data() + i + 1, text.data() + close, index);
      if (ec != std::errc() || end != text.data() + close) return fail();
      segments.emplace_back(index);
      i = close + 1;
      expect_name = false;
      continue;
    }
    if (!expect_name) {
      if (text[i] != '.') return fail();
      ++i;
    }
    const size_t begin = i;
    if (i >= text.size() || !IsIdentStart(text[i])) return fail();
    while (i < text.size() && IsIdentChar(text[i])) ++i;
    segments.emplace_back(std::string(text.substr(begin, i - begin)));
    expect_name = false;
  }
  if (segments.empty()) return fail();
  return ParamPath(std::move(segments));
}

ParamPath ParamPath::Child(std::string name) const {
  ParamPath out = *this;
  out.segments_.emplace_back(std::move(name));
  return out;
}

ParamPath ParamPath::Index(size_t index) const {
  ParamPath out = *this;
  out.segments_.emplace_back(index);
  return out;
}

std::string ParamPath::ToString() const {
  std::string out;
  for (const Segment& segment : segments_) {
    if (const auto* name = std::get_if<std::string>(&segment)) {
      if (!out.empty()) out += '.';
      out += *name;
    } else {
      out += '[';
      out += std::to_string(std::get<size_t>(segment));
      out += ']';
    }
  }
  return out;
}

ConfigDocument ParseConfig(std::string_view text) {
  return ConfigParser(text).Parse();
}

std::string SerializeConfig(const ConfigDocument& doc) {
  std::string out;
  for (const Setting& s : doc.root.settings) AppendSetting(s, 0, out);
  return out;
}

std::optional<Scalar> FindParam(const ConfigDocument& doc,
                                const ParamPath& path) {
  const Value* value = Resolve(doc, path);
  if (value == nullptr || !value->is_scalar()) return std::nullopt;
  return std::get<Scalar>(value->node);
}

Scalar GetParam(const ConfigDocument& doc, const ParamPath& path) {
  const Value* value = Resolve(doc, path);
  if (value == nullptr) {
    throw Error(ErrorCode::kPathNotFound, "no parameter " + path.ToString());
  }
  if (!value->is_scalar()) {
    throw Error(ErrorCode::kNotAScalar, path.ToString() + " is not a scalar");
  }
  return std::get<Scalar>(value->node);
}

ConfigDocument SetParam(const ConfigDocument& doc, const ParamPath& path,
                        Scalar value) {
  ConfigDocument out = doc;
  Value* target = ResolveMutable(out, path);
  if (target == nullptr) {
    throw Error(ErrorCode::kPathNotFound, "no parameter " + path.ToString());
  }
  if (!target->is_scalar()) {
    throw Error(ErrorCode::kNotAScalar, path.ToString() + " is not a scalar");
  }
  target->node = std::move(value);
  return out;
}

std::vector<std::pair<ParamPath, Scalar>> ScalarLeaves(
    const ConfigDocument& doc) {
  std::vector<std::pair<ParamPath, Scalar>> out;
  CollectGroup(doc.root, ParamPath(), out);
  return out;
}

std::vector<ParamDiff> DiffParams(const ConfigDocument& a,
                                  const ConfigDocument& b) {
  std::vector<ParamDiff> out;
  std::set<std::string> seen;
  for (auto& [path, value] : ScalarLeaves(a)) {
    seen.insert(path.ToString());
    std::optional<Scalar> other = FindParam(b, path);
    if (other != value) out.push_back({path, value, std::move(other)});
  }
  for (auto& [path, value] : ScalarLeaves(b)) {
    if (seen.contains(path.ToString())) continue;
    out.push_back({path, std::nullopt, value});
  }
  return out;
}

}  // namespace conffuzz
