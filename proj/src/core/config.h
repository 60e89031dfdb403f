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

// The gNB configuration dialect: a libconfig-shaped subset with
//
//   name = 1;                  // Int (64-bit signed)
//   name = 1.5;                // Real
//   name = "text";             // Str
//   name = true;               // Bool
//   name = { a = 1; b = 2; };  // Group
//   name = ( 1, { c = 3; } );  // List
//
// plus `#`, `//` and `/* */` comments. Parameters are addressed by dotted
// paths such as `gNBs[0].servingCellConfigCommon[0].dl_carrierBandwidth`.

#ifndef CONFFUZZ_CORE_CONFIG_H_
#define CONFFUZZ_CORE_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace conffuzz {

class Scalar {
 public:
  using Storage = std::variant<int64_t, double, std::string, bool>;

  Scalar() : value_(int64_t{0}) {}
  static Scalar Int(int64_t v) { return Scalar(Storage(v)); }
  static Scalar Real(double v) { return Scalar(Storage(v)); }
  static Scalar Str(std::string v) { return Scalar(Storage(std::move(v))); }
  static Scalar Bool(bool v) { return Scalar(Storage(v)); }

  bool is_int() const { return std::holds_alternative<int64_t>(value_); }
  bool is_real() const { return std::holds_alternative<double>(value_); }
  bool is_str() const { return std::holds_alternative<std::string>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }

  int64_t as_int() const { return std::get<int64_t>(value_); }
  double as_real() const { return std::get<double>(value_); }
  const std::string& as_str() const { return std::get<std::string>(value_); }
  bool as_bool() const { return std::get<bool>(value_); }

  // Canonical source form: `106`, `1.5`, `"text"`, `true`.
  std::string ToString() const;

  bool operator==(const Scalar&) const = default;

 private:
  explicit Scalar(Storage v) : value_(std::move(v)) {}
  Storage value_;
};

struct Setting;
struct Value;

struct Group {
  std::vector<Setting> settings;

  const Setting* Find(std::string_view name) const;
  bool operator==(const Group& other) const;
};

struct List {
  std::vector<Value> items;

  bool operator==(const List& other) const;
};

struct Value {
  std::variant<Scalar, Group, List> node;

  bool is_scalar() const { return std::holds_alternative<Scalar>(node); }
  bool operator==(const Value&) const = default;
};

struct Setting {
  std::string name;
  Value value;

  bool operator==(const Setting&) const = default;
};

struct ConfigDocument {
  Group root;

  bool operator==(const ConfigDocument&) const = default;
};

class ParamPath {
 public:
  // A segment is a setting name or a list index.
  using Segment = std::variant<std::string, size_t>;

  ParamPath() = default;
  explicit ParamPath(std::vector<Segment> segments)
      : segments_(std::move(segments)) {}

  // Throws kInvalidArgument for a malformed path string.
  static ParamPath Parse(std::string_view text);

  const std::vector<Segment>& segments() const { return segments_; }
  ParamPath Child(std::string name) const;
  ParamPath Index(size_t index) const;

  // `a.b[0].c`
  std::string ToString() const;

  bool operator==(const ParamPath&) const = default;

 private:
  std::vector<Segment> segments_;
};

// Throws kSyntaxError (message carries line:column) or kDuplicateName.
ConfigDocument ParseConfig(std::string_view text);

// Canonical form: one setting per line, two spaces of indent per nesting
// level, every setting terminated by `;`.
std::string SerializeConfig(const ConfigDocument& doc);

// Throws kPathNotFound or kNotAScalar.
Scalar GetParam(const ConfigDocument& doc, const ParamPath& path);
std::optional<Scalar> FindParam(const ConfigDocument& doc,
                                const ParamPath& path);

// Returns a copy with the scalar at `path` replaced. Throws kPathNotFound,
// or kNotAScalar when `path` names a group or list.
ConfigDocument SetParam(const ConfigDocument& doc, const ParamPath& path,
                        Scalar value);

struct ParamDiff {
  ParamPath path;
  std::optional<Scalar> before;  // nullopt: path absent in the first document
  std::optional<Scalar> after;   // nullopt: path absent in the second document

  bool operator==(const ParamDiff&) const = default;
};

// Scalar paths whose values differ, in document order of `a`, followed by
// scalar paths present only in `b`.
std::vector<ParamDiff> DiffParams(const ConfigDocument& a,
                                  const ConfigDocument& b);

// Every scalar leaf with its path, in document order.
std::vector<std::pair<ParamPath, Scalar>> ScalarLeaves(
    const ConfigDocument& doc);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_CONFIG_H_
