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

#include "core/gnb_validator.h"

#include <algorithm>
#include <string>
#include <utility>

#include "core/error.h"
#include "core/table1.h"

namespace conffuzz {
namespace {

class Checker {
 public:
  void Record(std::string_view name, std::string_view verdict) {
    std::string branch = "chk:";
    branch += name;
    branch += ':';
    branch += verdict;
    result_.feedback.branches.insert(std::move(branch));
  }

  ExecResult Reject(std::string message) {
    result_.outcome = {OutcomeClass::kReject, kGnbRejectCode,
                       std::move(message)};
    return std::move(result_);
  }
  ExecResult Crash(GnbCrashId id, std::string message) {
    result_.outcome = {OutcomeClass::kCrash, id, std::move(message)};
    return std::move(result_);
  }
  ExecResult Ok() {
    result_.outcome = {OutcomeClass::kOk, 0, {}};
    return std::move(result_);
  }

 private:
  ExecResult result_;
};

std::string_view RangeVerdict(int64_t v, int64_t lo, int64_t hi) {
  if (v < lo) return "below";
  if (v > hi) return "above";
  return "in";
}

std::string FieldName(const ParamPath& path) {
  return std::get<std::string>(path.segments().back());
}

}  // namespace

const std::vector<BandSpec>& BandTable() {
  static const std::vector<BandSpec> table = {
      {41, 499200, 537999, 25},
      {78, 620000, 653333, 25},
  };
  return table;
}

std::optional<BandSpec> FindBand(int64_t band) {
  const auto& table = BandTable();
  auto it = std::find_if(table.begin(), table.end(),
                         [&](const BandSpec& b) { return b.band == band; });
  if (it == table.end()) return std::nullopt;
  return *it;
}

ExecResult ValidateGnb(const ConfigDocument& doc) {
  Checker check;

  std::array<int64_t, table1::kWatchCount> fields{};
  for (size_t i = 0; i < table1::kWatchCount; ++i) {
    const ParamPath& path = table1::WatchPaths()[i];
    const std::optional<Scalar> value = FindParam(doc, path);
    if (!value) {
      check.Record("extract_" + FieldName(path), "missing");
      return check.Reject("missing parameter " + path.ToString());
    }
    if (!value->is_int()) {
      check.Record("extract_" + FieldName(path), "not_int");
      return check.Reject(path.ToString() + " must be an integer");
    }
    fields[i] = value->as_int();
  }
  const ValidatorView view{fields[0], fields[1], fields[2], fields[3],
                           fields[4], fields[5], fields[6], fields[7]};

  for (auto [name, flag] : {std::pair<std::string_view, int64_t>{
                                "do_CSIRS", view.do_csirs},
                            {"do_SRS", view.do_srs}}) {
    if (flag != 0 && flag != 1) {
      check.Record(name, "invalid");
      return check.Reject(std::string(name) + " must be 0 or 1");
    }
    check.Record(name, flag == 1 ? "on" : "off");
  }
  for (auto [name, index] : {std::pair<std::string_view, int64_t>{
                                 "controlResourceSetZero_range",
                                 view.control_resource_set_zero},
                             {"searchSpaceZero_range", view.search_space_zero}}) {
    const std::string_view verdict = RangeVerdict(index, 0, 15);
    check.Record(name, verdict);
    if (verdict != "in") {
      return check.Reject(std::string(name) + " outside [0, 15]");
    }
  }

  const std::optional<BandSpec> band = FindBand(view.dl_frequency_band);
  check.Record("band_lookup", band ? "hit" : "miss");
  if (band) {
    const std::string band_label = "n" + std::to_string(band->band);
    const std::string range = " outside " + band_label + " ARFCN range [" +
                              std::to_string(band->arfcn_lo) + ", " +
                              std::to_string(band->arfcn_hi) + "]";

    std::string_view verdict = RangeVerdict(view.absolute_frequency_ssb,
                                            band->arfcn_lo, band->arfcn_hi);
    check.Record("ssb_raster", verdict);
    if (verdict != "in") {
      return check.Crash(
          kCrashSsbOutOfBand,
          "abort: absoluteFrequencySSB " +
              std::to_string(view.absolute_frequency_ssb) + range);
    }

    verdict = RangeVerdict(view.dl_absolute_frequency_point_a, band->arfcn_lo,
                           band->arfcn_hi);
    check.Record("pointA_range", verdict);
    if (verdict != "in") {
      return check.Crash(
          kCrashPointAOutOfBand,
          "abort: dl_absoluteFrequencyPointA " +
              std::to_string(view.dl_absolute_frequency_point_a) + range);
    }

    const bool too_small = view.dl_carrier_bandwidth < band->min_bw_rb;
    check.Record("carrier_bw", too_small ? "below_min" : "ok");
    if (too_small) {
      return check.Crash(kCrashBandwidthTooSmall,
                         "abort: dl_carrierBandwidth " +
                             std::to_string(view.dl_carrier_bandwidth) +
                             " below " + std::to_string(band->min_bw_rb) +
                             " RB for " + band_label);
    }
  }

  check.Record("band_known", band ? "yes" : "no");
  if (!band) {
    return check.Crash(kCrashUnknownBand,
                       "abort: unsupported dl_frequencyBand " +
                           std::to_string(view.dl_frequency_band));
  }

  const bool reserved = view.control_resource_set_zero >= 13 &&
                        view.control_resource_set_zero <= 15;
  check.Record("coreset0_index", reserved ? "reserved" : "ok");
  if (reserved) {
    return check.Crash(kCrashReservedCoreset0,
                       "abort: no CORESET#0 table entry for index " +
                           std::to_string(view.control_resource_set_zero));
  }
  return check.Ok();
}

ExecResult ValidateGnbText(std::string_view text) {
  ConfigDocument doc;
  try {
    doc = ParseConfig(text);
  } catch (const Error& e) {
    ExecResult result;
    result.feedback.branches.insert(
        "parse:" + std::string(ErrorCodeName(e.code())));
    result.outcome = {OutcomeClass::kReject, kGnbRejectCode, e.what()};
    return result;
  }
  ExecResult result = ValidateGnb(doc);
  result.feedback.branches.insert("parse:ok");
  return result;
}

}  // namespace conffuzz
