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

// Builtin demo target: a deterministic gNB configuration validator with five
// injected bugs. The bugs are plausible serving-cell consistency checks that
// "crash" (report an abort id) instead of rejecting the configuration:
//
//   101  absoluteFrequencySSB outside the band's ARFCN range
//   102  dl_absoluteFrequencyPointA outside the band's ARFCN range
//   103  dl_carrierBandwidth below the band's minimum
//   104  dl_frequencyBand not in the band table
//   105  controlResourceSetZero in the reserved range [13, 15]
//
// Checks 101-103 only apply to known bands. The ARFCN ranges are demo
// constants loosely shaped after n41/n78, not certified values.

#ifndef CONFFUZZ_CORE_GNB_VALIDATOR_H_
#define CONFFUZZ_CORE_GNB_VALIDATOR_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "core/config.h"
#include "core/target.h"

namespace conffuzz {

inline constexpr std::string_view kGnbValidatorName = "gnb-validator";

// Exit code of the validator for rejected configurations.
inline constexpr int kGnbRejectCode = 2;

enum GnbCrashId : int {
  kCrashSsbOutOfBand = 101,
  kCrashPointAOutOfBand = 102,
  kCrashBandwidthTooSmall = 103,
  kCrashUnknownBand = 104,
  kCrashReservedCoreset0 = 105,
};

struct BandSpec {
  int64_t band;
  int64_t arfcn_lo;
  int64_t arfcn_hi;
  int64_t min_bw_rb;
};

// Ordered by band.
const std::vector<BandSpec>& BandTable();
std::optional<BandSpec> FindBand(int64_t band);

struct ValidatorView {
  int64_t do_csirs = 0;
  int64_t do_srs = 0;
  int64_t control_resource_set_zero = 0;
  int64_t search_space_zero = 0;
  int64_t absolute_frequency_ssb = 0;
  int64_t dl_frequency_band = 0;
  int64_t dl_absolute_frequency_point_a = 0;
  int64_t dl_carrier_bandwidth = 0;
};

// Pure: identical documents give identical outcomes and feedback. Feedback
// records each comparison as `chk:<name>:<verdict>`.
ExecResult ValidateGnb(const ConfigDocument& doc);

// Parses first; unparseable text is rejected.
ExecResult ValidateGnbText(std::string_view text);

}  // namespace conffuzz

#endif  // CONFFUZZ_CORE_GNB_VALIDATOR_H_
