// Copyright 2026 The mvsgd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MVSGD_SELFTEST_H_
#define MVSGD_SELFTEST_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mvsgd {

struct SelftestResult {
  std::size_t mask_trials = 0;
  std::size_t mask_failures = 0;
  std::size_t quant_trials = 0;
  std::size_t quant_failures = 0;
  std::vector<std::string> messages;  // first few failure descriptions

  bool ok() const { return mask_failures == 0 && quant_failures == 0; }
};

// Randomized round trips of the position codec (dim <= 2^16, block sizes
// 2..1024) and the quantizer (sign, range and interval-membership checks,
// plus the binary32 wire form).
SelftestResult run_codec_selftest(std::size_t mask_trials,
                                  std::size_t quant_trials, std::uint64_t seed);

}  // namespace mvsgd

#endif  // MVSGD_SELFTEST_H_
