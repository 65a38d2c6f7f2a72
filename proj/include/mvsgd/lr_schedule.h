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

#ifndef MVSGD_LR_SCHEDULE_H_
#define MVSGD_LR_SCHEDULE_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace mvsgd {

struct LrDecay {
  std::int64_t round = 0;
  double factor = 1.0;

  friend bool operator==(const LrDecay&, const LrDecay&) = default;
};

// Linear warmup from warmup_start to base_rate over warmup_rounds, then
// step decay. Rounds play the role of epochs.
struct LrSchedule {
  double base_rate = 0.1;
  std::int64_t warmup_rounds = 0;
  double warmup_start = 0.1;
  std::vector<LrDecay> decays;

  // Throws InvalidArgument when an invariant does not hold.
  void validate() const;

  friend bool operator==(const LrSchedule&, const LrSchedule&) = default;
};

// Warmup value for round < warmup_rounds, otherwise base_rate times every
// decay factor whose round is <= `round`.
double lr_at(const LrSchedule& schedule, std::int64_t round);

}  // namespace mvsgd

#endif  // MVSGD_LR_SCHEDULE_H_
