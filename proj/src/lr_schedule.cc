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

#include "mvsgd/lr_schedule.h"

#include "mvsgd/errors.h"

namespace mvsgd {

void LrSchedule::validate() const {
  if (!(base_rate > 0.0)) throw InvalidArgument("lr schedule: base_rate must be > 0");
  if (warmup_rounds < 0) throw InvalidArgument("lr schedule: warmup_rounds must be >= 0");
  if (!(warmup_start >= 0.0) || warmup_start > base_rate) {
    throw InvalidArgument("lr schedule: warmup_start must lie in [0, base_rate]");
  }
  for (const auto& d : decays) {
    if (!(d.factor > 0.0 && d.factor <= 1.0)) {
      throw InvalidArgument("lr schedule: decay factors must lie in (0, 1]");
    }
  }
}

double lr_at(const LrSchedule& schedule, std::int64_t round) {
  if (round < schedule.warmup_rounds) {
    const double frac = static_cast<double>(round) / static_cast<double>(schedule.warmup_rounds);
    return schedule.warmup_start + (schedule.base_rate - schedule.warmup_start) * frac;
  }
  double lr = schedule.base_rate;
  for (const auto& d : schedule.decays) {
    if (round >= d.round) lr *= d.factor;
  }
  return lr;
}

}  // namespace mvsgd
