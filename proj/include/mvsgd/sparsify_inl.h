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

#ifndef MVSGD_SPARSIFY_INL_H_
#define MVSGD_SPARSIFY_INL_H_

#include <algorithm>

namespace mvsgd::detail {

template <typename Better>
std::vector<std::size_t> select_best(std::span<const std::size_t> candidates,
                                     std::size_t k, Better better) {
  std::vector<std::size_t> pool(candidates.begin(), candidates.end());
  if (k < pool.size()) {
    std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k),
                     pool.end(), better);
    pool.resize(k);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace mvsgd::detail

#endif  // MVSGD_SPARSIFY_INL_H_
