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

#ifndef MVSGD_LOCAL_SGD_H_
#define MVSGD_LOCAL_SGD_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvsgd/dataset.h"
#include "mvsgd/dense_vector.h"
#include "mvsgd/model.h"
#include "mvsgd/rng.h"

namespace mvsgd {

// Epoch-wise sampling without replacement over a shard. A batch size of at
// least the shard size yields the full shard, in order, every time and
// never touches the generator.
class BatchSampler {
 public:
  BatchSampler(std::size_t shard_size, std::size_t batch_size,
               std::uint64_t seed);

  std::vector<std::size_t> next_batch();

  std::size_t batch_size() const noexcept { return batch_size_; }

  friend bool operator==(const BatchSampler&, const BatchSampler&) = default;

 private:
  void reshuffle();

  std::size_t shard_size_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

// Runs `steps` SGD iterations from model.params on batches drawn from
// `sampler` and returns the model difference theta^(H) - theta^(0),
// accumulated as -lr * sum_h g^(h). `model` is not modified.
DenseVector local_steps(const Model& model, const Shard& shard, int steps,
                        double lr, BatchSampler& sampler);

}  // namespace mvsgd

#endif  // MVSGD_LOCAL_SGD_H_
